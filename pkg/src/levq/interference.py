"""Pulsed qubit interferometry: exact branch propagators and fringe formulas.

The protocol drives the qubit with x-rotations (pi/2 at t = 0, pi at t1 and
t2, pi/2 at t3) while the oscillator evolves branch-dependently. A pulse of
angle theta is exp(i theta sigma_x / 2), so the opening pi/2 pulse maps the
ground state to (|g> + i |e>)/sqrt(2). Between pulses each qubit branch
propagates the oscillator with a displaced rotation; the final qubit
population carries the interference phase.

All closed forms here are exact consequences of the word algebra in
:mod:`levq.words`; :mod:`levq.fock` provides the independent brute-force
check.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from .constants import HBAR, K_B
from .params import (QubitOscillatorParams, SystemSpec, derive_system,
                     external_drive, thermal_occupation)
from .words import Displace, PhaseShift, ReducedWord, Rotate, Word, reduce_word


@dataclass(frozen=True)
class PulseSchedule:
    """Times of the two pi-pulses and the closing pi/2-pulse, 0 < t1 <= t2 <= t3."""

    t1: float
    t2: float
    t3: float

    def __post_init__(self):
        if not (0 < self.t1 <= self.t2 <= self.t3):
            raise ValueError("schedule must satisfy 0 < t1 <= t2 <= t3")

    @classmethod
    def symmetric(cls, tau: float, omega: float) -> "PulseSchedule":
        """Schedule (tau, tau + dt, 2 tau + dt) with dt chosen so the branches close."""
        dt = delta_tau(tau, omega)
        return cls(tau, tau + dt, 2 * tau + dt)

    @property
    def segments(self):
        return (self.t1, self.t2 - self.t1, self.t3 - self.t2)


def delta_tau(tau: float, omega: float) -> float:
    """Pi-pulse separation closing the branch trajectories for pulse time tau.

    Returns Delta with d(tau, tau + Delta, 2 tau + Delta) = 0, continuous in
    tau on (0, pi/omega) and tending to 2 tau as tau -> 0. Evaluated as
    Delta = (2/omega) atan2(sin(omega tau), 2 - cos(omega tau)), which is the
    single-valued branch of the closure condition.
    """
    x = omega * tau
    if not 0 < x < math.pi:
        raise ValueError("delta_tau requires 0 < omega*tau < pi")
    return 2.0 / omega * math.atan2(math.sin(x), 2.0 - math.cos(x))


def closure(omega: float, schedule: PulseSchedule) -> complex:
    """Branch-closure function d = 2 e^{i w t1} - 2 e^{i w t2} + e^{i w t3} - 1.

    d = 0 means the two superposed oscillator trajectories recombine in both
    position and momentum at t3.
    """
    return (2 * cmath.exp(1j * omega * schedule.t1)
            - 2 * cmath.exp(1j * omega * schedule.t2)
            + cmath.exp(1j * omega * schedule.t3) - 1.0)


def branch_propagators(params: QubitOscillatorParams, t: float):
    """Oscillator propagators for the two qubit branches over a time t.

    Returns (ground word, excited word, excited-branch phase). The ground
    branch is D(v) R(wt) D(-v) with v = v_ext / (hbar w); the excited branch
    additionally displaces by kappa/w and carries the phase
    -t (e_c/hbar - kappa^2/w - 2 kappa v_ext / (hbar w)), which is already
    included in the returned word.
    """
    w = params.omega
    v = params.v_ext / (HBAR * w)
    g = params.kappa / w
    word_g = Word((Displace(v), Rotate(w * t), Displace(-v)))
    phase_e = -t * (params.e_c / HBAR - params.kappa**2 / w
                    - 2.0 * params.kappa * params.v_ext / (HBAR * w))
    word_e = Word((PhaseShift(phase_e), Displace(g + v), Rotate(w * t),
                   Displace(-(g + v))))
    return word_g, word_e, phase_e


def scheme_words(params: QubitOscillatorParams, schedule: PulseSchedule):
    """Branch words U+ and U- accumulated over the full pulse sequence.

    U+ follows ground/excited/ground across the three segments (the branch
    that starts in |g>), U- the complement. Operator order: the last segment
    is leftmost.
    """
    s1, s2, s3 = schedule.segments
    g1, e1, _ = branch_propagators(params, s1)
    g2, e2, _ = branch_propagators(params, s2)
    g3, e3, _ = branch_propagators(params, s3)
    return g3 * e2 * g1, e3 * g2 * e1


@dataclass(frozen=True)
class InterferenceTerms:
    """Decomposition of the final qubit population.

    population = 1/2 + 1/2 * thermal_envelope * dephasing * cos(phase).
    ``displacement`` is the net phase-space offset between the two branches
    at t3 (zero for a closed schedule).
    """

    phase: float
    thermal_envelope: float
    dephasing: float
    displacement: complex

    @property
    def population(self) -> float:
        return 0.5 + 0.5 * self.thermal_envelope * self.dephasing * math.cos(self.phase)


def _coth_half(omega: float, temperature: float) -> float:
    # coth(hbar w / 2 kB T), regularized to 1 at T = 0
    if temperature <= 0:
        return 1.0
    return 1.0 / math.tanh(HBAR * omega / (2.0 * K_B * temperature))


def terms_from_branch_words(params: QubitOscillatorParams, t3: float,
                            w_plus: Word, w_minus: Word) -> InterferenceTerms:
    """Interference decomposition for explicitly supplied branch words."""
    rel = reduce_word(w_plus.dagger() * w_minus)
    # rel.rotation vanishes: both branches rotate by omega * t3
    alpha = rel.displacement * cmath.exp(1j * params.omega * t3)
    coth = _coth_half(params.omega, params.temperature)
    env = math.exp(-coth * abs(alpha)**2 / 2.0)
    deph = math.exp(-params.gamma_d * t3)
    return InterferenceTerms(phase=rel.phase, thermal_envelope=env,
                             dephasing=deph, displacement=alpha)


def interference_terms(params: QubitOscillatorParams,
                       schedule: PulseSchedule) -> InterferenceTerms:
    """Exact interference phase and envelope from the word algebra."""
    w_plus, w_minus = scheme_words(params, schedule)
    return terms_from_branch_words(params, schedule.t3, w_plus, w_minus)


def qubit_population(params: QubitOscillatorParams,
                     schedule: PulseSchedule) -> float:
    """Final qubit excited-state population, in [0, 1]."""
    return interference_terms(params, schedule).population


def population_closed_form(params: QubitOscillatorParams,
                           schedule: PulseSchedule) -> float:
    """Population from the closed-form fringe expression.

    1/2 + 1/2 e^{-gamma_d t3} exp[-(g^2/2) coth(hbar w / 2 kB T) |d|^2]
    cos[g (g + 2v) Im d - chi (2 t1 - 2 t2 + t3)] with g = kappa/w,
    v = v_ext/(hbar w), chi = kappa^2/w + 2 kappa v_ext/(hbar w) - e_c/hbar.
    Agrees with :func:`qubit_population` to machine precision.
    """
    w = params.omega
    g = params.kappa / w
    v = params.v_ext / (HBAR * w)
    d = closure(w, schedule)
    coth = _coth_half(w, params.temperature)
    env = math.exp(-0.5 * g * g * coth * abs(d)**2)
    chi = params.kappa**2 / w + 2 * params.kappa * params.v_ext / (HBAR * w) - params.e_c / HBAR
    arg = g * (g + 2 * v) * d.imag - chi * (2 * schedule.t1 - 2 * schedule.t2 + schedule.t3)
    return 0.5 + 0.5 * math.exp(-params.gamma_d * schedule.t3) * env * math.cos(arg)


def population_symmetric(params: QubitOscillatorParams, tau: float,
                         dt: float | None = None) -> float:
    """Closed-schedule fringe cos^2[chi (tau - Delta/2)] (no envelope).

    Valid for the symmetric schedule (tau, tau + Delta, 2 tau + Delta); the
    dephasing factor e^{-gamma_d t3} still applies to the oscillating part.
    """
    w = params.omega
    if dt is None:
        dt = delta_tau(tau, w)
    chi = params.kappa**2 / w + 2 * params.kappa * params.v_ext / (HBAR * w) - params.e_c / HBAR
    t3 = 2 * tau + dt
    deph = math.exp(-params.gamma_d * t3)
    c = math.cos(chi * (tau - dt / 2.0))
    return 0.5 + deph * (c * c - 0.5)


@dataclass(frozen=True)
class FringeSeries:
    """Result of a fringe scan: per-point phase/envelope/population arrays."""

    sweep: str
    values: np.ndarray
    phase: np.ndarray
    thermal_envelope: np.ndarray
    dephasing: np.ndarray
    population: np.ndarray


_SWEEPS = ("u_dc", "tau", "e_c")


def fringe_scan(system: SystemSpec, schedule: PulseSchedule, sweep: str,
                lo: float, hi: float, n_points: int) -> FringeSeries:
    """Scan the interference signal against U_dc, tau, or E_c.

    * ``u_dc``: fixed schedule; z_s and V_ext are re-derived at each bias
      point (z_s is bias-independent, V_ext is linear in the bias).
    * ``tau``: t1 = tau, with the pi-pulse separation t2 - t1 and hence
      t3 - t2 - tau held at the base schedule's value, so the envelope peaks
      where the base schedule closes.
    * ``e_c``: fixed schedule, charge energy overridden per point.
    """
    if sweep not in _SWEEPS:
        raise ValueError(f"sweep must be one of {_SWEEPS}")
    if n_points < 2:
        raise ValueError("n_points must be at least 2")
    base = derive_system(system)
    values = np.linspace(lo, hi, n_points)
    dt_base = schedule.t2 - schedule.t1

    def point(x: float) -> InterferenceTerms:
        params, sched = base.qubit, schedule
        if sweep == "u_dc":
            trap = _replace_bias(system.trap, x)
            v_ext = external_drive(system.particle, trap, base.z_shift, base.omega)
            params = _replace(params, v_ext=v_ext)
        elif sweep == "tau":
            sched = PulseSchedule(x, x + dt_base, 2 * x + dt_base)
        else:
            params = _replace(params, e_c=x)
        return interference_terms(params, sched)

    terms = [point(x) for x in values]
    return FringeSeries(
        sweep=sweep,
        values=values,
        phase=np.array([t.phase for t in terms]),
        thermal_envelope=np.array([t.thermal_envelope for t in terms]),
        dephasing=np.array([t.dephasing for t in terms]),
        population=np.array([t.population for t in terms]),
    )


def _replace(params: QubitOscillatorParams, **kw) -> QubitOscillatorParams:
    return replace(params, **kw)


def _replace_bias(trap, u_dc):
    return replace(trap, u_dc=u_dc)


def remote_qubit_population(params: QubitOscillatorParams,
                            schedule: PulseSchedule,
                            e_c1: float, e_c2: float) -> float:
    """Population of a distant qubit conditioned on the local one being ground.

    cos^2[chi (tau - Delta/2)] with chi = kappa^2/w + 2 kappa v_ext/(hbar w)
    - (e_c1 - e_c2)/hbar, valid only at wave-packet overlap (closed
    schedule); other schedules are rejected.
    """
    d = closure(params.omega, schedule)
    if abs(d) > 1e-9:
        raise ValueError("remote population requires a closed (symmetric) schedule")
    w = params.omega
    chi = (params.kappa**2 / w + 2 * params.kappa * params.v_ext / (HBAR * w)
           - (e_c1 - e_c2) / HBAR)
    half = schedule.t1 - (schedule.t2 - schedule.t1) / 2.0
    return math.cos(chi * half)**2


@dataclass(frozen=True)
class ConditionedTwoParticleState:
    """Two-oscillator state after measuring both qubits before overlap.

    |Psi> ~ D1(alpha1) D2(beta2) |n m> + sign * e^{i phase} D1(beta1) D2(alpha2) |n m>,
    thermally weighted over (n, m) with per-mode occupations ``nbar``.
    ``sign`` is +1 when the two qubit outcomes differ and -1 when they agree.
    """

    alpha1: complex
    beta1: complex
    alpha2: complex
    beta2: complex
    phase: float
    sign: int
    nbar: tuple[float, float] = (0.0, 0.0)


def two_particle_conditioned_state(params1: QubitOscillatorParams,
                                   params2: QubitOscillatorParams,
                                   schedule: PulseSchedule,
                                   outcomes: tuple[int, int]) -> ConditionedTwoParticleState:
    """Conditioned state of two distant oscillators after qubit measurement.

    Both subsystems run the same pulse schedule; the qubits start in the
    singlet Bell state and are measured at t3, which must lie inside the
    pre-overlap window t1 + (t2 - t1) < t3 <= 2 t1 + (t2 - t1) for the
    symmetric schedule. ``outcomes`` are the measured qubit states
    (0 = ground, 1 = excited).
    """
    if params1.omega != params2.omega:
        raise ValueError("two-particle protocol requires identical oscillator frequencies")
    lo = schedule.t2
    hi = schedule.t1 + schedule.t2
    if not lo < schedule.t3 <= hi:
        raise ValueError("t3 must lie in the pre-overlap window (t2, t1 + t2]")
    if outcomes[0] not in (0, 1) or outcomes[1] not in (0, 1):
        raise ValueError("outcomes must be 0 (ground) or 1 (excited)")

    def branch(params):
        w_plus, w_minus = scheme_words(params, schedule)
        return reduce_word(w_plus), reduce_word(w_minus)

    p1, m1 = branch(params1)
    p2, m2 = branch(params2)
    phase = m1.phase + p2.phase - p1.phase - m2.phase
    sign = +1 if outcomes[0] != outcomes[1] else -1
    return ConditionedTwoParticleState(
        alpha1=p1.displacement, beta1=m1.displacement,
        alpha2=p2.displacement, beta2=m2.displacement,
        phase=phase, sign=sign,
        nbar=(thermal_nbar(params1), thermal_nbar(params2)),
    )


def thermal_nbar(params: QubitOscillatorParams) -> float:
    return thermal_occupation(params.omega, params.temperature)


def coherent_overlap(a: complex, b: complex) -> complex:
    """<a|b> = exp(-|a|^2/2 - |b|^2/2 + conj(a) b) for coherent states."""
    return cmath.exp(-abs(a)**2 / 2.0 - abs(b)**2 / 2.0 + a.conjugate() * b)


def entanglement_entropy_T0(state: ConditionedTwoParticleState) -> float:
    """Von Neumann entropy (nats) of one mode of the T = 0 conditioned state.

    The pure state is a two-branch superposition of coherent-state products,
    so the reduced state has at most two nonzero eigenvalues; they follow
    exactly from the 2x2 Gram matrix of the overlaps <alpha1|beta1> and
    <beta2|alpha2>. The result lies in [0, ln 2].
    """
    lam = state.sign * cmath.exp(1j * state.phase)
    o1 = coherent_overlap(state.alpha1, state.beta1)   # <alpha1|beta1>
    o2 = coherent_overlap(state.beta2, state.alpha2)   # <beta2|alpha2>
    norm_sq = 2.0 + 2.0 * (lam * o1.conjugate() * o2.conjugate()).real
    if norm_sq <= 1e-300:
        raise ValueError("conditioned state is not normalizable (identical branches, "
                         "destructive sign)")
    # rho_1 = (1/N) sum_ij C_ij |v_i><v_j| over v in {|alpha1>, |beta1>};
    # its nonzero spectrum equals that of C @ G with Gram matrix G.
    c = np.array([[1.0, lam.conjugate() * o2.conjugate()],
                  [lam * o2, abs(lam)**2]], dtype=complex)
    gram = np.array([[1.0, o1], [o1.conjugate(), 1.0]], dtype=complex)
    eig = np.linalg.eigvals(c @ gram) / norm_sq
    entropy = 0.0
    for p in eig.real:
        if p > 1e-18:
            entropy -= p * math.log(p)
    return entropy
