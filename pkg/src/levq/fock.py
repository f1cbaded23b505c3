"""Brute-force validation in a truncated Fock basis.

Everything here is deliberately independent of the word algebra: states are
propagated numerically through the pulse sequence with dense matrix
exponentials (Hermitian eigendecomposition), thermal averages are explicit
Boltzmann sums, dephasing is Monte-Carlo sampled, and entanglement comes
from an explicit reduced density matrix. Convergence metadata (cutoff,
leakage) accompanies every result.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .constants import HBAR, K_B
from .interference import (ConditionedTwoParticleState, PulseSchedule,
                           branch_propagators, coherent_overlap,
                           terms_from_branch_words)
from .params import QubitOscillatorParams
from .words import Displace, PhaseShift, Rotate, Word

LEAKAGE_TOL = 1e-8
NORM_TOL = 1e-10


class ConvergenceError(RuntimeError):
    """Raised when a truncated computation is not converged at its cutoff."""


def ladder(n_max: int) -> np.ndarray:
    """Annihilation operator on the n = 0..n_max basis."""
    return np.diag(np.sqrt(np.arange(1, n_max + 1)), 1)


def unitary_from_hermitian(h: np.ndarray, t: float = 1.0) -> np.ndarray:
    """exp(-i h t) for Hermitian h, via eigendecomposition."""
    lam, vec = np.linalg.eigh(h)
    return (vec * np.exp(-1j * lam * t)) @ vec.conj().T


def displacement_matrix(alpha: complex, n_max: int, check: bool = True) -> np.ndarray:
    """Truncated displacement operator exp(alpha adag - conj(alpha) a).

    Computed as exp(-i K) with the Hermitian generator
    K = i (alpha adag - conj(alpha) a). With ``check`` the vacuum matrix
    element is compared against exp(-|alpha|^2 / 2); a deviation beyond
    1e-10 raises :class:`ConvergenceError` (cutoff too small for |alpha|).
    """
    a = ladder(n_max)
    gen = 1j * (alpha * a.conj().T - np.conjugate(alpha) * a)
    d = unitary_from_hermitian(gen)
    if check:
        exact = math.exp(-abs(alpha)**2 / 2.0)
        if abs(d[0, 0] - exact) > 1e-10:
            raise ConvergenceError(
                f"displacement cutoff n_max={n_max} too small for |alpha|={abs(alpha):.3g}")
    return d


def word_matrix(word: Word, n_max: int, check: bool = True) -> np.ndarray:
    """Dense Fock-basis matrix of a phase-space word (product in word order)."""
    n = np.arange(n_max + 1)
    out = np.eye(n_max + 1, dtype=complex)
    for op in word.ops:
        if isinstance(op, Displace):
            out = out @ displacement_matrix(op.alpha, n_max, check=check)
        elif isinstance(op, Rotate):
            out = out * np.exp(-1j * op.angle * n)[np.newaxis, :]
        elif isinstance(op, PhaseShift):
            out = out * cmath.exp(1j * op.angle)
        else:
            raise TypeError(f"unknown primitive {op!r}")
    return out


def build_hamiltonian(params: QubitOscillatorParams, n_max: int) -> np.ndarray:
    """Qubit-oscillator Hamiltonian on |qubit> x |n=0..n_max>, in joules.

    H = e_c P_e + hbar omega adag a - hbar kappa P_e (a + adag)
        - v_ext (a + adag),  P_e = |e><e|.
    Basis ordering: ground block first, then excited block.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    a = ladder(n_max)
    x = a + a.conj().T
    number = np.diag(np.arange(n_max + 1.0))
    eye = np.eye(n_max + 1)
    p_e = np.diag([0.0, 1.0])
    h = (params.e_c * np.kron(p_e, eye)
         + HBAR * params.omega * np.kron(np.eye(2), number)
         - HBAR * params.kappa * np.kron(p_e, x)
         - params.v_ext * np.kron(np.eye(2), x))
    return h


@dataclass
class TruncatedState:
    """Qubit x oscillator amplitudes, ground block then excited block."""

    amplitudes: np.ndarray
    n_max: int

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, complex)
        if self.amplitudes.shape != (2 * (self.n_max + 1),):
            raise ValueError("amplitude vector must have length 2*(n_max+1)")

    @classmethod
    def ground(cls, n_fock: int, n_max: int) -> "TruncatedState":
        amp = np.zeros(2 * (n_max + 1), complex)
        amp[n_fock] = 1.0
        return cls(amp, n_max)

    @property
    def g_block(self) -> np.ndarray:
        return self.amplitudes[: self.n_max + 1]

    @property
    def e_block(self) -> np.ndarray:
        return self.amplitudes[self.n_max + 1:]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def leakage(self) -> float:
        """Population in the top 10 % of Fock levels (both qubit blocks)."""
        lo = int(math.floor(0.9 * (self.n_max + 1)))
        return float(np.sum(np.abs(self.g_block[lo:])**2)
                     + np.sum(np.abs(self.e_block[lo:])**2))

    def excited_population(self) -> float:
        return float(np.sum(np.abs(self.e_block)**2))


@lru_cache(maxsize=16)
def _block_eigs(omega: float, kappa: float, e_c: float, v_ext: float, n_max: int):
    # separate eigensystems for the two qubit blocks (H has no qubit mixing)
    a = ladder(n_max)
    x = a + a.conj().T
    number = np.diag(np.arange(n_max + 1.0))
    h_g = HBAR * omega * number - v_ext * x
    h_e = e_c * np.eye(n_max + 1) + h_g - HBAR * kappa * x
    return np.linalg.eigh(h_g), np.linalg.eigh(h_e)


def _evolve_block(eig, psi: np.ndarray, t: float) -> np.ndarray:
    lam, vec = eig
    return vec @ (np.exp(-1j * lam * t / HBAR) * (vec.conj().T @ psi))


def _pulse(theta: float, psi_g: np.ndarray, psi_e: np.ndarray):
    # exp(i theta sigma_x / 2) acting instantaneously on the qubit
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return c * psi_g + 1j * s * psi_e, c * psi_e + 1j * s * psi_g


def propagate_sequence(initial: TruncatedState, params: QubitOscillatorParams,
                       schedule: PulseSchedule, check: bool = True) -> TruncatedState:
    """Propagate through pi/2 - t1 - pi - (t2-t1) - pi - (t3-t2) - pi/2.

    Free segments evolve under the full Hamiltonian; pulses act
    instantaneously. Norm and cutoff leakage are verified after every
    segment when ``check`` is set; violations raise
    :class:`ConvergenceError`.
    """
    n_max = initial.n_max
    eig_g, eig_e = _block_eigs(params.omega, params.kappa, params.e_c,
                               params.v_ext, n_max)
    psi_g = initial.g_block.copy()
    psi_e = initial.e_block.copy()
    psi_g, psi_e = _pulse(math.pi / 2.0, psi_g, psi_e)
    for seg, theta in zip(schedule.segments, (math.pi, math.pi, math.pi / 2.0)):
        psi_g = _evolve_block(eig_g, psi_g, seg)
        psi_e = _evolve_block(eig_e, psi_e, seg)
        state = TruncatedState(np.concatenate([psi_g, psi_e]), n_max)
        if check:
            if abs(state.norm() - 1.0) > NORM_TOL:
                raise ConvergenceError(f"norm drifted to {state.norm():.12f}")
            leak = state.leakage()
            if leak > LEAKAGE_TOL:
                raise ConvergenceError(
                    f"cutoff leakage {leak:.2e} exceeds {LEAKAGE_TOL:.0e} at n_max={n_max}")
        psi_g, psi_e = _pulse(theta, psi_g, psi_e)
    return TruncatedState(np.concatenate([psi_g, psi_e]), n_max)


@dataclass(frozen=True)
class OracleResult:
    """Population with the convergence metadata that produced it."""

    population: float
    n_max: int
    n_thermal_terms: int
    neglected_weight: float
    max_leakage: float


def oracle_population(params: QubitOscillatorParams, schedule: PulseSchedule,
                      temperature: float | None = None,
                      boltzmann_cut: float = 1e-8,
                      n_max: int = 400) -> OracleResult:
    """Thermal qubit population by explicit Fock-state propagation.

    Initial Fock states are Boltzmann-averaged in ascending order until the
    neglected tail weight drops below ``boltzmann_cut``. Dephasing is not
    part of the unitary propagation (``params.gamma_d`` is ignored here; see
    :func:`mc_dephasing`).
    """
    if not 0 < boltzmann_cut < 1:
        raise ValueError("boltzmann_cut must lie in (0, 1)")
    t = params.temperature if temperature is None else temperature
    if t <= 0:
        n_terms = 1
        weights = [1.0]
    else:
        beta_w = HBAR * params.omega / (K_B * t)
        n_terms = int(math.ceil(math.log(1.0 / boltzmann_cut) / beta_w))
        n_terms = max(n_terms, 1)
        norm = 1.0 - math.exp(-beta_w)
        weights = [norm * math.exp(-beta_w * n) for n in range(n_terms)]
    population = 0.0
    max_leak = 0.0
    for n, weight in enumerate(weights):
        final = propagate_sequence(TruncatedState.ground(n, n_max), params, schedule)
        max_leak = max(max_leak, final.leakage())
        population += weight * final.excited_population()
    neglected = 1.0 - math.fsum(weights)
    # the neglected thermal states would each contribute a population in [0, 1]
    return OracleResult(population=population, n_max=n_max,
                        n_thermal_terms=n_terms, neglected_weight=neglected,
                        max_leakage=max_leak)


@dataclass(frozen=True)
class MCDephasingResult:
    mean: float
    stderr: float
    n_samples: int
    seed: int


def mc_dephasing(params: QubitOscillatorParams, schedule: PulseSchedule,
                 width: float, seed: int, n_samples: int) -> MCDephasingResult:
    """Monte-Carlo dephasing from Lorentzian charge-energy noise.

    Each free-evolution segment draws an independent charge-energy offset
    from a Lorentzian of half-width ``hbar * width`` (``width`` in rad/s;
    the equivalent gate-charge half-width is
    ``gate_charge_width(width, c_sigma)``). Averaging the resulting analytic
    populations multiplies the interference contrast by exp(-width * t3),
    which is how the dephasing rate enters the closed forms.
    """
    if n_samples < 100:
        raise ValueError("n_samples must be at least 100")
    rng = np.random.default_rng(seed)
    base = replace(params, gamma_d=0.0)
    pops = np.empty(n_samples)
    for i in range(n_samples):
        offsets = HBAR * width * rng.standard_cauchy(3)
        words = [branch_propagators(replace(base, e_c=base.e_c + off), seg)
                 for off, seg in zip(offsets, schedule.segments)]
        (g1, e1, _), (g2, e2, _), (g3, e3, _) = words
        terms = terms_from_branch_words(base, schedule.t3,
                                        g3 * e2 * g1, e3 * g2 * e1)
        pops[i] = terms.population
    mean = float(np.mean(pops))
    stderr = float(np.std(pops, ddof=1) / math.sqrt(n_samples))
    return MCDephasingResult(mean=mean, stderr=stderr,
                             n_samples=n_samples, seed=seed)


def oracle_entanglement(state: ConditionedTwoParticleState, n_max: int) -> float:
    """Single-mode entropy (nats) from an explicit two-mode reduced density matrix.

    Builds the T = 0 conditioned state with truncated displacement matrices,
    traces out the second mode, and diagonalizes. The truncated norm is
    compared against the exact Gram-matrix norm; disagreement beyond 1e-8
    raises :class:`ConvergenceError`.
    """
    dim = n_max + 1
    vac_a1 = displacement_matrix(state.alpha1, n_max)[:, 0]
    vac_b1 = displacement_matrix(state.beta1, n_max)[:, 0]
    vac_a2 = displacement_matrix(state.alpha2, n_max)[:, 0]
    vac_b2 = displacement_matrix(state.beta2, n_max)[:, 0]
    lam = state.sign * cmath.exp(1j * state.phase)
    psi = (np.outer(vac_a1, vac_b2) + lam * np.outer(vac_b1, vac_a2)).reshape(dim, dim)
    norm_sq = float(np.sum(np.abs(psi)**2))
    o1 = coherent_overlap(state.alpha1, state.beta1)
    o2 = coherent_overlap(state.beta2, state.alpha2)
    exact_norm_sq = 2.0 + 2.0 * (lam * o1.conjugate() * o2.conjugate()).real
    if exact_norm_sq <= 1e-300:
        raise ValueError("conditioned state is not normalizable")
    if abs(norm_sq - exact_norm_sq) > 1e-8 * max(exact_norm_sq, 1.0):
        raise ConvergenceError(
            f"two-mode cutoff n_max={n_max} not converged "
            f"(norm^2 {norm_sq:.10f} vs exact {exact_norm_sq:.10f})")
    rho1 = psi @ psi.conj().T / norm_sq
    eigs = np.linalg.eigvalsh(rho1)
    entropy = 0.0
    for p in eigs:
        if p > 1e-18:
            entropy -= p * math.log(p)
    return float(entropy)
