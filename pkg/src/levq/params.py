"""Physical specifications and derived scalar parameters.

Unit convention
---------------
All quantities are SI. Every frequency in this package is an *angular*
frequency in rad/s; quantities quoted elsewhere in kHz/MHz are understood
as 1e3/1e6 rad/s unless explicitly converted. Energies are in joules,
lengths in metres, capacitances in farads.

The reduced one-dimensional qubit-oscillator model is parametrized by
:class:`QubitOscillatorParams`; :func:`derive_system` assembles it from the
raw particle/trap/circuit specifications. The oscillator frequency fed into
the downstream coupling, shift, and drive formulas is the bare secular
frequency ``omega_z``; the capacitive stiffening correction (about +0.9 %
for the reference configuration) is reported separately via
:func:`corrected_frequency`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import AMU, E_CHARGE, HBAR, K_B, SILICON_DENSITY


@dataclass(frozen=True)
class ParticleSpec:
    """Rigid charged particle: mass, charge, body-frame multipoles, inertia.

    Attributes
    ----------
    mass : float
        Total mass (kg), > 0.
    charge : float
        Total charge (C).
    dipole_body : (3,) array
        Electric dipole vector in the body frame (C m).
    quadrupole_body : (3, 3) array
        Traceless electric quadrupole tensor in the body frame (C m^2);
        must be exactly symmetric as stored.
    inertia : (3,) array
        Principal moments of inertia (kg m^2), all > 0, conditioning
        bounded to 12 orders of magnitude.
    """

    mass: float
    charge: float
    dipole_body: np.ndarray = field(default_factory=lambda: np.zeros(3))
    quadrupole_body: np.ndarray = field(default_factory=lambda: np.zeros((3, 3)))
    inertia: np.ndarray = field(default_factory=lambda: np.ones(3))

    def __post_init__(self):
        object.__setattr__(self, "dipole_body", np.asarray(self.dipole_body, float))
        object.__setattr__(self, "quadrupole_body", np.asarray(self.quadrupole_body, float))
        object.__setattr__(self, "inertia", np.asarray(self.inertia, float))
        if not self.mass > 0:
            raise ValueError("particle mass must be positive")
        if self.dipole_body.shape != (3,):
            raise ValueError("dipole_body must be a 3-vector")
        if self.quadrupole_body.shape != (3, 3):
            raise ValueError("quadrupole_body must be a 3x3 tensor")
        if np.any(self.quadrupole_body != self.quadrupole_body.T):
            raise ValueError("quadrupole_body must be exactly symmetric")
        if self.inertia.shape != (3,) or not np.all(self.inertia > 0):
            raise ValueError("inertia must be three positive moments")
        if self.inertia.max() / self.inertia.min() > 1e12:
            raise ValueError("inertia spans more than 12 orders of magnitude; ill-conditioned")

    @classmethod
    def from_cylinder(cls, diameter, length, charge, dipole=0.0,
                      density=SILICON_DENSITY):
        """Homogeneous cylinder with its symmetry axis along body z.

        ``dipole`` is the dipole magnitude (C m) placed along the symmetry
        axis. Moments of inertia follow the solid homogeneous-cylinder
        formulas; the quadrupole tensor is left zero (pass an explicit
        ``ParticleSpec`` to model one).
        """
        radius = diameter / 2.0
        mass = density * math.pi * radius**2 * length
        i_axial = 0.5 * mass * radius**2
        i_trans = mass * (3 * radius**2 + length**2) / 12.0
        return cls(
            mass=mass,
            charge=charge,
            dipole_body=np.array([0.0, 0.0, dipole]),
            inertia=np.array([i_trans, i_trans, i_axial]),
        )


@dataclass(frozen=True)
class TrapSpec:
    """Hyperbolic Paul trap geometry and drive.

    ``z0`` is the half endcap distance (m); the ring sits at radius
    sqrt(2) z0. ``k`` is the dimensionless endcap geometry factor,
    0 < k <= 1/2 (1/2 for an ideal plate capacitor).
    """

    z0: float
    u_dc: float
    u_ac: float
    drive_frequency: float  # rad/s
    k: float

    def __post_init__(self):
        if not self.z0 > 0:
            raise ValueError("z0 must be positive")
        if not self.drive_frequency > 0:
            raise ValueError("drive_frequency must be positive")
        if not 0 < self.k <= 0.5:
            raise ValueError("geometry factor k must satisfy 0 < k <= 1/2")


@dataclass(frozen=True)
class CircuitSpec:
    """Endcap circuit and Cooper-pair-box parameters.

    ``c_sigma_override`` bypasses the capacitance breakdown when only the
    total box capacitance is known (the reference configuration quotes
    C_sigma = 4.4 fF without individual values).
    """

    c_endcap: float          # F
    c_coupling: float        # F
    c_gate: float            # F
    c_junction: float        # F
    resistance: float = 0.0  # Ohm
    i_critical: float = 0.0  # A
    flux: float = 0.0        # Wb
    gate_voltage: float = 0.0  # V
    flux_rate: float = 0.0   # V
    c_sigma_override: float | None = None

    def __post_init__(self):
        for name in ("c_endcap", "c_coupling", "c_gate", "c_junction"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.resistance < 0:
            raise ValueError("resistance must be non-negative")


@dataclass(frozen=True)
class DerivedCircuit:
    """Derived circuit scalars: C_eff, C_sigma, gate offset n_g, E_J."""

    c_eff: float
    c_sigma: float
    n_g: float
    e_j: float


@dataclass(frozen=True)
class QubitOscillatorParams:
    """Reduced 1-D qubit-oscillator model.

    Fields: oscillator angular frequency ``omega`` (rad/s), coupling
    ``kappa`` (rad/s), charge energy ``e_c`` (J), external linear drive
    ``v_ext`` (J), Cooper-pair occupation offset ``n_pairs``, qubit
    dephasing rate ``gamma_d`` (1/s), oscillator temperature (K).
    """

    omega: float
    kappa: float
    e_c: float
    v_ext: float = 0.0
    n_pairs: int = 0
    gamma_d: float = 0.0
    temperature: float = 0.0

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("omega must be positive")
        if self.gamma_d < 0:
            raise ValueError("gamma_d must be non-negative")
        if self.temperature < 0:
            raise ValueError("temperature must be non-negative")


def secular_frequencies(particle: ParticleSpec, trap: TrapSpec):
    """Secular centre-of-mass frequencies (rad/s) at zero DC bias.

    omega_z = |q| U_ac / (sqrt(2) M Omega z0^2), omega_x = omega_y = omega_z / 2.
    Zero charge gives (0, 0, 0).
    """
    w_z = abs(particle.charge) * trap.u_ac / (
        math.sqrt(2.0) * particle.mass * trap.drive_frequency * trap.z0**2
    )
    return (w_z / 2.0, w_z / 2.0, w_z)


def derived_circuit(circuit: CircuitSpec) -> DerivedCircuit:
    """Effective and total capacitance, gate charge offset, Josephson energy.

    C_eff = C C_c / (C_c + 2C); C_sigma = C_eff + C_g + 2 C_J (unless
    overridden); n_g = C_g U / 2e + (C + C_g) dPhi/dt / 4e;
    E_J = hbar I_c cos(e Phi / hbar) / e.
    """
    c = circuit.c_endcap
    c_eff = c * circuit.c_coupling / (circuit.c_coupling + 2.0 * c)
    c_sigma = c_eff + circuit.c_gate + 2.0 * circuit.c_junction
    if circuit.c_sigma_override is not None:
        c_sigma = circuit.c_sigma_override
    n_g = (circuit.c_gate * circuit.gate_voltage / (2.0 * E_CHARGE)
           + (c + circuit.c_gate) * circuit.flux_rate / (4.0 * E_CHARGE))
    e_j = HBAR * circuit.i_critical * math.cos(E_CHARGE * circuit.flux / HBAR) / E_CHARGE
    return DerivedCircuit(c_eff=c_eff, c_sigma=c_sigma, n_g=n_g, e_j=e_j)


def coupling_strength(particle: ParticleSpec, trap: TrapSpec,
                      derived: DerivedCircuit, omega: float) -> float:
    """Qubit-oscillator coupling kappa = 2 e k q / (C_sigma z0 sqrt(2 M hbar omega))."""
    if not omega > 0:
        raise ValueError("omega must be positive")
    return (2.0 * E_CHARGE * trap.k * particle.charge
            / (derived.c_sigma * trap.z0 * math.sqrt(2.0 * particle.mass * HBAR * omega)))


def shift_and_charge_energy(particle: ParticleSpec, trap: TrapSpec,
                            derived: DerivedCircuit, n_pairs: int, omega: float):
    """Potential-minimum shift z_s and charge energy E_c for occupation N.

    z_s = 2 e k N q / (C_sigma z0 M omega^2);
    E_c = 2 e^2 (1 + 2N - k q z_s / (e z0)) / C_sigma.
    """
    if not omega > 0:
        raise ValueError("omega must be positive")
    z_s = (2.0 * E_CHARGE * trap.k * n_pairs * particle.charge
           / (derived.c_sigma * trap.z0 * particle.mass * omega**2))
    e_c = (2.0 * E_CHARGE**2 / derived.c_sigma
           * (1.0 + 2.0 * n_pairs - trap.k * particle.charge * z_s / (E_CHARGE * trap.z0)))
    return z_s, e_c


def external_drive(particle: ParticleSpec, trap: TrapSpec,
                   z_shift: float, omega: float) -> float:
    """Linear drive energy V_ext = q U_dc z_s sqrt(hbar / (2 M omega z0^4))."""
    if not omega > 0:
        raise ValueError("omega must be positive")
    return (particle.charge * trap.u_dc * z_shift
            * math.sqrt(HBAR / (2.0 * particle.mass * omega * trap.z0**4)))


def corrected_frequency(particle: ParticleSpec, trap: TrapSpec,
                        derived: DerivedCircuit) -> float:
    """Axial frequency including the capacitive stiffening of the box.

    omega^2 = omega_z^2 + q^2 k^2 / (C_sigma M z0^2). For the reference
    configuration the correction raises omega by about 0.9 %.
    """
    w_z = secular_frequencies(particle, trap)[2]
    corr = (particle.charge * trap.k)**2 / (derived.c_sigma * particle.mass * trap.z0**2)
    return math.sqrt(w_z**2 + corr)


def thermal_occupation(omega: float, temperature: float) -> float:
    """Mean phonon number 1 / (exp(hbar omega / kB T) - 1); zero at T = 0."""
    if temperature <= 0:
        return 0.0
    return 1.0 / math.expm1(HBAR * omega / (K_B * temperature))


def temperature_for_occupation(omega: float, nbar: float) -> float:
    """Inverse of :func:`thermal_occupation`; zero for nbar <= 0."""
    if nbar <= 0:
        return 0.0
    return HBAR * omega / (K_B * math.log1p(1.0 / nbar))


def gate_charge_width(gamma_d: float, c_sigma: float) -> float:
    """Lorentzian half-width of the gate-charge offset that dephases at gamma_d.

    A quasi-static gate offset n_g of half-width w shifts the charge energy
    by -(2e)^2 n_g / C_sigma; per-segment resampling with
    w = gamma_d C_sigma hbar / (2e)^2 multiplies the interference contrast
    by exp(-gamma_d t3).
    """
    return gamma_d * c_sigma * HBAR / (2.0 * E_CHARGE)**2


@dataclass(frozen=True)
class SystemSpec:
    """Full experimental configuration: particle, trap, circuit, qubit knobs."""

    particle: ParticleSpec
    trap: TrapSpec
    circuit: CircuitSpec
    n_pairs: int = 0
    temperature: float = 0.0
    gamma_d: float = 0.0


@dataclass(frozen=True)
class DerivedParams:
    """All derived scalars for a :class:`SystemSpec`, plus the reduced model."""

    secular: tuple[float, float, float]
    circuit: DerivedCircuit
    omega: float
    omega_corrected: float
    kappa: float
    z_shift: float
    e_c: float
    v_ext: float
    nbar: float
    qubit: QubitOscillatorParams


def derive_system(system: SystemSpec) -> DerivedParams:
    """Evaluate the full derivation chain at the bare secular frequency.

    ``omega = omega_z`` feeds kappa, z_s, E_c and V_ext; the stiffened
    frequency is reported alongside for reference.
    """
    circ = derived_circuit(system.circuit)
    secular = secular_frequencies(system.particle, system.trap)
    omega = secular[2]
    if omega <= 0:
        raise ValueError("system has no axial confinement (q = 0 or U_ac = 0)")
    kappa = coupling_strength(system.particle, system.trap, circ, omega)
    z_shift, e_c = shift_and_charge_energy(system.particle, system.trap, circ,
                                           system.n_pairs, omega)
    v_ext = external_drive(system.particle, system.trap, z_shift, omega)
    qubit = QubitOscillatorParams(
        omega=omega, kappa=kappa, e_c=e_c, v_ext=v_ext,
        n_pairs=system.n_pairs, gamma_d=system.gamma_d,
        temperature=system.temperature,
    )
    return DerivedParams(
        secular=secular,
        circuit=circ,
        omega=omega,
        omega_corrected=corrected_frequency(system.particle, system.trap, circ),
        kappa=kappa,
        z_shift=z_shift,
        e_c=e_c,
        v_ext=v_ext,
        nbar=thermal_occupation(omega, system.temperature),
        qubit=qubit,
    )
