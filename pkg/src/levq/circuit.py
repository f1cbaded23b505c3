"""Induced endcap charge, pickup current, and resistive cooling.

The moving charge distribution induces mirror charges on the endcaps; for
the near-centre field profile parametrized by the geometry factor k the
capacitor charge is Q = -k e_z . (q r + p) / z0 + C V, so a circuit across
the endcaps picks up the ro-translational motion through I = dQ/dt and,
with a resistor, damps it.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .params import ParticleSpec, TrapSpec, secular_frequencies
from .trap import (RigidBodyState, Trajectory, integrate_secular,
                   space_multipoles)


@dataclass(frozen=True)
class InducedState:
    """Capacitor charge, endcap voltage, and pickup current at one instant.

    By construction charge = -k e_z . (q r + p)/z0 + C * voltage.
    """

    charge: float
    voltage: float
    current: float


def induced_charge(state: RigidBodyState, particle: ParticleSpec,
                   trap: TrapSpec, capacitance: float, voltage: float) -> float:
    """Endcap capacitor charge; depends only on the axial motional dipole."""
    p, _, _ = space_multipoles(state, particle)
    axial = particle.charge * state.position[2] + p[2]
    return -trap.k * axial / trap.z0 + capacitance * voltage


def _charge_series(trajectory: Trajectory, particle: ParticleSpec,
                   trap: TrapSpec) -> np.ndarray:
    q_axial = particle.charge * trajectory.positions[:, 2]
    if particle.dipole_body.any():
        p_z = np.empty(len(trajectory))
        for i in range(len(trajectory)):
            p, _, _ = space_multipoles(trajectory.state(i), particle)
            p_z[i] = p[2]
        q_axial = q_axial + p_z
    return -trap.k * q_axial / trap.z0


def induced_current(trajectory: Trajectory, particle: ParticleSpec,
                    trap: TrapSpec) -> np.ndarray:
    """Pickup current I = dQ/dt along a uniformly sampled trajectory.

    Interior points use central differences (fourth-order stencil where two
    neighbours exist on both sides, second-order next to the ends); the
    endpoints use one-sided differences.
    """
    if len(trajectory) < 3:
        raise ValueError("need at least 3 samples to differentiate")
    q = _charge_series(trajectory, particle, trap)
    t = trajectory.times
    h = t[1] - t[0]
    out = np.empty_like(q)
    out[0] = (q[1] - q[0]) / h
    out[-1] = (q[-1] - q[-2]) / h
    out[1] = (q[2] - q[0]) / (2 * h)
    out[-2] = (q[-1] - q[-3]) / (2 * h)
    if len(q) >= 5:
        out[2:-2] = (-q[4:] + 8 * q[3:-1] - 8 * q[1:-3] + q[:-4]) / (12 * h)
    return out


def induced_series(trajectory: Trajectory, particle: ParticleSpec,
                   trap: TrapSpec) -> list[InducedState]:
    """Per-sample induced state at zero endcap voltage (open pickup)."""
    charge = _charge_series(trajectory, particle, trap)
    current = induced_current(trajectory, particle, trap)
    return [InducedState(charge=float(c), voltage=0.0, current=float(i))
            for c, i in zip(charge, current)]


def cooling_rate(state: RigidBodyState, particle: ParticleSpec,
                 trap: TrapSpec, resistance: float) -> float:
    """Adiabatic phase-space contraction rate (1/s) of the resistive circuit.

    gamma = R k^2 / z0^2 * (q^2 / M + sum_i [n_i . (p x e_z)]^2 / I_i);
    the translational part is orientation-independent, the rotational part
    enters through the current orientation.
    """
    p, _, rot = space_multipoles(state, particle)
    p_cross_ez = np.cross(p, np.array([0.0, 0.0, 1.0]))
    rotational = np.sum((rot.T @ p_cross_ez)**2 / particle.inertia)
    translational = particle.charge**2 / particle.mass
    return resistance * trap.k**2 / trap.z0**2 * (translational + rotational)


def translational_cooling_rate(particle: ParticleSpec, trap: TrapSpec,
                               resistance: float) -> float:
    """Orientation-independent part of :func:`cooling_rate`."""
    return resistance * trap.k**2 * particle.charge**2 / (trap.z0**2 * particle.mass)


def simulate_resistive_cooling(state0: RigidBodyState, particle: ParticleSpec,
                               trap: TrapSpec, resistance: float, t_span,
                               dt: float, stride: int = 1,
                               endcap_capacitance: float | None = None) -> Trajectory:
    """Secular dynamics plus adiabatic resistive damping.

    With ``endcap_capacitance`` given, the adiabaticity condition
    R C omega << 1 is checked and a warning emitted when violated. The
    zero-resistance limit reproduces :func:`levq.trap.integrate_secular`
    bit for bit (same integrator path).
    """
    if resistance < 0:
        raise ValueError("resistance must be non-negative")
    if endcap_capacitance is not None:
        w_max = max(secular_frequencies(particle, trap))
        rc_omega = resistance * endcap_capacitance * w_max
        if rc_omega > 0.1:
            warnings.warn(f"R C omega = {rc_omega:.3g} is not small; adiabatic "
                          "elimination of the circuit is questionable")
    return integrate_secular(state0, particle, trap, t_span, dt, stride=stride,
                             damping_resistance=resistance)


def fit_amplitude_decay(times: np.ndarray, series: np.ndarray) -> float:
    """Exponential decay rate of an oscillation envelope, from |peak| samples.

    Fits log |extrema| against time; returns the rate at which the amplitude
    (not the energy) decays.
    """
    peaks_t, peaks_a = [], []
    for i in range(1, len(series) - 1):
        if abs(series[i]) >= abs(series[i - 1]) and abs(series[i]) >= abs(series[i + 1]):
            if abs(series[i]) > 0:
                peaks_t.append(times[i])
                peaks_a.append(abs(series[i]))
    if len(peaks_t) < 4:
        raise ValueError("too few oscillation extrema to fit a decay")
    slope, _ = np.polyfit(peaks_t, np.log(peaks_a), 1)
    return -float(slope)


def fit_volume_contraction(times: np.ndarray, ensemble: np.ndarray) -> float:
    """Phase-space volume contraction rate of a trajectory bundle.

    ``ensemble`` has shape (n_samples, n_members, 2 n_dof) holding the
    phase-space coordinates of nearby trajectories; the rate is the fitted
    decay of (1/2) log det cov, i.e. of the occupied volume.
    """
    logvol = np.empty(len(times))
    for i in range(len(times)):
        cov = np.cov(ensemble[i].T)
        sign, logdet = np.linalg.slogdet(cov)
        if sign <= 0:
            raise ValueError("degenerate ensemble covariance")
        logvol[i] = 0.5 * logdet
    slope, _ = np.polyfit(times, logvol, 1)
    return -float(slope)
