"""Classical ro-translational dynamics in the hyperbolic Paul trap.

Two levels of description are implemented side by side:

* the exact time-dependent equations of motion, driven by
  U_PT(t) = U_dc + U_ac cos(Omega t) through the quadrupole field, and
* the time-averaged (secular) model, in which the fast micromotion has been
  eliminated in favour of a conservative effective potential.

Orientation is a unit quaternion (w, x, y, z) mapping body to space frame;
angular momentum is stored in the space frame. The trap symmetry axis is
e_z and the quadrupole structure enters through A = diag(1, 1, -2).

Integrators are fixed-step: velocity-Verlet for the centre of mass plus a
second-order symmetric splitting of the free-rotor step over the principal
axes, with quaternion renormalization each step. ``integrate_secular``
optionally includes the adiabatic resistive damping force/torque, so the
conservative run is literally its zero-resistance path.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .params import ParticleSpec, TrapSpec, secular_frequencies

A_DIAG = np.array([1.0, 1.0, -2.0])
E_Z = np.array([0.0, 0.0, 1.0])


# ---------------------------------------------------------------------------
# quaternions

def quat_normalize(q):
    return q / np.linalg.norm(q)

def quat_multiply(a, b):
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return np.array([
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    ])

def quat_to_matrix(q):
    """Rotation matrix mapping body-frame vectors to the space frame."""
    w, x, y, z = q
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])

def quat_from_axis_angle(axis, angle):
    axis = np.asarray(axis, float)
    axis = axis / np.linalg.norm(axis)
    half = 0.5 * angle
    return np.concatenate([[math.cos(half)], math.sin(half) * axis])


@dataclass
class RigidBodyState:
    """Centre-of-mass position/velocity, orientation quaternion, space-frame J."""

    position: np.ndarray = field(default_factory=lambda: np.zeros(3))
    velocity: np.ndarray = field(default_factory=lambda: np.zeros(3))
    orientation: np.ndarray = field(default_factory=lambda: np.array([1.0, 0, 0, 0]))
    angular_momentum: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        self.position = np.asarray(self.position, float).copy()
        self.velocity = np.asarray(self.velocity, float).copy()
        self.orientation = np.asarray(self.orientation, float).copy()
        self.angular_momentum = np.asarray(self.angular_momentum, float).copy()
        norm = np.linalg.norm(self.orientation)
        if not 0.9 < norm < 1.1:
            raise ValueError("orientation quaternion is far from unit norm")
        self.orientation /= norm


@dataclass(frozen=True)
class MicromotionAmplitudes:
    """Peak micromotion amplitudes (the drive cosine is applied by the caller)."""

    translational: np.ndarray  # m
    rotational: np.ndarray     # rad


def drive_voltage(trap: TrapSpec, t: float) -> float:
    return trap.u_dc + trap.u_ac * math.cos(trap.drive_frequency * t)


def space_multipoles(state: RigidBodyState, particle: ParticleSpec):
    """Dipole, quadrupole and principal axes rotated into the space frame."""
    rot = quat_to_matrix(state.orientation)
    p = rot @ particle.dipole_body
    quad = rot @ particle.quadrupole_body @ rot.T
    return p, quad, rot  # columns of rot are the principal axes n_i


def time_dependent_potential(state: RigidBodyState, particle: ParticleSpec,
                             trap: TrapSpec, t: float) -> float:
    """Instantaneous trap potential energy V(r, orientation, t) in joules."""
    p, quad, _ = space_multipoles(state, particle)
    r = state.position
    ar = A_DIAG * r
    qe = quad @ E_Z
    return drive_voltage(trap, t) / (2 * trap.z0**2) * (
        0.5 * particle.charge * r @ ar + p @ ar - 0.5 * qe[2]
    )


def exact_force_torque(state: RigidBodyState, particle: ParticleSpec,
                       trap: TrapSpec, t: float):
    """Exact instantaneous force (N) and torque (N m).

    force  = -U_PT(t)/(2 z0^2) A (q r + p)
    torque = -U_PT(t)/(2 z0^2) (p x A r + e_z x Q e_z)
    """
    p, quad, _ = space_multipoles(state, particle)
    coef = drive_voltage(trap, t) / (2 * trap.z0**2)
    ar = A_DIAG * state.position
    force = -coef * A_DIAG * (particle.charge * state.position + p)
    torque = -coef * (np.cross(p, ar) + np.cross(E_Z, quad @ E_Z))
    return force, torque


def _pseudo_coefficients(particle: ParticleSpec, trap: TrapSpec):
    c_rot = trap.u_ac**2 / (16 * trap.z0**4 * trap.drive_frequency**2)
    return c_rot, c_rot / particle.mass  # (rotational, translational)


def effective_potential(state: RigidBodyState, particle: ParticleSpec,
                        trap: TrapSpec) -> float:
    """Secular (time-averaged) potential: DC term plus both pseudo-potentials."""
    p, quad, rot = space_multipoles(state, particle)
    r = state.position
    ar = A_DIAG * r
    qe = quad @ E_Z
    u = np.cross(p, ar) + np.cross(E_Z, qe)
    c_rot, c_tr = _pseudo_coefficients(particle, trap)
    w = rot.T @ u  # w_i = n_i . u
    dc = trap.u_dc / (2 * trap.z0**2) * (
        0.5 * particle.charge * r @ ar + p @ ar - 0.5 * qe[2])
    rotational = c_rot * np.sum(w**2 / particle.inertia)
    qrp = particle.charge * r + p
    translational = c_tr * qrp @ (A_DIAG**2 * qrp)
    return dc + rotational + translational


def effective_force_torque(state: RigidBodyState, particle: ParticleSpec,
                           trap: TrapSpec):
    """Analytic gradients of :func:`effective_potential`.

    The rotational pseudo-potential couples position and orientation; its
    torque collects the generator of each factor of w_i = n_i . u under a
    rigid rotation of the particle (axes, dipole, and quadrupole together).
    """
    p, quad, rot = space_multipoles(state, particle)
    q = particle.charge
    r = state.position
    ar = A_DIAG * r
    qe = quad @ E_Z
    u = np.cross(p, ar) + np.cross(E_Z, qe)
    c_rot, c_tr = _pseudo_coefficients(particle, trap)
    w_over_i = (rot.T @ u) / particle.inertia

    dc_coef = trap.u_dc / (2 * trap.z0**2)
    force = -dc_coef * A_DIAG * (q * r + p)
    torque = -dc_coef * u

    qrp = q * r + p
    a2qrp = A_DIAG**2 * qrp
    force = force - 2 * c_tr * q * a2qrp
    torque = torque - 2 * c_tr * np.cross(p, a2qrp)

    # rotational pseudo-potential: force from u's r-dependence, torque from
    # the rotation generators of n_i, p and Q
    grad_r = np.zeros(3)
    gen = np.zeros(3)
    p_dot_ar = p @ ar
    qezz = qe[2]
    for i in range(3):
        n_i = rot[:, i]
        wi = w_over_i[i]
        if wi == 0.0:
            continue
        grad_r += wi * A_DIAG * np.cross(n_i, p)
        g_i = (np.cross(n_i, u)
               + (n_i @ p) * ar - p_dot_ar * n_i
               + qezz * n_i - (n_i @ qe) * E_Z
               - np.cross(E_Z, quad @ np.cross(n_i, E_Z)))
        gen += wi * g_i
    force = force - 2 * c_rot * grad_r
    torque = torque - 2 * c_rot * gen
    return force, torque


def micromotion_amplitudes(state: RigidBodyState, particle: ParticleSpec,
                           trap: TrapSpec) -> MicromotionAmplitudes:
    """Peak translational and rotational micromotion at the current state."""
    p, quad, rot = space_multipoles(state, particle)
    ar = A_DIAG * state.position
    u = np.cross(p, ar) + np.cross(E_Z, quad @ E_Z)
    coef = trap.u_ac / (2 * trap.z0**2 * trap.drive_frequency**2)
    eps = coef / particle.mass * A_DIAG * (particle.charge * state.position + p)
    w_over_i = (rot.T @ u) / particle.inertia
    delta = coef * rot @ w_over_i
    return MicromotionAmplitudes(translational=eps, rotational=delta)


def stability_report(particle: ParticleSpec, trap: TrapSpec) -> list[str]:
    """Heuristic warnings where the secular description degrades.

    Flags a translational Mathieu parameter above 0.3 (drive no longer fast
    compared to the motion) and any negative curvature of the secular
    potential at the origin caused by the DC bias.
    """
    notes = []
    q_mathieu = (2 * abs(particle.charge) * trap.u_ac
                 / (particle.mass * trap.z0**2 * trap.drive_frequency**2))
    if q_mathieu > 0.3:
        notes.append(f"Mathieu parameter {q_mathieu:.3f} exceeds 0.3; "
                     "secular approximation unreliable")
    w_x, _, w_z = secular_frequencies(particle, trap)
    m = particle.mass
    bias = trap.u_dc * particle.charge / (2 * trap.z0**2)
    hessian = bias * A_DIAG + m * np.array([w_x**2, w_x**2, w_z**2])
    for axis, h in zip("xyz", hessian):
        if h <= 0:
            notes.append(f"DC bias removes secular confinement along {axis} "
                         f"(curvature {h:.3e} J/m^2)")
    return notes


# ---------------------------------------------------------------------------
# trajectories and integration

@dataclass
class Trajectory:
    """Uniformly sampled rigid-body trajectory."""

    times: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray
    orientations: np.ndarray
    angular_momenta: np.ndarray

    def __len__(self):
        return len(self.times)

    def state(self, i: int) -> RigidBodyState:
        return RigidBodyState(self.positions[i], self.velocities[i],
                              self.orientations[i], self.angular_momenta[i])

    def columns(self) -> dict:
        cols = {"t": self.times}
        for j, name in enumerate(("rx", "ry", "rz")):
            cols[name] = self.positions[:, j]
        for j, name in enumerate(("vx", "vy", "vz")):
            cols[name] = self.velocities[:, j]
        for j, name in enumerate(("qw", "qx", "qy", "qz")):
            cols[name] = self.orientations[:, j]
        for j, name in enumerate(("Jx", "Jy", "Jz")):
            cols[name] = self.angular_momenta[:, j]
        return cols


def rotational_kinetic_energy(state: RigidBodyState, particle: ParticleSpec) -> float:
    rot = quat_to_matrix(state.orientation)
    l_body = rot.T @ state.angular_momentum
    return float(0.5 * np.sum(l_body**2 / particle.inertia))


def secular_energy(state: RigidBodyState, particle: ParticleSpec,
                   trap: TrapSpec) -> float:
    """Kinetic plus effective potential energy (conserved by secular dynamics)."""
    kinetic = 0.5 * particle.mass * state.velocity @ state.velocity
    return kinetic + rotational_kinetic_energy(state, particle) + \
        effective_potential(state, particle, trap)


def _free_rotor_step(q, j_space, inertia, dt):
    # exact sub-rotations about the body principal axes, 1-2-3-2-1 splitting
    for axis, h in ((0, 0.5 * dt), (1, 0.5 * dt), (2, dt), (1, 0.5 * dt), (0, 0.5 * dt)):
        rot = quat_to_matrix(q)
        omega = (rot[:, axis] @ j_space) / inertia[axis]
        half = 0.5 * omega * h
        c, s = math.cos(half), math.sin(half)
        axis_quat = [c, 0.0, 0.0, 0.0]
        axis_quat[1 + axis] = s
        q = quat_multiply(q, np.array(axis_quat))
    return quat_normalize(q)


def _sample_count(n_steps: int, stride: int) -> int:
    return n_steps // stride + 1


def _run_fixed_step(state0, particle, force_torque, t0, n_steps, dt, stride,
                    rotating):
    m = particle.mass
    inertia = particle.inertia
    r = state0.position.copy()
    v = state0.velocity.copy()
    q = quat_normalize(state0.orientation.copy())
    j = state0.angular_momentum.copy()

    n_samples = _sample_count(n_steps, stride)
    times = np.empty(n_samples)
    pos = np.empty((n_samples, 3))
    vel = np.empty((n_samples, 3))
    ori = np.empty((n_samples, 4))
    ang = np.empty((n_samples, 3))

    def record(k, t):
        times[k] = t
        pos[k] = r
        vel[k] = v
        ori[k] = q
        ang[k] = j

    record(0, t0)
    force, torque = force_torque(t0, r, v, q, j)
    sample = 1
    for step in range(1, n_steps + 1):
        half = 0.5 * dt
        v = v + half / m * force
        j = j + half * torque
        r = r + dt * v
        if rotating:
            q = _free_rotor_step(q, j, inertia, dt)
        t = t0 + step * dt
        force, torque = force_torque(t, r, v, q, j)
        v = v + half / m * force
        j = j + half * torque
        if step % stride == 0:
            record(sample, t)
            sample += 1
    return Trajectory(times, pos, vel, ori[:, :], ang)


def _is_multipole_free(particle: ParticleSpec) -> bool:
    return (not particle.dipole_body.any()) and (not particle.quadrupole_body.any())


def _integrate_translation_fast(state0, particle, trap, t0, n_steps, dt, stride):
    """Scalar-arithmetic fast path for a multipole-free, non-rotating particle.

    Identical update rule to the general path (velocity Verlet with the same
    force evaluation points); exists only because resolving the drive over
    many secular periods takes millions of steps.
    """
    m = particle.mass
    q_over = particle.charge / (2 * trap.z0**2)
    u_dc, u_ac, w_drive = trap.u_dc, trap.u_ac, trap.drive_frequency
    rx, ry, rz = (float(x) for x in state0.position)
    vx, vy, vz = (float(x) for x in state0.velocity)

    n_samples = _sample_count(n_steps, stride)
    times = np.empty(n_samples)
    pos = np.empty((n_samples, 3))
    vel = np.empty((n_samples, 3))
    times[0] = t0
    pos[0] = (rx, ry, rz)
    vel[0] = (vx, vy, vz)

    coef = -q_over * (u_dc + u_ac * math.cos(w_drive * t0))
    fx, fy, fz = coef * rx, coef * ry, -2.0 * coef * rz
    half_over_m = 0.5 * dt / m
    sample = 1
    for step in range(1, n_steps + 1):
        vx += half_over_m * fx
        vy += half_over_m * fy
        vz += half_over_m * fz
        rx += dt * vx
        ry += dt * vy
        rz += dt * vz
        t = t0 + step * dt
        coef = -q_over * (u_dc + u_ac * math.cos(w_drive * t))
        fx, fy, fz = coef * rx, coef * ry, -2.0 * coef * rz
        vx += half_over_m * fx
        vy += half_over_m * fy
        vz += half_over_m * fz
        if step % stride == 0:
            times[sample] = t
            pos[sample] = (rx, ry, rz)
            vel[sample] = (vx, vy, vz)
            sample += 1
    ori = np.tile(quat_normalize(state0.orientation), (n_samples, 1))
    ang = np.tile(state0.angular_momentum, (n_samples, 1))
    return Trajectory(times, pos, vel, ori, ang)


def _steps_for_span(t_span, dt):
    t0, t1 = t_span
    if not t1 > t0:
        raise ValueError("t_span must be increasing")
    n_steps = int(round((t1 - t0) / dt))
    if n_steps < 1:
        raise ValueError("t_span shorter than one step")
    return t0, n_steps


def integrate_full(state0: RigidBodyState, particle: ParticleSpec,
                   trap: TrapSpec, t_span, dt: float, stride: int = 1) -> Trajectory:
    """Integrate the exact time-dependent equations of motion.

    The step must resolve the drive: dt <= 2 pi / (40 Omega).
    """
    dt_max = 2 * math.pi / (40 * trap.drive_frequency)
    if dt > dt_max * (1 + 1e-12):
        raise ValueError(f"dt={dt:.3e} does not resolve the drive; need <= {dt_max:.3e}")
    for note in stability_report(particle, trap):
        warnings.warn(note)
    t0, n_steps = _steps_for_span(t_span, dt)
    if _is_multipole_free(particle) and not state0.angular_momentum.any():
        return _integrate_translation_fast(state0, particle, trap, t0, n_steps,
                                           dt, stride)

    def force_torque(t, r, v, q, j):
        st = _BareState(r, v, q, j)
        return exact_force_torque(st, particle, trap, t)

    return _run_fixed_step(state0, particle, force_torque, t0, n_steps, dt,
                           stride, rotating=True)


class _BareState:
    """Duck-typed state view used inside integrator loops (no validation)."""

    __slots__ = ("position", "velocity", "orientation", "angular_momentum")

    def __init__(self, r, v, q, j):
        self.position = r
        self.velocity = v
        self.orientation = q
        self.angular_momentum = j


def integrate_secular(state0: RigidBodyState, particle: ParticleSpec,
                      trap: TrapSpec, t_span, dt: float, stride: int = 1,
                      damping_resistance: float = 0.0) -> Trajectory:
    """Integrate the secular model, optionally with adiabatic resistive damping.

    With ``damping_resistance`` R > 0 the endcap circuit is adiabatically
    eliminated: the induced voltage V = (R k / z0) d/dt[e_z . (q r + p)]
    feeds back as the force -k V q e_z / z0 and torque k V e_z x p / z0.
    R = 0 runs the identical code path with the damping terms exactly zero.

    The step must satisfy dt <= 2 pi / (40 max(secular frequencies)).
    """
    w_max = max(secular_frequencies(particle, trap))
    if w_max > 0:
        dt_max = 2 * math.pi / (40 * w_max)
        if dt > dt_max * (1 + 1e-12):
            raise ValueError(f"dt={dt:.3e} does not resolve the secular motion; "
                             f"need <= {dt_max:.3e}")
    for note in stability_report(particle, trap):
        warnings.warn(note)
    t0, n_steps = _steps_for_span(t_span, dt)
    q_charge = particle.charge
    k_over_z0 = trap.k / trap.z0
    damp_coef = damping_resistance * k_over_z0
    multipole_free = _is_multipole_free(particle)
    rotating = (not multipole_free) or state0.angular_momentum.any()

    def force_torque(t, r, v, q, j):
        st = _BareState(r, v, q, j)
        force, torque = effective_force_torque(st, particle, trap)
        p, _, rot = space_multipoles(st, particle)
        omega_body = (rot.T @ j) / particle.inertia
        p_dot = np.cross(rot @ omega_body, p)
        v_ad = damp_coef * (q_charge * v[2] + p_dot[2])
        force = force + np.array([0.0, 0.0, -k_over_z0 * q_charge * v_ad])
        torque = torque + k_over_z0 * v_ad * np.cross(E_Z, p)
        return force, torque

    return _run_fixed_step(state0, particle, force_torque, t0, n_steps, dt,
                           stride, rotating=rotating)


def cycle_average(times: np.ndarray, values: np.ndarray, period: float):
    """Boxcar average over exactly one period, centred on each retained sample.

    ``values`` may be (n,) or (n, m); samples within half a period of either
    end are dropped. Sampling must be uniform.
    """
    dt = times[1] - times[0]
    window = int(round(period / dt))
    if window < 2:
        raise ValueError("sampling too coarse to average over one period")
    if window % 2 == 0:
        window += 1
    kernel = np.full(window, 1.0 / window)
    half = window // 2
    t_out = times[half:len(times) - half]
    vals = np.atleast_2d(values.T).T
    out = np.column_stack([np.convolve(vals[:, j], kernel, mode="valid")
                           for j in range(vals.shape[1])])
    if values.ndim == 1:
        out = out[:, 0]
    return t_out, out
