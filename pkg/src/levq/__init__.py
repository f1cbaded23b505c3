"""Levitated-nanoparticle electromechanics toolkit.

Simulates a charged nanoparticle in a hyperbolic Paul trap coupled through
its induced endcap charge to a Cooper-pair-box qubit: classical
ro-translational dynamics, resistive cooling, and the pulsed-qubit
interference and entanglement protocols, each backed by an independent
truncated-Fock-space oracle.
"""

__version__ = "0.1.0"

from .params import (CircuitSpec, DerivedCircuit, DerivedParams, ParticleSpec,
                     QubitOscillatorParams, SystemSpec, TrapSpec,
                     derive_system)
from .trap import RigidBodyState, Trajectory

__all__ = [
    "CircuitSpec", "DerivedCircuit", "DerivedParams", "ParticleSpec",
    "QubitOscillatorParams", "RigidBodyState", "SystemSpec", "Trajectory",
    "TrapSpec", "derive_system", "__version__",
]
