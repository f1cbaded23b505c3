"""Phase-space word algebra for displacement/rotation/phase products.

A word is an ordered product of primitives acting on a single bosonic mode,
written left to right in operator order (the leftmost primitive acts last
in time). Every word reduces exactly to

    exp(i phase) D(displacement) R(rotation)

with D(a) = exp(a adag - conj(a) a) and R(t) = exp(-i t adag a), using

    D(a) D(b) = exp(i Im(a conj(b))) D(a + b)
    R(t) D(a) = D(a exp(-i t)) R(t)
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class Displace:
    alpha: complex


@dataclass(frozen=True)
class Rotate:
    angle: float


@dataclass(frozen=True)
class PhaseShift:
    angle: float


Primitive = Union[Displace, Rotate, PhaseShift]


@dataclass(frozen=True)
class Word:
    ops: tuple[Primitive, ...] = ()

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.ops + other.ops)

    def dagger(self) -> "Word":
        out = []
        for op in reversed(self.ops):
            if isinstance(op, Displace):
                out.append(Displace(-op.alpha))
            elif isinstance(op, Rotate):
                out.append(Rotate(-op.angle))
            else:
                out.append(PhaseShift(-op.angle))
        return Word(tuple(out))


@dataclass(frozen=True)
class ReducedWord:
    """Normal form exp(i phase) D(displacement) R(rotation); phases unwrapped."""

    phase: float
    displacement: complex
    rotation: float


def reduce_word(word: Word) -> ReducedWord:
    """Fold a word into its normal form, exactly (no truncation)."""
    phase = 0.0
    alpha = 0.0 + 0.0j
    theta = 0.0
    for op in word.ops:
        if isinstance(op, Displace):
            beta = op.alpha * cmath.exp(-1j * theta)
            phase += (alpha * beta.conjugate()).imag
            alpha += beta
        elif isinstance(op, Rotate):
            theta += op.angle
        elif isinstance(op, PhaseShift):
            phase += op.angle
        else:
            raise TypeError(f"unknown primitive {op!r}")
    return ReducedWord(phase=phase, displacement=alpha, rotation=theta)


def as_word(reduced: ReducedWord) -> Word:
    """Expand a normal form back into a three-primitive word."""
    return Word((PhaseShift(reduced.phase), Displace(reduced.displacement),
                 Rotate(reduced.rotation)))
