"""The two observable families that turn the multiplication map linear.

Unit-circle lifts put ``x`` on the p-th roots of unity,
``h_j(x) = exp(2*pi*i * m**(j+1) * x / p)``. Angles are kept as integer
numerators over ``p`` so inversion never has to guess a rounding.

Value-list lifts stack consecutive states, ``h_j(x_k) = x_{k+j}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd, pi
from typing import Sequence

import numpy as np

from .dynsys import Trajectory
from .errors import DomainError, InversionError

__all__ = [
    "UnitCircleLift",
    "ValueListLift",
    "lift_unit_circle",
    "invert_unit_circle",
    "lift_value_list",
    "invert_value_list",
]


@dataclass(frozen=True)
class UnitCircleLift:
    numerators: tuple[int, ...]  # component j has angle 2*pi*numerators[j]/modulus
    modulus: int
    multiplier: int

    @property
    def q(self) -> int:
        return len(self.numerators) - 1

    @property
    def components(self) -> np.ndarray:
        return np.exp(2j * pi * np.asarray(self.numerators, dtype=float) / self.modulus)

    def __array__(self, dtype=None, copy=None):
        out = self.components
        return out if dtype is None else out.astype(dtype)

    def to_pairs(self) -> list[list[int]]:
        """Exact ``(numerator, p)`` angle pairs for serialization."""
        return [[n, self.modulus] for n in self.numerators]

    @classmethod
    def from_complex(cls, z: Sequence[complex], modulus: int, multiplier: int) -> "UnitCircleLift":
        """Snap measured complex values back onto the p-th roots of unity.

        Values off the unit circle by more than half an angular grid step
        are rejected.
        """
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(np.abs(z) - 1.0) > 1e-6):
            raise InversionError("lift component is not on the unit circle")
        scaled = np.angle(z) * modulus / (2 * pi)
        nums = np.rint(scaled)
        if np.any(np.abs(scaled - nums) > 0.25):
            raise InversionError("lift angle is not a multiple of 2*pi/p")
        return cls(tuple(int(n) % modulus for n in nums), modulus, multiplier)


@dataclass(frozen=True)
class ValueListLift:
    components: tuple[int, ...]

    @property
    def q(self) -> int:
        return len(self.components) - 1

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.components, dtype=dtype)

    def __len__(self) -> int:
        return len(self.components)


def lift_unit_circle(x: int, m: int, p: int, q: int) -> UnitCircleLift:
    if q < 0:
        raise DomainError("q must be nonnegative")
    if p < 2 or gcd(m, p) != 1:
        raise DomainError(f"{m} is not a unit modulo {p}")
    nums = []
    w = m * x % p
    for _ in range(q + 1):
        nums.append(w)
        w = w * m % p
    return UnitCircleLift(tuple(nums), p, m % p)


def invert_unit_circle(z: UnitCircleLift, j: int = 0) -> int:
    """Recover ``x`` in ``[1, p-1]`` from component ``j`` of a unit-circle lift.

    Component ``j`` fixes ``m**(j+1) * x`` modulo ``p``. The loop tries
    ``(angle_numerator + t*p) / (m**(j+1) mod p)`` for ``t = 0, 1, ...``
    until the quotient is an integer in range.
    """
    if not 0 <= j <= z.q:
        raise DomainError(f"component index {j} outside [0, {z.q}]")
    p = z.modulus
    num = z.numerators[j] % p
    scale = pow(z.multiplier, j + 1, p)
    for t in range(p):
        top = num + t * p
        if top % scale == 0 and 1 <= top // scale <= p - 1:
            return top // scale
    raise InversionError(f"no residue reproduces component {j}; lift is corrupted")


def lift_value_list(traj: Trajectory, k: int, q: int) -> ValueListLift:
    if q < 0:
        raise DomainError("q must be nonnegative")
    return ValueListLift(tuple(traj.window(k, q + 1)))


def invert_value_list(z: ValueListLift | Sequence[int]) -> int:
    comps = z.components if isinstance(z, ValueListLift) else tuple(z)
    if not comps:
        raise DomainError("empty lift")
    return comps[0]
