"""Modular exponentiation viewed as the orbit of ``x -> m*x mod p``.

Encryption ``c = m**e mod p`` is the state after ``e`` steps of

    x_{k+1} = m * x_k  (mod p),    x_0 = 1

and RSA decryption is the same system run with multiplier ``c``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from math import gcd
from typing import Iterable, Optional, Sequence

from .errors import DomainError, KeyGenerationError, TrajectoryRangeError
from .numtheory import (
    GroupElement,
    Modulus,
    carmichael,
    euler_totient,
    is_prime,
    is_primitive_root,
    mod_inverse,
    mod_pow,
    multiplicative_order,
)

__all__ = [
    "Scheme",
    "CryptoInstance",
    "Trajectory",
    "dh_instance",
    "rsa_instance",
    "simulate",
    "period_length",
    "rsa_keygen",
    "encrypt",
]


class Scheme(str, Enum):
    DH = "DH"
    RSA = "RSA"
    LEARNED = "LEARNED"


@dataclass(frozen=True)
class CryptoInstance:
    """Public data of one cryptosystem.

    ``secret_hint`` exists for test fixtures only. Nothing in the recovery
    code reads it.
    """

    scheme: Scheme
    modulus: Modulus
    multiplier: GroupElement
    secret_hint: Optional[int] = None

    def __post_init__(self):
        if self.multiplier.modulus != self.modulus:
            raise DomainError("multiplier belongs to a different modulus")
        if self.scheme is Scheme.DH:
            if not self.modulus.is_prime:
                raise DomainError(f"DH modulus {self.p} is not prime")
            if not is_primitive_root(self.m, self.p):
                raise DomainError(f"{self.m} is not a primitive root modulo {self.p}")
        elif self.scheme is Scheme.RSA:
            fac = self.modulus.factorization
            if len(fac) != 2 or any(k != 1 or q == 2 for q, k in fac):
                raise DomainError(f"RSA modulus {self.p} must be a product of two distinct odd primes")
        else:
            raise DomainError(f"unsupported scheme {self.scheme}")

    @property
    def p(self) -> int:
        return self.modulus.value

    @property
    def m(self) -> int:
        return self.multiplier.residue


def dh_instance(p: int, m: int, secret: Optional[int] = None) -> CryptoInstance:
    mod = Modulus(p)
    return CryptoInstance(Scheme.DH, mod, GroupElement(m % p, mod), secret)


def rsa_instance(p1: int, p2: int, m: int, secret: Optional[int] = None) -> CryptoInstance:
    if not (is_prime(p1) and is_prime(p2)) or p1 == p2 or 2 in (p1, p2):
        raise DomainError(f"({p1}, {p2}) are not two distinct odd primes")
    mod = Modulus(p1 * p2, tuple(sorted(((p1, 1), (p2, 1)))))
    return CryptoInstance(Scheme.RSA, mod, GroupElement(m % mod.value, mod), secret)


@dataclass(frozen=True)
class Trajectory:
    """States ``x_0..x_N`` of the multiplication map and, optionally, its period."""

    values: tuple[int, ...]
    multiplier: int
    modulus: int
    period: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if not self.values:
            raise DomainError("a trajectory holds at least x_0")

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    @property
    def last(self) -> int:
        return self.values[-1]

    def at(self, k: int) -> int:
        """``x_k``, wrapping through the period for indices past the stored data."""
        if k < 0:
            raise TrajectoryRangeError(f"negative index {k}")
        if k < len(self.values):
            return self.values[k]
        if self.period is None:
            raise TrajectoryRangeError(
                f"x_{k} not stored ({len(self.values)} values) and period unknown"
            )
        return self.values[k % self.period]

    def window(self, start: int, length: int) -> list[int]:
        return [self.at(start + j) for j in range(length)]

    def one_period(self) -> list[int]:
        if self.period is None:
            raise TrajectoryRangeError("period unknown")
        return self.window(0, self.period)

    # -- serialization ---------------------------------------------------
    def to_text(self) -> str:
        """One decimal integer per line."""
        return "\n".join(str(v) for v in self.values) + "\n"

    def to_dict(self) -> dict:
        return {
            "multiplier": self.multiplier,
            "modulus": self.modulus,
            "period": self.period,
            "values": list(self.values),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "Trajectory":
        return cls(tuple(data["values"]), data["multiplier"], data["modulus"], data.get("period"))

    @classmethod
    def from_text(cls, text: str, multiplier: int, modulus: int) -> "Trajectory":
        values = tuple(int(tok) for tok in text.split())
        return cls(values, multiplier, modulus, _detect_period(values))


def _detect_period(values: Sequence[int]) -> Optional[int]:
    for k in range(1, len(values)):
        if values[k] == values[0]:
            return k
    return None


def period_length(multiplier: int, modulus: int) -> int:
    """Minimal ``z >= 1`` with ``multiplier**z == 1 (mod modulus)``."""
    if gcd(multiplier, modulus) != 1:
        raise DomainError(f"{multiplier} is not coprime to {modulus}")
    return multiplicative_order(multiplier % modulus, modulus)


def _orbit(m: int, p: int, x0: int, steps: int) -> Iterable[int]:
    x = x0
    yield x
    for _ in range(steps):
        x = x * m % p
        yield x


def simulate(
    instance: CryptoInstance | tuple[int, int],
    x0: int = 1,
    steps: Optional[int] = None,
) -> Trajectory:
    """Run the multiplication map from ``x0`` for ``steps`` steps.

    ``instance`` may be a :class:`CryptoInstance` or a bare ``(p, m)`` pair;
    the latter is convenient for systems such as RSA decryption whose
    multiplier is an arbitrary unit. ``steps`` defaults to two Carmichael
    periods.
    """
    if isinstance(instance, CryptoInstance):
        p, m = instance.p, instance.m
    else:
        p, m = instance
        if p < 2 or gcd(m, p) != 1:
            raise DomainError(f"{m} is not a unit modulo {p}")
    if gcd(x0, p) != 1:
        raise DomainError(f"x0={x0} is not coprime to {p}")
    if steps is None:
        steps = 2 * carmichael(p)
    if steps < 0:
        raise DomainError("steps must be nonnegative")
    m %= p
    x0 %= p
    return Trajectory(tuple(_orbit(m, p, x0, steps)), m, p, period_length(m, p))


def rsa_keygen(p1: int, p2: int, d: int, message: int = 2) -> tuple[int, CryptoInstance]:
    """Public exponent for the private key ``d`` and an instance on ``p1*p2``.

    The instance's multiplier is ``message``; its ``secret_hint`` carries d.
    """
    if not (is_prime(p1) and is_prime(p2)) or p1 == p2 or 2 in (p1, p2):
        raise KeyGenerationError(f"({p1}, {p2}) are not two distinct odd primes")
    phi = euler_totient(p1 * p2)
    if d < 1 or gcd(d, phi) != 1:
        raise KeyGenerationError(f"d={d} is not invertible modulo phi={phi}")
    e = mod_inverse(d, phi)
    return e, rsa_instance(p1, p2, message, secret=d)


def encrypt(instance: CryptoInstance, exponent: int) -> int:
    if exponent < 1:
        raise DomainError("exponent must be positive")
    return mod_pow(instance.m, exponent, instance.p)
