"""Integer primitives for the multiplicative groups Z_n^*.

Everything here works on Python ints, so intermediate products never
overflow. Factorization is plain trial division, which is fine for the
desk-scale moduli (n < 10^10 or so) this package is built around.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, isqrt, lcm, prod

from .errors import DomainError, NoInverseError

__all__ = [
    "Modulus",
    "GroupElement",
    "is_prime",
    "factorize",
    "mod_pow",
    "mod_inverse",
    "euler_totient",
    "carmichael",
    "multiplicative_order",
    "is_primitive_root",
    "primitive_roots",
    "euler_criterion",
    "generalized_euler",
    "primes_up_to",
]

# Deterministic Miller-Rabin: these bases are exact for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of ``n`` as ordered ``(prime, multiplicity)`` pairs."""
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    out = []
    for d in (2, 3):
        k = 0
        while n % d == 0:
            n //= d
            k += 1
        if k:
            out.append((d, k))
    d = 5
    step = 2
    while d * d <= n:
        k = 0
        while n % d == 0:
            n //= d
            k += 1
        if k:
            out.append((d, k))
        d += step
        step = 6 - step
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def primes_up_to(n: int) -> list[int]:
    """All primes <= n (simple sieve)."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i, flag in enumerate(sieve) if flag]


@dataclass(frozen=True)
class Modulus:
    """A modulus ``value >= 3`` together with its prime factorization."""

    value: int
    factorization: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        if self.value < 3:
            raise DomainError(f"modulus must be >= 3, got {self.value}")
        if not self.factorization:
            object.__setattr__(self, "factorization", factorize(self.value))
        else:
            fac = tuple((int(q), int(k)) for q, k in self.factorization)
            if prod(q**k for q, k in fac) != self.value:
                raise DomainError(f"factorization {fac} does not multiply to {self.value}")
            if not all(is_prime(q) for q, _ in fac):
                raise DomainError(f"factorization {fac} lists a composite")
            object.__setattr__(self, "factorization", fac)

    @property
    def is_prime(self) -> bool:
        return self.factorization == ((self.value, 1),)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.factorization)

    def __int__(self) -> int:
        return self.value


@dataclass(frozen=True)
class GroupElement:
    residue: int
    modulus: Modulus

    def __post_init__(self):
        n = self.modulus.value
        if not 1 <= self.residue <= n - 1:
            raise DomainError(f"residue {self.residue} outside [1, {n - 1}]")
        if gcd(self.residue, n) != 1:
            raise DomainError(f"{self.residue} is not a unit modulo {n}")

    def __int__(self) -> int:
        return self.residue


def mod_pow(base: int, exponent: int, modulus: int) -> int:
    """``base**exponent % modulus`` by square-and-multiply."""
    if modulus < 2:
        raise DomainError(f"modulus must be >= 2, got {modulus}")
    if exponent < 0:
        raise DomainError("negative exponent; use mod_inverse first")
    # builtin pow is the left-to-right binary ladder on arbitrary-precision ints
    return pow(base, exponent, modulus)


def mod_inverse(a: int, modulus: int) -> int:
    if modulus < 1:
        raise DomainError(f"modulus must be positive, got {modulus}")
    if gcd(a, modulus) != 1:
        raise NoInverseError(f"{a} has no inverse modulo {modulus}")
    if modulus == 1:
        return 0
    r0, r1 = modulus, a % modulus
    s0, s1 = 0, 1
    while r1:
        quot = r0 // r1
        r0, r1 = r1, r0 - quot * r1
        s0, s1 = s1, s0 - quot * s1
    return s0 % modulus


def euler_totient(n: int) -> int:
    if n < 1:
        raise DomainError(f"totient undefined for {n}")
    out = 1
    for q, k in factorize(n):
        out *= (q - 1) * q ** (k - 1)
    return out


def _carmichael_prime_power(q: int, k: int) -> int:
    if q == 2:
        return 1 if k == 1 else 2 if k == 2 else 2 ** (k - 2)
    return (q - 1) * q ** (k - 1)


def carmichael(n: int) -> int:
    """Exponent of the group Z_n^*, i.e. the Carmichael function."""
    if n < 1:
        raise DomainError(f"Carmichael function undefined for {n}")
    return lcm(1, *(_carmichael_prime_power(q, k) for q, k in factorize(n)))


def multiplicative_order(m: int, n: int) -> int:
    """Smallest ``l >= 1`` with ``m**l == 1 (mod n)``.

    Starts from the Carmichael exponent and strips prime factors while
    the power stays at one.
    """
    if n < 1 or gcd(m, n) != 1:
        raise DomainError(f"{m} is not a unit modulo {n}")
    if n == 1:
        return 1
    order = carmichael(n)
    for q, _ in factorize(order) if order > 1 else ():
        while order % q == 0 and pow(m, order // q, n) == 1:
            order //= q
    return order


def is_primitive_root(m: int, p: int) -> bool:
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if not 1 <= m <= p - 1:
        raise DomainError(f"{m} outside [1, {p - 1}]")
    if p == 2:
        return m == 1
    return all(pow(m, (p - 1) // q, p) != 1 for q, _ in factorize(p - 1))


def primitive_roots(p: int) -> list[int]:
    """All generators of Z_p^* in increasing order."""
    return [m for m in range(1, p) if is_primitive_root(m, p)]


def euler_criterion(m: int, p: int) -> int:
    """Legendre symbol of ``m`` modulo the odd prime ``p`` (+1 or -1)."""
    if p < 3 or not is_prime(p):
        raise DomainError(f"{p} is not an odd prime")
    if gcd(m, p) != 1:
        raise DomainError(f"{m} is not coprime to {p}")
    r = pow(m, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def generalized_euler(m: int, p1: int, p2: int = 1) -> int:
    """Sign of ``m**(phi(p)/2) mod p`` for ``p = p1*p2``.

    ``p1`` is an odd prime and ``p2`` is either 1 or a different odd prime.
    For two distinct primes the answer is always +1; with ``p2 == 1`` it is
    the ordinary Euler criterion.
    """
    if p1 < 3 or not is_prime(p1):
        raise DomainError(f"p1={p1} must be an odd prime")
    if p2 != 1 and (p2 < 3 or not is_prime(p2)):
        raise DomainError(f"p2={p2} must be 1 or an odd prime")
    if p1 == p2:
        raise DomainError("p1 and p2 must be distinct; prime powers are not supported")
    p = p1 * p2
    if gcd(m, p) != 1:
        raise DomainError(f"{m} is not coprime to {p}")
    r = pow(m, euler_totient(p) // 2, p)
    if r == 1:
        return 1
    if r == p - 1:
        return -1
    raise AssertionError(f"m^(phi/2) mod {p} = {r} is neither 1 nor -1")
