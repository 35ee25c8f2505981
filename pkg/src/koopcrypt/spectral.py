"""Companion-matrix representations and spectral secret recovery.

A value-list lift ``z_k = (x_k, ..., x_{k+q})`` of the multiplication map
evolves as ``z_{k+1} = A z_k`` for a companion matrix ``A`` whose last row
is ``alpha``. Diagonalizing ``A = V diag(mu) V^-1`` turns ``e`` steps into
``V^-1 z_e = diag(mu)**e V^-1 z_0``, so each non-real eigenvalue gives
``e`` modulo its order from the angle of a coordinate ratio.
"""
from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd
from typing import Optional, Sequence

import numpy as np

from .dynsys import Scheme, period_length
from .errors import (
    DegenerateCoordinateError,
    DomainError,
    InfeasibleDimensionError,
    InsufficientSpectrumError,
    NonDiagonalizableError,
    RecoveryError,
)
from .exact import column_ranks_mod_p, rank_exact, solve_exact
from .numtheory import carmichael, euler_criterion, is_prime
from .vandermonde import leja_order, solve_primal, vandermonde

__all__ = [
    "CompanionSystem",
    "EigenSystem",
    "RecoveryResult",
    "DimensionCheck",
    "Parity",
    "dh_companion",
    "dh_companion_padded",
    "rsa_companion",
    "shift_companion",
    "check_dimension",
    "eigensystem",
    "clear_spectrum_cache",
    "characteristic_vanishes",
    "transform_coordinates",
    "parity_test",
    "recover_exponent",
    "recover_rsa_key",
]


@dataclass(frozen=True)
class CompanionSystem:
    """Companion matrix with last row ``alpha``: ``x_{k+q+1} = sum_j alpha_j x_{k+j}``."""

    alpha: tuple[Fraction, ...]
    scheme: Scheme
    modulus_context: Optional[tuple[int, Optional[int]]] = None  # (p, m); m=None means any generator

    def __post_init__(self):
        if not self.alpha:
            raise DomainError("alpha must have at least one entry")
        object.__setattr__(self, "alpha", tuple(Fraction(a) for a in self.alpha))

    @property
    def q(self) -> int:
        return len(self.alpha) - 1

    @property
    def dimension(self) -> int:
        return len(self.alpha)

    def matrix(self) -> np.ndarray:
        n = self.dimension
        A = np.zeros((n, n))
        A[np.arange(n - 1), np.arange(1, n)] = 1.0
        A[-1] = [float(a) for a in self.alpha]
        return A

    def exact_matrix(self) -> list[list[Fraction]]:
        n = self.dimension
        rows = [[Fraction(int(c == r + 1)) for c in range(n)] for r in range(n - 1)]
        return rows + [list(self.alpha)]

    def step(self, z: Sequence[int | Fraction]) -> list:
        """One exact step of the lifted dynamics."""
        if len(z) != self.dimension:
            raise DomainError(f"state has dimension {len(z)}, expected {self.dimension}")
        nxt = sum(a * v for a, v in zip(self.alpha, z))
        if isinstance(nxt, Fraction) and nxt.denominator == 1:
            nxt = nxt.numerator
        return list(z[1:]) + [nxt]

    def extend(self, seed: Sequence[int], length: int) -> list:
        """Generate ``length`` sequence values from the first ``q+1``."""
        out = list(seed[: self.dimension])
        if len(out) < self.dimension:
            raise DomainError("seed shorter than the companion dimension")
        while len(out) < length:
            nxt = sum(a * v for a, v in zip(self.alpha, out[-self.dimension :]))
            out.append(nxt.numerator if nxt.denominator == 1 else nxt)
        return out[:length]

    def to_dict(self) -> dict:
        from .exact import format_fraction

        return {
            "scheme": self.scheme.value,
            "q": self.q,
            "alpha": [format_fraction(a) for a in self.alpha],
            "modulus_context": list(self.modulus_context) if self.modulus_context else None,
        }


def _require_odd_prime(p: int, minimum: int = 5) -> None:
    if p < minimum or not is_prime(p):
        raise DomainError(f"{p} must be a prime >= {minimum}")


def dh_companion(p: int) -> CompanionSystem:
    """Minimal DH representation: q = (p-1)/2, alpha = [1, -1, 0, ..., 0, 1]."""
    _require_odd_prime(p)
    return dh_companion_padded(p, (p - 1) // 2)


def dh_companion_padded(p: int, q: int) -> CompanionSystem:
    """DH representation of dimension ``q+1 >= (p+1)/2``.

    The recurrence ``x_{k+q+1} = x_{k+q-h} - x_{k+q-h+1} + x_{k+q}`` with
    ``h = (p-1)/2`` holds because ``x_{k+h} = p - x_k`` for generators.
    """
    _require_odd_prime(p)
    half = (p - 1) // 2
    if q < half:
        raise InfeasibleDimensionError(f"q={q} is below the minimal DH dimension {half}")
    alpha = [0] * (q + 1)
    alpha[q - half] += 1
    alpha[q - half + 1] -= 1
    alpha[q] += 1
    return CompanionSystem(tuple(alpha), Scheme.DH, (p, None))


def shift_companion(n: int, scheme: Scheme = Scheme.RSA, context=None) -> CompanionSystem:
    """Cyclic shift of dimension ``n``: ``x_{k+n} = x_k``."""
    if n < 1:
        raise DomainError("shift dimension must be positive")
    return CompanionSystem((1,) + (0,) * (n - 1), scheme, context)


def rsa_companion(p1: int, p2: int) -> CompanionSystem:
    """Shift representation of dimension lambda(p1*p2), valid for every unit."""
    for q in (p1, p2):
        _require_odd_prime(q, minimum=3)
    if p1 == p2:
        raise DomainError("RSA primes must be distinct")
    return shift_companion(carmichael(p1 * p2), Scheme.RSA, (p1 * p2, None))


# -- dimension feasibility ---------------------------------------------------


@dataclass(frozen=True)
class DimensionCheck:
    q: int
    feasible: bool
    alpha: Optional[tuple[Fraction, ...]]
    rank_coefficient: int  # rank of the Hankel matrix
    rank_augmented: int  # rank with the right-hand side appended

    def to_dict(self) -> dict:
        from .exact import format_fraction

        return {
            "q": self.q,
            "feasible": self.feasible,
            "alpha": [format_fraction(a) for a in self.alpha] if self.alpha else None,
            "rank": self.rank_coefficient,
            "rank_augmented": self.rank_augmented,
        }


def _periodic_orbit(m: int, p: int) -> list[int]:
    zeta = period_length(m, p)
    out = [1]
    for _ in range(zeta - 1):
        out.append(out[-1] * m % p)
    return out


def check_dimension(p: int, m: int, q: int) -> DimensionCheck:
    """Does some ``alpha`` of length ``q+1`` reproduce the whole orbit of ``m``?

    Rows ``k = 0..period-1`` of the periodic Hankel system
    ``(x_k, ..., x_{k+q}) . alpha = x_{k+q+1}``; solvable iff both ranks
    agree (Kronecker-Capelli). All ranks are exact.
    """
    if q < 0:
        raise DomainError("q must be nonnegative")
    if gcd(m, p) != 1:
        raise DomainError(f"{m} is not coprime to {p}")
    orbit = _periodic_orbit(m % p, p)
    n = len(orbit)
    idx = (np.arange(n)[:, None] + np.arange(q + 2)[None, :]) % n
    aug = np.asarray(orbit, dtype=np.int64)[idx]
    A, b = aug[:, :-1], aug[:, -1]
    ranks = column_ranks_mod_p(aug)
    rank_a = ranks[q] if ranks[q] == min(n, q + 1) else rank_exact(A)
    if ranks[-1] > rank_a:
        # rank(A|b) <= rank(A) + 1 and the modular rank bounds it from below
        return DimensionCheck(q, False, None, rank_a, rank_a + 1)
    alpha = solve_exact(A, b)
    if alpha is None:
        return DimensionCheck(q, False, None, rank_a, rank_a + 1)
    return DimensionCheck(q, True, tuple(alpha), rank_a, rank_a)


# -- eigenstructure ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Distinct eigenvalues of a companion matrix and their Vandermonde basis.

    ``turns[j]`` is the exact angle of ``eigenvalues[j]`` as a fraction of a
    full turn, when the spectrum is known analytically.
    """

    eigenvalues: np.ndarray
    turns: Optional[tuple[Fraction, ...]] = None
    order: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=complex)
        object.__setattr__(self, "eigenvalues", ev)
        if self.order is None:
            object.__setattr__(self, "order", leja_order(ev))

    def __len__(self) -> int:
        return self.eigenvalues.size

    @cached_property
    def minus_one_index(self) -> Optional[int]:
        if self.turns is not None:
            return next((j for j, t in enumerate(self.turns) if t == Fraction(1, 2)), None)
        hits = np.nonzero(np.abs(self.eigenvalues + 1) < 1e-9)[0]
        return int(hits[0]) if hits.size else None

    @property
    def has_minus_one(self) -> bool:
        return self.minus_one_index is not None

    def is_real(self, j: int) -> bool:
        if self.turns is not None:
            return self.turns[j] in (0, Fraction(1, 2))
        return abs(self.eigenvalues[j].imag) < 1e-9

    def basis(self) -> np.ndarray:
        """Eigenvector matrix V; column j is (1, mu_j, mu_j**2, ...)."""
        return vandermonde(self.eigenvalues)


def _unit_from_turns(turns: Sequence[Fraction]) -> np.ndarray:
    out = np.empty(len(turns), dtype=complex)
    for j, t in enumerate(turns):
        # exact special angles avoid 1e-17 imaginary parts on +-1, +-i
        quarter = t * 4
        if quarter.denominator == 1:
            out[j] = (1, 1j, -1, -1j)[int(quarter) % 4]
        else:
            out[j] = cmath.exp(2j * math.pi * float(t))
    return out


@lru_cache(maxsize=64)
def _analytic_eigensystem(kind: str, q: int) -> EigenSystem:
    if kind == "dh":
        turns = (Fraction(0),) + tuple(Fraction(2 * k + 1, 2 * q) for k in range(q))
    else:
        turns = tuple(Fraction(j, q + 1) for j in range(q + 1))
    return EigenSystem(_unit_from_turns(turns), turns)


def clear_spectrum_cache() -> None:
    """Forget cached analytic spectra (benchmarks time a cold start)."""
    _analytic_eigensystem.cache_clear()


def _dh_pattern(alpha: Sequence[Fraction]) -> bool:
    q = len(alpha) - 1
    if q < 2:
        return False
    expect = [Fraction(0)] * (q + 1)
    expect[0], expect[1], expect[q] = Fraction(1), Fraction(-1), Fraction(1)
    return list(alpha) == expect


def _shift_pattern(alpha: Sequence[Fraction]) -> bool:
    return alpha[0] == 1 and all(a == 0 for a in alpha[1:])


def eigensystem(cs: CompanionSystem) -> EigenSystem:
    """Spectrum of the companion matrix of ``cs``.

    The DH recurrence has characteristic polynomial ``(mu**q + 1)(mu - 1)``
    and the cyclic shift ``mu**(q+1) - 1``; both are returned with exact
    angles. Any other ``alpha`` is handled by numeric root finding.
    """
    alpha = cs.alpha
    q = cs.q
    if _dh_pattern(alpha):
        return _analytic_eigensystem("dh", q)
    if _shift_pattern(alpha):
        return _analytic_eigensystem("shift", q)
    coeffs = [1.0] + [-float(a) for a in reversed(alpha)]
    roots = np.roots(coeffs) if q > 0 else np.array([float(alpha[0])], dtype=complex)
    if roots.size > 1:
        gaps = np.abs(roots[:, None] - roots[None, :]) + np.eye(roots.size)
        if gaps.min() < 1e-8:
            raise NonDiagonalizableError("companion matrix has a repeated eigenvalue")
    return EigenSystem(roots.astype(complex))


def characteristic_vanishes(alpha: Sequence[Fraction], turn: Fraction) -> bool:
    """Exact check that ``mu = exp(2*pi*i*turn)`` is a root of the characteristic polynomial.

    Terms ``c * mu**k`` are grouped by their angle modulo a half turn (using
    ``exp(i*pi) = -1``); the polynomial vanishes if every group cancels.
    This certifies a zero but is not a complete test.
    """
    turn = Fraction(turn)
    groups: dict[Fraction, Fraction] = {}
    q = len(alpha) - 1
    terms = [(q + 1, Fraction(1))] + [(j, -Fraction(a)) for j, a in enumerate(alpha)]
    for power, coeff in terms:
        if coeff == 0:
            continue
        t = (turn * power) % 1
        if t >= Fraction(1, 2):
            t -= Fraction(1, 2)
            coeff = -coeff
        groups[t] = groups.get(t, Fraction(0)) + coeff
    return all(v == 0 for v in groups.values())


def transform_coordinates(es: EigenSystem, z) -> np.ndarray:
    """Modal coordinates ``V^-1 z`` by a structured Vandermonde solve.

    ``z`` may be a lift, a vector, or a matrix whose columns are states.
    """
    arr = np.asarray(z)
    if arr.shape[0] != len(es):
        raise DomainError(f"state has dimension {arr.shape[0]}, expected {len(es)}")
    return solve_primal(es.eigenvalues, arr.astype(complex), es.order)


# -- recovery ------------------------------------------------------------------


class Parity(str, Enum):
    EVEN = "even"
    ODD = "odd"
    UNAVAILABLE = "unavailable"


def _degenerate_floor(zt0: np.ndarray) -> float:
    return 1e-9 * max(1.0, float(np.max(np.abs(zt0))))


def parity_test(es: EigenSystem, zt0, zte) -> Parity:
    """Parity of the exponent from the modal coordinate of eigenvalue -1."""
    k = es.minus_one_index
    if k is None:
        return Parity.UNAVAILABLE
    zt0 = np.asarray(zt0)
    if abs(zt0[k]) <= _degenerate_floor(zt0):
        raise DegenerateCoordinateError("modal coordinate of eigenvalue -1 is zero")
    ratio = zte[k] / zt0[k]
    return Parity.EVEN if ratio.real > 0 else Parity.ODD


@dataclass
class RecoveryResult:
    exponent: int
    residue_class_modulus: int
    parity: Optional[Parity] = None
    scheme: Scheme = Scheme.DH
    diagnostics: list[dict] = field(default_factory=list)
    timing_ms: float = 0.0
    probes: list[dict] = field(default_factory=list)

    def __post_init__(self):
        if not 0 <= self.exponent < self.residue_class_modulus:
            raise RecoveryError(
                f"exponent {self.exponent} not reduced modulo {self.residue_class_modulus}"
            )

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme.value,
            "exponent": self.exponent,
            "residue_class_modulus": self.residue_class_modulus,
            "parity": self.parity.value if self.parity else None,
            "diagnostics": self.diagnostics,
            "probes": self.probes,
            "timing_ms": self.timing_ms,
        }


def _crt_merge(r1: int, n1: int, r2: int, n2: int) -> Optional[tuple[int, int]]:
    """Combine ``x = r1 (mod n1)`` and ``x = r2 (mod n2)``; None when they clash."""
    g = gcd(n1, n2)
    if (r2 - r1) % g:
        return None
    n = n1 // g * n2
    step = (r2 - r1) // g * pow(n1 // g, -1, n2 // g) % (n2 // g) if n2 // g > 1 else 0
    return (r1 + n1 * step) % n, n


def _mode_table(es: EigenSystem):
    """Non-real modes as integer arrays: index, order, step, step^-1 mod order."""
    cached = getattr(es, "_modes", None)
    if cached is None:
        rows = [(j, t.denominator, t.numerator, pow(t.numerator, -1, t.denominator))
                for j, t in enumerate(es.turns) if t.denominator > 2]
        cached = tuple(np.array(col, dtype=np.int64) for col in zip(*rows)) if rows else None
        object.__setattr__(es, "_modes", cached)
    return cached


def _angle_classes(es, zt0, zte, tol):
    """Per non-real eigenvalue: solve ``e * turn = angle(ratio)`` for ``e``.

    With the eigenvalue at ``step/order`` of a turn, ``e`` must satisfy
    ``e = order * (measured + ell) / step`` for some whole number of extra
    turns ``0 <= ell < step``. Snapping ``order * measured`` to an integer
    ``r`` (the integrality test) reduces that search to one modular
    inverse: ``e = r * step^-1 (mod order)``.
    """
    table = _mode_table(es)
    if table is None:
        return []
    idx, order, step, inv = table
    floor = _degenerate_floor(zt0)
    excited = np.abs(zt0[idx]) > floor
    ratio = np.ones(idx.size, dtype=complex)
    ratio[excited] = zte[idx[excited]] / zt0[idx[excited]]
    bad = np.nonzero(np.abs(np.abs(ratio) - 1.0) > 1e-6)[0]
    if bad.size:
        j = int(idx[bad[0]])
        raise RecoveryError(f"mode {j}: ratio magnitude {abs(ratio[bad[0]]):.6g} is not 1")
    scaled = (np.angle(ratio) / (2 * math.pi)) % 1.0 * order
    r = np.rint(scaled)
    off = np.nonzero(excited & (np.abs(scaled - r) > tol * step))[0]
    if off.size:
        raise RecoveryError(f"mode {int(idx[off[0]])}: no whole-turn shift makes the exponent integral")
    r = r.astype(np.int64) % order
    cand = r * inv % order
    ell = (cand * step - r) // order
    diagnostics = []
    for j, o, st, c, l, ex in zip(idx.tolist(), order.tolist(), step.tolist(),
                                  cand.tolist(), ell.tolist(), excited.tolist()):
        turn = f"{st}/{o}"
        if ex:
            diagnostics.append({"index": j, "turn": turn, "order": o, "ell": l,
                                "candidate": c, "status": "used"})
        else:
            diagnostics.append({"index": j, "turn": turn, "status": "unexcited"})
    return diagnostics


def _recover(es: EigenSystem, multiplier: int, p: int, target: int, scheme: Scheme):
    """Exponent ``e`` with ``multiplier**e == target (mod p)`` from modal ratios."""
    if es.turns is None:
        raise RecoveryError("spectral recovery needs an analytic spectrum")
    n = len(es)
    z0 = np.empty(n)
    ze = np.empty(n)
    a, b = 1, target % p
    for j in range(n):
        z0[j], ze[j] = a, b
        a, b = a * multiplier % p, b * multiplier % p
    modal = transform_coordinates(es, np.column_stack([z0, ze]))
    zt0, zte = modal[:, 0], modal[:, 1]
    tol = 1e-9 * n
    diagnostics = _angle_classes(es, zt0, zte, tol)

    try:
        parity = parity_test(es, zt0, zte)
    except DegenerateCoordinateError:
        parity = Parity.UNAVAILABLE

    residue, modulus = 0, 1
    classes = {(d["candidate"], d["order"]) for d in diagnostics if d["status"] == "used"}
    for cand, order in sorted(classes, key=lambda c: c[1]):
        merged = _crt_merge(residue, modulus, cand, order)
        if merged is None:
            raise RecoveryError("eigenvalue candidates are inconsistent")
        residue, modulus = merged
    if parity is not Parity.UNAVAILABLE:
        merged = _crt_merge(residue, modulus, int(parity is Parity.ODD), 2)
        if merged is None:
            raise RecoveryError("parity contradicts the angle candidates")
        residue, modulus = merged
    if modulus == 1:
        raise InsufficientSpectrumError("no excited eigenvalue other than 1")
    if pow(multiplier, residue, p) != target % p:
        raise RecoveryError(f"candidate exponent {residue} does not reproduce the target")
    return RecoveryResult(residue, modulus, parity, scheme, diagnostics)


def _dh_system(p: int, m: int) -> CompanionSystem:
    # the DH recurrence needs m**((p-1)/2) = -1, i.e. a non-residue
    if p > 3 and is_prime(p) and euler_criterion(m, p) == -1:
        return dh_companion(p)
    return shift_companion(period_length(m, p), Scheme.DH, (p, m))


def recover_exponent(p: int, m: int, ciphertext: int) -> RecoveryResult:
    """Secret ``e`` with ``m**e == ciphertext (mod p)``, reduced modulo the period.

    Uses the minimal DH companion when ``m`` is a quadratic non-residue
    (every generator is) and the cyclic shift of the orbit's period
    otherwise.
    """
    if p < 3 or gcd(m, p) != 1:
        raise DomainError(f"{m} is not a unit modulo {p}")
    if gcd(ciphertext, p) != 1:
        raise DomainError(f"ciphertext {ciphertext} is not a unit modulo {p}")
    start = time.perf_counter()
    m %= p
    es = eigensystem(_dh_system(p, m))
    result = _recover(es, m, p, ciphertext, Scheme.DH)
    result.timing_ms = (time.perf_counter() - start) * 1e3
    return result


def _probe_messages(p: int, e: int, lam: int):
    """Messages whose ciphertext has full period lambda, then the rest."""
    best, rest = [], []
    for msg in range(2, p):
        if gcd(msg, p) != 1:
            continue
        (best if period_length(pow(msg, e, p), p) == lam else rest).append(msg)
    return best + rest


def recover_rsa_key(p1: int, p2: int, e: int) -> RecoveryResult:
    """Private key class ``d mod zeta`` from the public key ``(p1*p2, e)``.

    Encrypts a probe message ``m`` of maximal period, recovers ``d`` from the
    decryption orbit ``y_{k+1} = c*y_k`` that reaches ``m`` at step ``d``,
    then confirms the key on a second, independent probe.
    """
    p = p1 * p2
    cs = rsa_companion(p1, p2)
    if gcd(e, carmichael(p)) != 1:
        raise DomainError(f"e={e} is not a valid RSA exponent modulo {p}")
    start = time.perf_counter()
    lam = cs.dimension
    es = eigensystem(cs)
    probes = _probe_messages(p, e, lam)
    if len(probes) < 2:
        raise RecoveryError("fewer than two probe messages available")
    msg = probes[0]
    cipher = pow(msg, e, p)
    result = _recover(es, cipher, p, msg, Scheme.RSA)
    zeta = result.residue_class_modulus
    second = probes[1]
    second_cipher = pow(second, e, p)
    for t in range(lam // zeta + 1):
        d = result.exponent + t * zeta
        if pow(second_cipher, d, p) == second:
            break
    else:
        raise RecoveryError("recovered key class fails on the second probe")
    result.exponent = d % zeta
    result.probes = [
        {"message": msg, "ciphertext": cipher, "decrypts": pow(cipher, d, p) == msg},
        {"message": second, "ciphertext": second_cipher, "decrypts": True, "key": d},
    ]
    result.timing_ms = (time.perf_counter() - start) * 1e3
    return result
