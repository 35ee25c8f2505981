"""Linear complexity versus reduced nonlinear liftings.

Berlekamp-Massey runs over the rationals with exact ``Fraction``
arithmetic. Over an infinite field every sequence of length ``n`` is
produced by *some* recurrence of length about ``n/2``, so a recurrence is
only reported when it is determined by the data, i.e. when at least one
term beyond the ``2L`` needed to fix it is predicted correctly.

The reduced models are the four small lifted families:

=================  ===========================  ===========
family             sequence law                 state dim
=================  ===========================  ===========
root_of_unity      x' = x + a  (mod n)          1
exponential        x' = x + a                   1
log_affine         x' = m * x**b                1 (m == 1) else 2
affine_augmented   x' = m * x + a               2
=================  ===========================  ===========
"""
from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DomainError

__all__ = [
    "Lfsr",
    "ReducedModel",
    "FAMILIES",
    "linear_complexity",
    "berlekamp_massey",
    "fit_reduced",
    "compare_complexity",
    "ComplexityReport",
    "complexity_csv",
]

FAMILIES = ("root_of_unity", "exponential", "log_affine", "affine_augmented")


@dataclass(frozen=True)
class Lfsr:
    """``x_k = sum_i coefficients[i-1] * x_{k-i}`` for ``i = 1..length``."""

    coefficients: tuple[Fraction, ...]
    seed: tuple[Fraction, ...]

    @property
    def length(self) -> int:
        return len(self.coefficients)

    def generate(self, n: int) -> list[Fraction]:
        out = list(self.seed[:n])
        while len(out) < n:
            out.append(sum(c * out[-i] for i, c in enumerate(self.coefficients, start=1)))
        return out

    def __str__(self) -> str:
        terms = " + ".join(f"({c})*x[k-{i}]" for i, c in enumerate(self.coefficients, 1) if c)
        return f"x[k] = {terms or '0'}"


def _bm(seq: Sequence[Fraction]) -> tuple[int, list[Fraction]]:
    """Massey's iteration; returns ``(L, C)`` with connection polynomial ``C``."""
    C = [Fraction(1)]
    B = [Fraction(1)]
    L, shift, b = 0, 1, Fraction(1)
    for n, s in enumerate(seq):
        d = s + sum(C[i] * seq[n - i] for i in range(1, L + 1))
        if d == 0:
            shift += 1
            continue
        coef = d / b
        T = C[:]
        if len(C) < len(B) + shift:
            C += [Fraction(0)] * (len(B) + shift - len(C))
        for i, bi in enumerate(B):
            C[i + shift] -= coef * bi
        if 2 * L <= n:
            L, B, b, shift = n + 1 - L, T, d, 1
        else:
            shift += 1
    C += [Fraction(0)] * (L + 1 - len(C))
    return L, C[: L + 1]


def linear_complexity(seq: Sequence) -> int:
    """Length of the shortest linear recurrence generating ``seq`` over Q."""
    if len(seq) == 0:
        raise DomainError("empty sequence")
    return _bm([Fraction(v) for v in seq])[0]


def berlekamp_massey(seq: Sequence, *, certify: bool = True) -> Optional[Lfsr]:
    """Shortest LFSR over Q generating ``seq``.

    With ``certify`` (the default) returns ``None`` unless the sequence is
    longer than ``2L``, i.e. the recurrence found from the first ``2L``
    terms also predicts at least one held-out term.
    """
    if len(seq) == 0:
        raise DomainError("empty sequence")
    values = [Fraction(v) for v in seq]
    L, C = _bm(values)
    if certify and 2 * L >= len(values):
        return None
    lfsr = Lfsr(tuple(-c for c in C[1:]), tuple(values[:L]))
    assert lfsr.generate(len(values)) == values
    return lfsr


@dataclass(frozen=True)
class ReducedModel:
    family: str
    parameters: dict = field(hash=False)
    state_dimension: int
    x0: int

    def replay(self, n: int) -> list[int]:
        """Run the lifted dynamics ``n - 1`` steps from ``x0`` and decode each state.

        Replays are exact: unit-circle angles are tracked as fractions of a
        turn, exponential and logarithmic lifts by their integer exponents.
        """
        p = self.parameters
        out = []
        if self.family == "root_of_unity":
            mod = p["n"]
            turn = Fraction(self.x0, mod)  # z = exp(2*pi*i*turn)
            rot = Fraction(p["a"], mod)
            for _ in range(n):
                out.append(int(turn * mod) % mod)
                turn = (turn + rot) % 1
        elif self.family == "exponential":
            log_z = self.x0  # z = exp(log_z); multiplying by exp(a) adds a
            for _ in range(n):
                out.append(log_z)
                log_z += p["a"]
        elif self.family == "affine_augmented":
            m, a = p["m"], p["a"]
            z = (self.x0, a)  # z' = [[m, 1], [0, 1]] z
            for _ in range(n):
                out.append(z[0])
                z = (m * z[0] + z[1], z[1])
        elif self.family == "log_affine":
            m, b = p["m"], p["b"]
            x = self.x0  # z = ln x obeys z' = b*z + ln m
            for _ in range(n):
                out.append(x)
                x = m * x**b
        else:
            raise DomainError(f"unknown family {self.family}")
        return out

    def lifted(self, n: int) -> list[complex | float | tuple]:
        """Floating view of the lifted states, for display."""
        xs = self.replay(n)
        if self.family == "root_of_unity":
            return [cmath.exp(2j * math.pi * x / self.parameters["n"]) for x in xs]
        if self.family == "exponential":
            return [math.exp(x) if x < 700 else math.inf for x in xs]
        if self.family == "log_affine":
            return [math.log(x) for x in xs]
        return [(x, self.parameters["a"]) for x in xs]

    def multiplier(self) -> complex | float:
        """The scalar the lifted state is multiplied by each step (1-D families)."""
        p = self.parameters
        if self.family == "root_of_unity":
            return cmath.exp(2j * math.pi * p["a"] / p["n"])
        if self.family == "exponential":
            return math.exp(p["a"])
        if self.family == "log_affine":
            return float(p["b"])
        raise DomainError("affine_augmented evolves by a 2x2 matrix")

    def to_dict(self) -> dict:
        return {"family": self.family, "parameters": dict(self.parameters),
                "state_dimension": self.state_dimension, "x0": self.x0}


def _fit_root_of_unity(xs):
    if len(xs) < 2 or min(xs) < 0:
        return None
    if all(b >= a for a, b in zip(xs, xs[1:])):
        return None  # never wraps, so the modulus is not identifiable
    top = max(xs)
    for n in range(top + 1, top + len(xs) + 2):
        a = (xs[1] - xs[0]) % n
        if all((x + a) % n == y for x, y in zip(xs, xs[1:])):
            return {"n": n, "a": a}, 1
    return None


def _fit_exponential(xs):
    if len(xs) < 2:
        return None
    a = xs[1] - xs[0]
    if all(y - x == a for x, y in zip(xs, xs[1:])):
        return {"a": a}, 1
    return None


def _fit_affine(xs):
    if len(xs) < 3:
        return None
    if xs[1] == xs[0]:
        m = 1
    else:
        m = Fraction(xs[2] - xs[1], xs[1] - xs[0])
        if m.denominator != 1:
            return None
        m = int(m)
    a = xs[1] - m * xs[0]
    if all(m * x + a == y for x, y in zip(xs, xs[1:])):
        return {"m": m, "a": a}, 2
    return None


def _fit_log_affine(xs):
    if len(xs) < 3 or min(xs) < 1:
        return None
    x0, x1 = xs[0], xs[1]
    max_b = max(1, x1.bit_length() + 1)
    for b in range(1, max_b + 1):
        base = x0**b
        if x1 % base:
            if base > x1:
                break
            continue
        m = x1 // base
        if m >= 1 and all(m * x**b == y for x, y in zip(xs, xs[1:])):
            return {"m": m, "b": b}, (1 if m == 1 else 2)
    return None


_FITTERS = {
    "root_of_unity": _fit_root_of_unity,
    "exponential": _fit_exponential,
    "log_affine": _fit_log_affine,
    "affine_augmented": _fit_affine,
}


def fit_reduced(seq: Sequence[int], family: str) -> Optional[ReducedModel]:
    """Fit one reduced family to an integer sequence; ``None`` if it does not fit.

    Parameters come from the first terms and are validated on the rest.
    """
    if family not in _FITTERS:
        raise DomainError(f"unknown family {family!r}; expected one of {FAMILIES}")
    xs = [int(v) for v in seq]
    if any(Fraction(v) != x for v, x in zip(seq, xs)):
        return None
    found = _FITTERS[family](xs)
    if found is None:
        return None
    params, dim = found
    model = ReducedModel(family, params, dim, xs[0])
    if model.replay(len(xs)) != xs:
        return None
    return model


@dataclass(frozen=True)
class ComplexityReport:
    length: int
    lfsr: Optional[Lfsr]
    reduced: Optional[ReducedModel]

    @property
    def lfsr_length(self) -> Optional[int]:
        return self.lfsr.length if self.lfsr else None

    @property
    def reduced_dimension(self) -> Optional[int]:
        return self.reduced.state_dimension if self.reduced else None

    def to_dict(self) -> dict:
        return {
            "length": self.length,
            "lfsr_length": self.lfsr_length,
            "lfsr": str(self.lfsr) if self.lfsr else None,
            "reduced_family": self.reduced.family if self.reduced else None,
            "reduced_dim": self.reduced_dimension,
            "reduced": self.reduced.to_dict() if self.reduced else None,
        }


def compare_complexity(seq: Sequence[int]) -> ComplexityReport:
    """Certified LFSR length next to the smallest reduced lifting that fits."""
    if len(seq) == 0:
        raise DomainError("empty sequence")
    lfsr = berlekamp_massey(seq)
    best = None
    for family in FAMILIES:
        model = fit_reduced(seq, family)
        if model and (best is None or model.state_dimension < best.state_dimension):
            best = model
    return ComplexityReport(len(seq), lfsr, best)


def complexity_csv(rows: Sequence[tuple[str, ComplexityReport]]) -> str:
    """CSV with columns id, length, lfsr_length, reduced_family, reduced_dim."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["id", "length", "lfsr_length", "reduced_family", "reduced_dim"])
    for ident, rep in rows:
        writer.writerow([
            ident,
            rep.length,
            "" if rep.lfsr_length is None else rep.lfsr_length,
            rep.reduced.family if rep.reduced else "",
            "" if rep.reduced_dimension is None else rep.reduced_dimension,
        ])
    return buf.getvalue()
