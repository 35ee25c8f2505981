"""Exact linear algebra over the rationals.

Ranks and solutions here are exact. A modular elimination gives a cheap
lower bound on the rank; it decides the answer outright when the bound
already equals the smaller matrix dimension and otherwise the
fraction-free (Bareiss) elimination runs. Solutions proposed by floating
point are accepted only after an exact integer check.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Optional, Sequence

import numpy as np

__all__ = [
    "as_integer_rows",
    "rank_mod_p",
    "column_ranks_mod_p",
    "bareiss_rank",
    "rank_exact",
    "solve_exact",
    "format_fraction",
]

# largest prime below 2**31, so products of reduced entries fit in int64
MODULAR_PRIME = 2147483647

Number = int | Fraction


def _shape(M: Sequence[Sequence[Number]]) -> tuple[int, int]:
    rows = len(M)
    return rows, (len(M[0]) if rows else 0)


def as_integer_rows(M) -> list[list[int]]:
    """Clear denominators row by row (rank preserving)."""
    if isinstance(M, np.ndarray) and np.issubdtype(M.dtype, np.integer):
        return M.tolist()
    out = []
    for row in M:
        if all(type(v) is int for v in row):
            out.append([int(v) for v in row])
            continue
        row = [Fraction(v) for v in row]
        scale = lcm(1, *(v.denominator for v in row))
        out.append([int(v * scale) for v in row])
    return out


def column_ranks_mod_p(M, prime: int = MODULAR_PRIME) -> list[int]:
    """Lower bounds on the ranks of the column prefixes of ``M``.

    ``out[c]`` never exceeds the rank over Q of the first ``c+1`` columns.
    Tall matrices are first compressed to a square one by a fixed random
    integer combination of the rows, which can only lower ranks and keeps
    them intact with overwhelming probability. Elimination then runs
    modulo ``prime`` column by column, so every prefix rank comes from one
    pass.
    """
    if isinstance(M, np.ndarray) and M.dtype == np.int64:
        A = M % prime
    else:
        rows = as_integer_rows(M)
        try:
            A = np.array(rows, dtype=np.int64) % prime
        except OverflowError:
            A = (np.array(rows, dtype=object) % prime).astype(np.int64)
    n_rows, n_cols = A.shape if A.ndim == 2 else (0, 0)
    if n_rows == 0 or n_cols == 0:
        return [0] * n_cols
    if n_rows > n_cols:
        A = _compress_rows(A, n_cols, prime)
        n_rows = A.shape[0]
    rank = 0
    out = []
    for col in range(n_cols):
        if rank < n_rows:
            nz = np.nonzero(A[rank:, col])[0]
            if nz.size:
                piv = rank + int(nz[0])
                if piv != rank:
                    A[[rank, piv]] = A[[piv, rank]]
                inv = pow(int(A[rank, col]), prime - 2, prime)
                A[rank, col:] = A[rank, col:] * inv % prime
                below = A[rank + 1 :, col].copy()
                if below.any():
                    update = np.outer(below, A[rank, col:]) % prime
                    A[rank + 1 :, col:] = (A[rank + 1 :, col:] - update) % prime
                rank += 1
        out.append(rank)
    return out


_COMPRESS_BITS = 20


def _compress_rows(A: np.ndarray, k: int, prime: int) -> np.ndarray:
    """``R @ A mod prime`` for a fixed random ``k x rows`` matrix ``R``."""
    n = A.shape[0]
    # keep each dot product below 2**63: entries < 2**20, terms < 2**20 * max|A|
    if n * (2**_COMPRESS_BITS) * int(A.max()) >= 2**62:
        return A  # too large to combine safely; eliminate the full matrix
    R = np.random.default_rng(n * 7919 + k).integers(0, 2**_COMPRESS_BITS, size=(k, n))
    return (R @ A) % prime


def rank_mod_p(M, prime: int = MODULAR_PRIME) -> int:
    """Lower bound on the rank of ``M`` over Q, by elimination modulo ``prime``."""
    ranks = column_ranks_mod_p(M, prime)
    return ranks[-1] if ranks else 0


def bareiss_rank(M) -> int:
    """Rank by fraction-free Gaussian elimination on Python ints."""
    A = as_integer_rows(M)
    n_rows, n_cols = _shape(A)
    rank = 0
    prev = 1
    for col in range(n_cols):
        if rank == n_rows:
            break
        piv = next((r for r in range(rank, n_rows) if A[r][col] != 0), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        pr = A[rank]
        a = pr[col]
        for r in range(rank + 1, n_rows):
            row = A[r]
            b = row[col]
            A[r] = [(a * row[c] - b * pr[c]) // prev for c in range(n_cols)]
        prev = a
        rank += 1
    return rank


def rank_exact(M) -> int:
    rows = as_integer_rows(M)
    n_rows, n_cols = _shape(rows)
    if n_rows == 0 or n_cols == 0:
        return 0
    lower = rank_mod_p(rows)
    if lower == min(n_rows, n_cols):
        return lower
    return bareiss_rank(rows)


def _verify(A: list[list[int]], b: list[int], x: list[Fraction]) -> bool:
    denom = lcm(1, *(v.denominator for v in x))
    num = [int(v * denom) for v in x]
    try:
        A_arr = np.array(A, dtype=np.int64)
        b_arr = np.array(b, dtype=np.int64)
    except OverflowError:
        A_arr = None
    if A_arr is not None and A_arr.size:
        bound = max(map(abs, num), default=0) * int(np.abs(A_arr).max()) * len(num)
        if bound + denom * int(np.abs(b_arr).max(initial=0)) < 2**62:
            # every partial sum fits in int64, so the integer check is exact
            return bool(np.array_equal(A_arr @ np.array(num, dtype=np.int64), denom * b_arr))
    return all(
        sum(a * v for a, v in zip(row, num) if a) == denom * rhs for row, rhs in zip(A, b)
    )


def _float_candidate(A, b, max_denominator: int) -> Optional[list[Fraction]]:
    try:
        Af = np.array(A, dtype=float)
        bf = np.array(b, dtype=float)
        sol, *_ = np.linalg.lstsq(Af, bf, rcond=None)
    except (OverflowError, np.linalg.LinAlgError):
        return None
    if not np.all(np.isfinite(sol)):
        return None
    return [Fraction(float(v)).limit_denominator(max_denominator) for v in sol]


def _gauss_jordan(A, b) -> Optional[list[Fraction]]:
    n_rows, n_cols = _shape(A)
    M = [[Fraction(v) for v in row] + [Fraction(rhs)] for row, rhs in zip(A, b)]
    pivots = []
    r = 0
    for col in range(n_cols):
        piv = next((i for i in range(r, n_rows) if M[i][col] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][col]
        M[r] = [v * inv for v in M[r]]
        for i in range(n_rows):
            if i != r and M[i][col] != 0:
                f = M[i][col]
                M[i] = [vi - f * vr for vi, vr in zip(M[i], M[r])]
        pivots.append(col)
        r += 1
        if r == n_rows:
            break
    if any(M[i][n_cols] != 0 for i in range(r, n_rows)):
        return None
    x = [Fraction(0)] * n_cols
    for i, col in enumerate(pivots):
        x[col] = M[i][n_cols]
    return x


def solve_exact(A, b, *, max_denominator: int = 10**6) -> Optional[list[Fraction]]:
    """A rational ``x`` with ``A @ x == b`` exactly, or ``None`` if inconsistent.

    When the system is underdetermined one particular solution is returned.
    A float least-squares guess is tried first and kept only if it passes
    the exact check; otherwise exact Gauss-Jordan decides.
    """
    A_int = []
    b_int = []
    if isinstance(A, np.ndarray) and np.issubdtype(A.dtype, np.integer):
        A_int, b_int = A.tolist(), [int(v) for v in b]
        A, b = (), ()
    for row, rhs in zip(A, b):
        if type(rhs) is int and all(type(v) is int for v in row):
            A_int.append([int(v) for v in row])
            b_int.append(int(rhs))
            continue
        row = [Fraction(v) for v in row] + [Fraction(rhs)]
        scale = lcm(1, *(v.denominator for v in row))
        ints = [int(v * scale) for v in row]
        A_int.append(ints[:-1])
        b_int.append(ints[-1])
    if not A_int:
        return []
    guess = _float_candidate(A_int, b_int, max_denominator)
    if guess is not None and _verify(A_int, b_int, guess):
        return guess
    return _gauss_jordan(A_int, b_int)


def format_fraction(v: Number) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
