"""Learning the companion representation from trajectory data.

Snapshots of the value-list lift are stacked into Hankel matrices ``Z`` and
``Z_plus``; the least-squares operator ``Z_plus Z^T (Z Z^T)^-1`` is formed in
exact rational arithmetic. Because lifts are integers, ranks are exact and
the minimal lifting dimension is simply ``rank(Z) - 1``.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .dynsys import Scheme, Trajectory
from .errors import DomainError, RankDeficientError, TrajectoryRangeError
from .exact import format_fraction, rank_exact, rank_mod_p, solve_exact
from .spectral import CompanionSystem

__all__ = [
    "HankelData",
    "build_hankel",
    "rank_exact",
    "edmd_fit",
    "edmd_fit_float",
    "minimal_dimension",
    "willems_check",
    "matrix_to_csv",
]


@dataclass(frozen=True)
class HankelData:
    """``Z[:, k] = (x_k..x_{k+q})`` and ``Z_plus[:, k] = (x_{k+1}..x_{k+q+1})``."""

    Z: tuple[tuple[int, ...], ...]
    Z_plus: tuple[tuple[int, ...], ...]
    q: int
    N: int
    context: Optional[tuple[int, int]] = None

    def Z_array(self) -> np.ndarray:
        return np.array(self.Z, dtype=object)

    def truncated(self, rows: int) -> "HankelData":
        """Keep the first ``rows`` observables of both snapshot matrices."""
        if not 1 <= rows <= self.q + 1:
            raise DomainError(f"cannot keep {rows} of {self.q + 1} rows")
        return HankelData(self.Z[:rows], self.Z_plus[:rows], rows - 1, self.N, self.context)


def build_hankel(traj: Trajectory, q: int, N: Optional[int] = None) -> HankelData:
    """Snapshot matrices of the ``(q+1)``-dimensional value-list lift.

    ``N`` defaults to ``q+1``, the smallest sample count that can give
    full row rank.
    """
    if q < 0:
        raise DomainError("q must be nonnegative")
    N = q + 1 if N is None else N
    if N < 1:
        raise DomainError("need at least one snapshot")
    try:
        seq = traj.window(0, N + q + 1)
    except TrajectoryRangeError as exc:
        raise TrajectoryRangeError(f"trajectory too short for q={q}, N={N}: {exc}") from None
    Z = tuple(tuple(seq[i : i + N]) for i in range(q + 1))
    Z_plus = tuple(tuple(seq[i + 1 : i + 1 + N]) for i in range(q + 1))
    return HankelData(Z, Z_plus, q, N, (traj.modulus, traj.multiplier))


def edmd_fit(hd: HankelData) -> CompanionSystem:
    """Exact least-squares Koopman matrix, returned as its companion row.

    With ``Z`` of full row rank the minimizer of ``||Z_plus - A Z||_F`` is
    ``A = Z_plus Z^T (Z Z^T)^-1``. Its first ``q`` rows are unit shifts
    because the first rows of ``Z_plus`` repeat rows of ``Z``; the last row
    ``alpha`` solves ``(Z Z^T) alpha = Z z_last`` with ``z_last`` the last
    row of ``Z_plus``.
    """
    n = hd.q + 1
    if rank_exact(hd.Z) < n:
        raise RankDeficientError(
            f"Z has rank below {n}; use minimal_dimension to pick a smaller q"
        )
    Z = hd.Z
    gram = [[sum(a * b for a, b in zip(Z[i], Z[j])) for j in range(n)] for i in range(n)]
    target = hd.Z_plus[-1]
    rhs = [sum(a * b for a, b in zip(Z[i], target)) for i in range(n)]
    alpha = solve_exact(gram, rhs)
    if alpha is None:  # unreachable for a nonsingular Gram matrix
        raise RankDeficientError("normal equations are singular")
    return CompanionSystem(tuple(alpha), Scheme.LEARNED, hd.context)


def edmd_fit_float(hd: HankelData) -> np.ndarray:
    """Floating-point operator ``Z_plus @ pinv(Z)``, for cross-checks only."""
    Z = np.array(hd.Z, dtype=float)
    Zp = np.array(hd.Z_plus, dtype=float)
    return Zp @ np.linalg.pinv(Z)


def minimal_dimension(traj: Trajectory) -> tuple[int, CompanionSystem]:
    """Smallest ``q`` with an exact companion representation, plus its ``alpha``.

    Uses the full-period Hankel matrix (``q+1 = N = period``); its rank
    ``r`` gives ``q = r - 1`` and the fit is redone on the first ``r`` rows.
    """
    period = traj.period
    if period is None:
        raise TrajectoryRangeError("trajectory period unknown")
    full = build_hankel(traj, period - 1, period)
    r = rank_exact(full.Z)
    reduced = full.truncated(r)
    return r - 1, edmd_fit(reduced)


def willems_check(
    traj: Trajectory,
    L: int,
    window: Sequence[int],
    N: Optional[int] = None,
) -> bool:
    """Is ``window`` a length-``L`` trajectory of the system that produced ``traj``?

    Tests whether ``window`` lies in the column span of the depth-``L``
    Hankel matrix with one column per window start ``k = 0..N-1`` (default
    ``N``: one period). Windows past the stored data wrap through the
    period.
    """
    if len(window) != L:
        raise DomainError(f"window has length {len(window)}, expected {L}")
    if N is None:
        if traj.period is None:
            raise TrajectoryRangeError("period unknown; pass N")
        N = traj.period
    if N < 1 or L < 1:
        raise DomainError("need N >= 1 and L >= 1")
    H = [[traj.at(k + i) for k in range(N)] for i in range(L)]
    aug = [row + [int(w)] for row, w in zip(H, window)]
    base = rank_exact(H)
    if rank_mod_p(aug) > base:
        return False
    return rank_exact(aug) == base


def matrix_to_csv(M: Sequence[Sequence[int | Fraction]]) -> str:
    """Row-major CSV with exact entries written as ``n/d``."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in M:
        writer.writerow([format_fraction(v) for v in row])
    return buf.getvalue()
