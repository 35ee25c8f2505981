"""O(n^2) Vandermonde solves (Bjorck-Pereyra).

``V[i, j] = nodes[j] ** i``, i.e. column ``j`` is the eigenvector
``(1, mu_j, mu_j**2, ...)`` of a companion matrix. ``solve_primal`` solves
``V x = b`` and ``solve_dual`` solves ``V.T a = f`` (polynomial
interpolation). Both accept a matrix right-hand side, one system per
column.

Both reorder the nodes into Leja order first. With the natural order the
recurrences lose all accuracy by n ~ 50 for nodes on the unit circle;
Leja order keeps residuals near machine precision into the thousands.
"""
from __future__ import annotations

import numpy as np

__all__ = ["vandermonde", "leja_order", "solve_primal", "solve_dual"]


def vandermonde(nodes) -> np.ndarray:
    x = np.asarray(nodes)
    return x[np.newaxis, :] ** np.arange(x.size)[:, np.newaxis]


def leja_order(nodes) -> np.ndarray:
    """Permutation putting ``nodes`` in Leja order (greedy max product of distances)."""
    x = np.asarray(nodes, dtype=complex)
    if x.size == 0:
        return np.zeros(0, dtype=int)
    order = [int(np.argmax(np.abs(x)))]
    with np.errstate(divide="ignore"):
        log_dist = np.log(np.abs(x - x[order[0]]))
        log_dist[order[0]] = -np.inf
        for _ in range(x.size - 1):
            j = int(np.argmax(log_dist))
            order.append(j)
            log_dist = log_dist + np.log(np.abs(x - x[j]))
            log_dist[order] = -np.inf
    return np.asarray(order)


def _prepare(nodes, rhs):
    x = np.asarray(nodes, dtype=complex)
    b = np.array(rhs, dtype=complex)
    if b.shape[0] != x.size:
        raise ValueError(f"right-hand side has {b.shape[0]} rows, expected {x.size}")
    return x, b


def solve_primal(nodes, rhs, order=None) -> np.ndarray:
    """Solve ``V x = rhs`` for the Vandermonde matrix of ``nodes``.

    ``order`` may pass a precomputed :func:`leja_order` of the nodes.
    """
    x, b = _prepare(nodes, rhs)
    order = leja_order(x) if order is None else np.asarray(order)
    out = np.empty_like(b)
    out[order] = _primal(x[order], b)
    return out


def _primal(x, b):
    n = x.size - 1
    col = (slice(None),) + (np.newaxis,) * (b.ndim - 1)
    for k in range(n):
        b[k + 1 :] = b[k + 1 :] - x[k] * b[k:n]
    for k in range(n - 1, -1, -1):
        b[k + 1 :] = b[k + 1 :] / (x[k + 1 :] - x[: n - k])[col]
        b[k:n] = b[k:n] - b[k + 1 :]
    return b


def solve_dual(nodes, rhs, order=None) -> np.ndarray:
    """Solve ``V.T a = rhs``: monomial coefficients of the interpolant."""
    x, f = _prepare(nodes, rhs)
    order = leja_order(x) if order is None else np.asarray(order)
    return _dual(x[order], f[order])


def _dual(x, f):
    n = x.size - 1
    col = (slice(None),) + (np.newaxis,) * (f.ndim - 1)
    for k in range(n):
        f[k + 1 :] = (f[k + 1 :] - f[k:n]) / (x[k + 1 :] - x[: n - k])[col]
    for k in range(n - 1, -1, -1):
        f[k:n] = f[k:n] - x[k] * f[k + 1 :]
    return f
