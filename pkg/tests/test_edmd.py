import random
from fractions import Fraction

import numpy as np
import pytest

from koopcrypt.dynsys import Trajectory, simulate
from koopcrypt.edmd import (
    build_hankel,
    edmd_fit,
    edmd_fit_float,
    matrix_to_csv,
    minimal_dimension,
    willems_check,
)
from koopcrypt.errors import DomainError, RankDeficientError, TrajectoryRangeError
from koopcrypt.exact import rank_exact
from koopcrypt.spectral import dh_companion

from conftest import oracle_generators, oracle_rank


def _oracle_min_q(p, m):
    """Smallest q whose periodic Hankel system is consistent, by Fraction ranks."""
    traj = simulate((p, m))
    z = traj.period
    orbit = traj.one_period()
    for q in range(z):
        A = [[orbit[(k + j) % z] for j in range(q + 1)] for k in range(z)]
        aug = [row + [orbit[(k + q + 1) % z]] for k, row in enumerate(A)]
        if oracle_rank(A) == oracle_rank(aug):
            return q
    raise AssertionError("shift of the period always works")


def test_hankel_19():
    hd = build_hankel(simulate((19, 2)), q=9, N=10)
    assert [row[0] for row in hd.Z] == [1, 2, 4, 8, 16, 13, 7, 14, 9, 18]
    assert hd.Z_plus[0] == hd.Z[1]
    assert rank_exact(hd.Z) == 10


def test_hankel_needs_enough_data():
    traj = Trajectory((1, 2, 4), 2, 19)
    with pytest.raises(TrajectoryRangeError):
        build_hankel(traj, 3)
    with pytest.raises(DomainError):
        build_hankel(simulate((19, 2)), -1)


@pytest.mark.parametrize("p,m,q,alpha", [
    (19, 2, 9, [1, -1, 0, 0, 0, 0, 0, 0, 0, 1]),
    (5, 2, 2, [1, -1, 1]),
    (15, 2, 3, [1, 0, 0, 0]),
    (15, 4, 1, [1, 0]),
])
def test_edmd_examples(p, m, q, alpha):
    cs = edmd_fit(build_hankel(simulate((p, m)), q, q + 1))
    assert list(cs.alpha) == alpha


@pytest.mark.parametrize("p,m", [(19, 2), (23, 5), (29, 2)])
def test_exact_fit_matches_float_pinv(p, m):
    q = (p - 1) // 2
    hd = build_hankel(simulate((p, m)), q, 3 * q)
    alpha = edmd_fit(hd).alpha
    A = edmd_fit_float(hd)
    assert np.allclose(A[-1], [float(a) for a in alpha], atol=1e-6)
    assert np.allclose(A[:-1], np.eye(q + 1)[1:], atol=1e-6)


def test_rank_deficient():
    with pytest.raises(RankDeficientError):
        edmd_fit(build_hankel(simulate((15, 4)), 3))


@pytest.mark.parametrize("p,m,expected", [(15, 4, 1), (15, 2, 3), (19, 2, 9), (19, 4, 8), (21, 2, 4)])
def test_minimal_dimension(p, m, expected):
    q, cs = minimal_dimension(simulate((p, m)))
    assert q == expected == _oracle_min_q(p, m)
    orbit = list(simulate((p, m), steps=40).values)
    assert cs.extend(orbit, len(orbit)) == orbit


@pytest.mark.parametrize("p", [7, 11, 13])
def test_minimal_dimension_generators(p):
    for m in oracle_generators(p):
        q, cs = minimal_dimension(simulate((p, m)))
        assert q == (p - 1) // 2
        assert cs.alpha == dh_companion(p).alpha


def test_willems_rotations_and_corruptions(orbit19):
    period = orbit19.one_period()
    rng = random.Random(1)
    for r in range(18):
        window = period[r:] + period[:r]
        assert willems_check(orbit19, 18, window)
        i = rng.randrange(18)
        bad = list(window)
        bad[i] += rng.choice([-3, -1, 1, 2, 19])
        assert not willems_check(orbit19, 18, bad)


def test_willems_short_windows_are_unconstrained(orbit19):
    # below the system order the Hankel matrix has full row rank
    assert willems_check(orbit19, 3, [1, 2, 4])
    assert willems_check(orbit19, 3, [1, 2, 5])
    assert not willems_check(orbit19, 11, orbit19.window(0, 10) + [0])


def test_willems_length_mismatch(orbit19):
    with pytest.raises(DomainError):
        willems_check(orbit19, 4, [1, 2, 4])


def test_matrix_csv():
    assert matrix_to_csv([[1, Fraction(1, 2)], [-3, 0]]) == "1,1/2\n-3,0\n"
