"""Acceptance suite: one test per criterion, each reported as PASS/FAIL.

Run with ``pytest tests/test_acceptance.py -v``; the summary section at the
end lists every criterion. Exhaustive sweeps take a few minutes in total.
"""
import csv
import io
import random
from fractions import Fraction
from math import gcd

import pytest

from koopcrypt.cli import main
from koopcrypt.dynsys import simulate
from koopcrypt.edmd import build_hankel, edmd_fit, minimal_dimension, willems_check
from koopcrypt.exact import rank_exact
from koopcrypt.lifting import invert_unit_circle, lift_unit_circle
from koopcrypt.lincomp import compare_complexity
from koopcrypt.numtheory import carmichael, euler_totient, generalized_euler
from koopcrypt.spectral import (
    Parity,
    check_dimension,
    eigensystem,
    dh_companion,
    recover_exponent,
    recover_rsa_key,
    rsa_companion,
)

from conftest import oracle_generators, oracle_is_prime, oracle_order, oracle_squares

PRIMES_199 = [p for p in range(3, 200) if oracle_is_prime(p)]


def dh_alpha(q):
    return [1, -1] + [0] * (q - 2) + [1]


@pytest.mark.criterion(1, "DH minimal dimension, 5 <= p <= 199, all generators")
def test_dh_minimal_dimension():
    failures = []
    for p in PRIMES_199:
        if p < 5:
            continue
        q = (p - 1) // 2
        for m in oracle_generators(p):
            below = check_dimension(p, m, q - 1)
            at = check_dimension(p, m, q)
            if below.feasible or not at.feasible or list(at.alpha) != dh_alpha(q):
                failures.append((p, m))
    assert failures == []


@pytest.mark.criterion(2, "exponent recovery, p <= 199, all generators, all e")
def test_exhaustive_recovery():
    failures = []
    cells = 0
    for p in PRIMES_199:
        check_parity = p > 3 and eigensystem(dh_companion(p)).has_minus_one
        for m in oracle_generators(p):
            for e in range(1, p - 1):
                res = recover_exponent(p, m, pow(m, e, p))
                cells += 1
                if res.exponent != e:
                    failures.append((p, m, e, res.exponent))
                if check_parity:
                    if res.parity is not (Parity.ODD if e % 2 else Parity.EVEN):
                        failures.append((p, m, e, res.parity))
    assert cells > 200_000
    assert failures == []


def _bench_rows(capsys, *argv):
    code = main(["bench", *argv])
    out = capsys.readouterr().out
    return code, list(csv.DictReader(io.StringIO(out)))


@pytest.mark.criterion(3, "bench: p=97 worst < 6 s, p=997 passes the guard")
def test_bench_table(capsys):
    code, rows = _bench_rows(capsys, "--primes", "97", "--sample", "all")
    assert code == 0 and len(rows) == 1
    assert rows[0]["p"] == "97" and int(rows[0]["generators"]) == 32
    assert float(rows[0]["worst_s"]) < 6.0
    small = rows[0]
    code, rows = _bench_rows(capsys, "--primes", "997", "--sample", "20")
    assert code == 0 and len(rows) == 1 and rows[0]["p"] == "997"
    with capsys.disabled():
        for row in (small, rows[0]):
            print(f"\n  bench p={row['p']}: worst {row['worst_s']} s, average {row['avg_s']} s", end="")


@pytest.mark.criterion(4, "RSA upper bound and tightness for p = 15")
def test_rsa_dimensions():
    cs = rsa_companion(3, 5)
    assert cs.q == 3 and list(cs.alpha) == [1, 0, 0, 0]
    q, _ = minimal_dimension(simulate((15, 2)))
    assert q == 3
    q, cs = minimal_dimension(simulate((15, 4)))
    assert q == 1 and list(cs.alpha) == [1, 0]


@pytest.mark.criterion(5, "RSA key recovery, p1 != p2 in {3,5,7,11,13}, all d")
def test_rsa_key_recovery():
    primes = [3, 5, 7, 11, 13]
    failures = []
    cases = 0
    for p1 in primes:
        for p2 in primes:
            if p1 == p2:
                continue
            n, phi = p1 * p2, euler_totient(p1 * p2)
            for d in range(1, phi):
                if gcd(d, phi) != 1:
                    continue
                e = pow(d, -1, phi)
                res = recover_rsa_key(p1, p2, e)
                cases += 1
                zeta = res.residue_class_modulus
                ok = (
                    carmichael(n) % zeta == 0
                    and (res.exponent - d) % zeta == 0
                    and len(res.probes) == 2
                    and res.probes[0]["message"] != res.probes[1]["message"]
                    and all(pow(pr["ciphertext"], res.exponent, n) == pr["message"] for pr in res.probes)
                )
                if not ok:
                    failures.append((p1, p2, d, res.exponent, zeta))
    assert cases > 0 and failures == []


@pytest.mark.criterion(6, "EDMD returns the analytic alpha, p <= 97, all generators")
def test_edmd_exactness():
    failures = []
    for p in PRIMES_199:
        if p < 5 or p > 97:
            continue
        q = (p - 1) // 2
        for m in oracle_generators(p):
            hd = build_hankel(simulate((p, m)), q, q + 1)
            if rank_exact(hd.Z) != q + 1:
                failures.append((p, m, "rank"))
                continue
            alpha = edmd_fit(hd).alpha
            if alpha != tuple(Fraction(a) for a in dh_alpha(q)):
                failures.append((p, m, alpha))
    assert failures == []


@pytest.mark.criterion(7, "generalized Euler criterion, odd primes < 50")
def test_generalized_euler():
    primes = [p for p in range(3, 50) if oracle_is_prime(p)]
    failures = []
    for i, p1 in enumerate(primes):
        squares = oracle_squares(p1)
        for m in range(1, p1):
            if generalized_euler(m, p1) != (1 if m in squares else -1):
                failures.append((m, p1, 1))
        for p2 in primes[i + 1 :]:
            n = p1 * p2
            half = (p1 - 1) * (p2 - 1) // 2
            for m in range(1, n):
                if gcd(m, n) != 1:
                    continue
                if pow(m, half, n) != 1 or generalized_euler(m, p1, p2) != 1:
                    failures.append((m, p1, p2))
    assert failures == []


@pytest.mark.criterion(8, "unit-circle lift round trips, p in {5, 19, 97}")
def test_lifting_round_trips():
    failures = []
    for p in (5, 19, 97):
        for m in oracle_generators(p):
            for x in range(1, p):
                full = lift_unit_circle(x, m, p, p - 2)
                # component j of a lift does not depend on q: each shorter lift is a prefix
                for q in range(p - 1):
                    lift = lift_unit_circle(x, m, p, q)
                    if lift.numerators != full.numerators[: q + 1]:
                        failures.append((p, m, x, q))
                    if p < 97:
                        failures += [(p, m, x, q, j) for j in range(q + 1)
                                     if invert_unit_circle(lift, j) != x]
                failures += [(p, m, x, j) for j in range(p - 1) if invert_unit_circle(full, j) != x]
    assert failures == []


@pytest.mark.criterion(9, "linear complexity golden examples")
def test_lincomp_goldens():
    rows = {
        "counter": compare_complexity([0, 1, 2, 0, 1, 2, 0, 1, 2]),
        "ramp": compare_complexity([0, 2, 4, 6, 8, 10, 12]),
        "affine": compare_complexity([1, 4, 10, 22, 46, 94]),
    }
    assert [rows[k].lfsr_length for k in ("counter", "ramp", "affine")] == [3, 2, 2]
    assert [rows[k].reduced_dimension for k in ("counter", "ramp", "affine")] == [1, 1, 2]
    squaring = compare_complexity([2, 4, 16, 256, 65536])
    assert squaring.lfsr is None
    assert squaring.reduced.family == "log_affine" and squaring.reduced_dimension == 1


@pytest.mark.criterion(10, "Willems consistency for p = 19, m = 2")
def test_willems_consistency():
    traj = simulate((19, 2))
    period = traj.one_period()
    rng = random.Random(19)
    for r in range(18):
        window = period[r:] + period[:r]
        assert willems_check(traj, 18, window)
        for _ in range(5):
            bad = list(window)
            i = rng.randrange(18)
            bad[i] = (bad[i] + rng.randrange(1, 19)) % 19 or 19
            assert bad != window
            assert not willems_check(traj, 18, bad)
    assert oracle_order(2, 19) == 18
