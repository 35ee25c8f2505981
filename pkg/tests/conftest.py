"""Brute-force oracles shared by the test modules.

Each oracle is deliberately naive and independent of the library code.
"""
from fractions import Fraction
from functools import lru_cache
from math import gcd

import pytest


def oracle_is_prime(n):
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


def oracle_units(n):
    return [a for a in range(1, n) if gcd(a, n) == 1]


def oracle_order(m, n):
    x, k = m % n, 1
    while x != 1:
        x, k = x * m % n, k + 1
    return k


def oracle_carmichael(n):
    if n <= 2:
        return 1
    units = oracle_units(n)
    ell = 1
    while any(pow(a, ell, n) != 1 for a in units):
        ell += 1
    return ell


@lru_cache(maxsize=None)
def oracle_generators(p):
    return tuple(m for m in range(1, p) if len({pow(m, k, p) for k in range(p - 1)}) == p - 1)


def oracle_squares(p):
    return {x * x % p for x in range(1, p)}


def oracle_dlog(m, c, p):
    """Smallest e >= 0 with m**e == c (mod p)."""
    x = 1
    for e in range(p):
        if x == c % p:
            return e
        x = x * m % p
    return None


def oracle_rank(rows):
    """Rank over Q by Fraction Gaussian elimination."""
    M = [[Fraction(v) for v in r] for r in rows]
    rank, cols = 0, len(M[0]) if M else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for i in range(rank + 1, len(M)):
            f = M[i][c] / M[rank][c]
            M[i] = [a - f * b for a, b in zip(M[i], M[rank])]
        rank += 1
    return rank


def oracle_min_recurrence(seq):
    """Shortest L with a rational recurrence of length L consistent with seq.

    Tries L = 0, 1, ... and solves the over-determined system exactly.
    """
    n = len(seq)
    for L in range(n + 1):
        rows = [list(seq[k - L : k]) + [seq[k]] for k in range(L, n)]
        if not rows:
            return L
        A = [r[:-1] for r in rows]
        if L == 0:
            if all(r[-1] == 0 for r in rows):
                return 0
            continue
        if oracle_rank(A) == oracle_rank(rows):
            return L
    return n


SMALL_PRIMES = [p for p in range(5, 60) if oracle_is_prime(p)]


@pytest.fixture
def orbit19():
    from koopcrypt import simulate

    return simulate((19, 2))


# -- acceptance reporting ------------------------------------------------------

_CRITERIA: dict[int, tuple[str, str, float]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when != "call":
        return
    number, title = marker.args
    verdict = "PASS" if rep.passed else "FAIL"
    _CRITERIA[number] = (verdict, title, rep.duration)
    print(f"\n[acceptance] criterion {number:2d}: {verdict}  {title} ({rep.duration:.1f} s)")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        verdict, title, duration = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d}: {verdict}  {title} ({duration:.1f} s)")
