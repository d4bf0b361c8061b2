"""Shared helpers: random cones and brute-force oracles."""

import itertools
from fractions import Fraction
from random import Random

import pytest
from hypothesis import strategies as st

from unicover.exactmath import integer_determinant
from unicover.geom import SimplicialCone


def random_simplicial(rng: Random, d: int, max_entry: int, max_mult=None, nonneg=False):
    lo = 0 if nonneg else -max_entry
    while True:
        gens = [tuple(rng.randint(lo, max_entry) for _ in range(d)) for _ in range(d)]
        det = integer_determinant(gens)
        if det == 0:
            continue
        c = SimplicialCone(gens)
        if max_mult is None or c.multiplicity <= max_mult:
            return c


def brute_hilbert_2d(c: SimplicialCone):
    """Irreducibles of a 2D cone by exhaustive search in a bounding box.

    Every Hilbert basis element lies in the closed parallelogram spanned
    by the generators, so its box bounds the search.
    """
    g1, g2 = c.generators
    corners = [(0, 0), g1, g2, (g1[0] + g2[0], g1[1] + g2[1])]
    xs = [p[0] for p in corners]
    ys = [p[1] for p in corners]
    pts = [
        (x, y)
        for x in range(min(xs), max(xs) + 1)
        for y in range(min(ys), max(ys) + 1)
        if (x, y) != (0, 0) and c.contains((x, y))
    ]
    ptset = set(pts)
    out = []
    for p in pts:
        # p reducible iff p = a + b with a, b nonzero in the cone; a ranges over pts
        if not any((p[0] - a[0], p[1] - a[1]) in ptset for a in pts if a != p):
            out.append(p)
    return sorted(out)


def rational_points(rng: Random, n: int, dim: int, lo=-5, hi=5, den=7):
    return [tuple(Fraction(rng.randint(lo * den, hi * den), den) for _ in range(dim)) for _ in range(n)]


small_ints = st.integers(min_value=-9, max_value=9)


def int_matrix(n, m=None):
    return st.lists(st.lists(small_ints, min_size=m or n, max_size=m or n), min_size=n, max_size=n)


@pytest.fixture
def rng():
    return Random(20240611)


ACCEPTANCE = {}


def record_criterion(number: int, ok: bool, detail: str, elapsed: float):
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  ({elapsed:.1f}s)  {detail}"
    ACCEPTANCE[number] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
