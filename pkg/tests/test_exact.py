"""Hand-written exact linear algebra against sympy."""

from fractions import Fraction

import numpy as np
import pytest
import sympy

from blockopt import _exact


def _rand(rng, n, lo=-6, hi=7):
    return [[int(x) for x in row] for row in rng.integers(lo, hi, size=(n, n))]


def test_bareiss_det():
    rng = np.random.default_rng(81)
    for _ in range(100):
        n = int(rng.integers(1, 8))
        a = _rand(rng, n)
        assert _exact.bareiss_det(a) == int(sympy.Matrix(a).det())
    assert _exact.bareiss_det([[0, 1], [1, 0]]) == -1
    assert _exact.bareiss_det([[1, 2], [2, 4]]) == 0


def test_solve_and_inverse():
    rng = np.random.default_rng(82)
    done = 0
    while done < 60:
        n = int(rng.integers(1, 7))
        a = _rand(rng, n)
        if sympy.Matrix(a).det() == 0:
            continue
        b = [int(x) for x in rng.integers(-5, 6, size=n)]
        ref = sympy.Matrix(a).LUsolve(sympy.Matrix(b))
        got = _exact.solve(a, b)
        assert got == [Fraction(int(x.p), int(x.q)) for x in ref]
        frac_b = [Fraction(x, 3) for x in b]
        assert _exact.solve(a, frac_b) == [x / 3 for x in got]
        inv = _exact.inverse(a)
        ref_inv = sympy.Matrix(a).inv()
        assert all(inv[i][j] == Fraction(int(ref_inv[i, j].p), int(ref_inv[i, j].q))
                   for i in range(n) for j in range(n))
        done += 1


def test_singular_and_rank():
    with pytest.raises(ZeroDivisionError):
        _exact.solve([[1, 2], [2, 4]], [1, 1])
    with pytest.raises(ZeroDivisionError):
        _exact.solve([[1, 2], [2, 4]], [Fraction(1), 1])
    rng = np.random.default_rng(83)
    for _ in range(40):
        m = rng.integers(-2, 3, size=(int(rng.integers(1, 6)), int(rng.integers(1, 6))))
        assert _exact.rank(m.tolist()) == sympy.Matrix(m.tolist()).rank()
