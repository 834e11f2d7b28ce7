from itertools import permutations

import numpy as np
import pytest

from cylsimplex.errors import DimensionTooLarge
from cylsimplex.weissbach import (enumerate_solutions, lambda2_zero_census, multipliers, system_residual,
                                  verify_listed_tuples)


@pytest.mark.parametrize("n,total,zero,nonzero", [(3, 26, 18, 8), (4, 80, 50, 30)])
def test_totals(n, total, zero, nonzero):
    c = enumerate_solutions(n)
    fam = c.family_counts()
    assert c.total == total
    assert (fam["lambda2_zero"], fam["lambda2_nonzero"]) == (zero, nonzero)
    assert c.all_real
    assert len(c.solutions) == total


def test_lambda2_zero_closed_form():
    assert lambda2_zero_census(3) == 18
    assert lambda2_zero_census(4) == 50
    assert lambda2_zero_census(2) == 6
    for n in range(2, 10):
        assert enumerate_solutions(n).family_counts()["lambda2_zero"] == lambda2_zero_census(n)


def test_lambda2_zero_components():
    for n in (3, 4, 5):
        for sol in enumerate_solutions(n).solutions:
            if sol.family != "lambda2_zero":
                continue
            nz = np.abs(sol.u[np.abs(sol.u) > 1e-12])
            h = len(nz) // 2
            np.testing.assert_allclose(nz, (2 * h) ** -0.5, rtol=1e-12)


def test_solution_invariants():
    for n in range(2, 8):
        for sol in enumerate_solutions(n).solutions:
            assert sol.residual < 1e-10
            assert abs(sol.u.sum()) < 1e-10
            assert abs(sol.u @ sol.u - 1) < 1e-10
            # every component is a root of the common cubic
            assert np.abs(4 * sol.u**3 + 2 * sol.lambda1 * sol.u + sol.lambda2).max() < 1e-10


def test_permutation_closure():
    for n in (3, 4):
        sols = enumerate_solutions(n).solutions
        keys = {tuple(np.round(s.u, 10)) for s in sols}
        assert len(keys) == len(sols)
        for s in sols:
            for p in permutations(range(n + 1)):
                assert tuple(np.round(s.u[list(p)], 10)) in keys


def test_listed_tuples():
    for n in (3, 4):
        rep = verify_listed_tuples(n)
        assert rep["max_residual"] < 1e-12
    rep3 = verify_listed_tuples(3)
    assert rep3["tuples"][0]["lambda1"] == pytest.approx(-7 / 6)
    assert rep3["tuples"][0]["lambda2"] == pytest.approx(1 / np.sqrt(3))
    rep4 = verify_listed_tuples(4)
    first = rep4["tuples"][0]
    assert first["lambda2"] == pytest.approx(-2 / 75 * np.sqrt(30))
    assert rep4["tuples"][1]["lambda2"] == pytest.approx(2 / 75 * np.sqrt(30))


def test_listed_tuples_are_enumerated():
    keys = {tuple(np.round(s.u, 10)) for s in enumerate_solutions(3).solutions}
    u = np.array([1, -3, 1, 1]) / (2 * np.sqrt(3))
    assert tuple(np.round(u, 10)) in keys


def test_multipliers_and_residual():
    a = 1 / np.sqrt(2)
    l1, l2 = multipliers([a, -a])
    assert l2 == pytest.approx(0.0, abs=1e-15)
    assert system_residual(np.array([a, -a, 0, 0]), l1, l2) < 1e-15
    with pytest.raises(ValueError):
        multipliers([0.5])


def test_positive_dimensional_shapes_flagged():
    assert enumerate_solutions(2).positive_dimensional_shapes == [(1, 1, 1)]
    assert enumerate_solutions(5).positive_dimensional_shapes == [(2, 2, 2)]
    assert enumerate_solutions(3).positive_dimensional_shapes == []


def test_dimension_range():
    with pytest.raises(DimensionTooLarge):
        enumerate_solutions(10)
