import numpy as np
import pytest

from cylsimplex.algebra import companion, resultant_in_x, roots, sylvester, trim


def test_roots_of_product():
    # (x - 1)(x - 2)(x - 3), ascending coefficients
    r = np.sort(roots([-6, 11, -6, 1]).real)
    np.testing.assert_allclose(r, [1, 2, 3], atol=1e-13)


def test_complex_roots():
    r = roots([1, 0, 1])
    np.testing.assert_allclose(np.sort_complex(r), [-1j, 1j], atol=1e-14)


def test_trim_and_companion():
    assert len(trim([1.0, 2.0, 1e-20])) == 2
    C = companion([2.0, -3.0, 1.0])
    np.testing.assert_allclose(np.sort(np.linalg.eigvals(C).real), [1, 2], atol=1e-14)


def test_sylvester_common_root():
    # x - 1 and x^2 - 1 share x = 1
    assert abs(np.linalg.det(sylvester(np.array([-1.0, 1]), np.array([-1.0, 0, 1])))) < 1e-14
    assert abs(np.linalg.det(sylvester(np.array([-3.0, 1]), np.array([-1.0, 0, 1])))) > 1


def test_resultant_in_x_eliminates():
    # x^2 - y = 0, x - 2 = 0  ->  resultant vanishes only at y = 4
    P = lambda y: np.array([-y, 0, 1], dtype=complex)  # noqa: E731
    Q = lambda y: np.array([-2, 1, 0], dtype=complex)  # noqa: E731
    R = resultant_in_x(P, Q, 2)
    r = roots(R)
    assert len(r) == 1
    assert r[0] == pytest.approx(4.0, abs=1e-12)
