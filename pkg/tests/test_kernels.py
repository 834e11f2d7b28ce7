import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cylsimplex import kernels
from cylsimplex.enclosing import projection_radius
from cylsimplex.kernels import available_backends, batch_projection_radii, get_backend, support_subsets

from _util import random_unit

BACKENDS = available_backends()


def test_python_backend_always_available():
    assert "python" in BACKENDS
    assert kernels.BACKEND in BACKENDS


def test_unknown_backend():
    with pytest.raises(ValueError):
        get_backend("fortran")


def test_support_subsets_shape():
    S = support_subsets(4, 3)
    # pairs and triples of 4 points
    assert S.shape == (6 + 4, 3)
    assert not S.flags.writeable
    assert np.all((S[:6, 2] == -1))


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_kernel_matches_welzl(backend, n):
    rng = np.random.default_rng(n)
    X = rng.standard_normal((n + 1, n))
    V = random_unit(n, rng, 200)
    got = batch_projection_radii(X, V, backend=backend)
    want = np.array([projection_radius(X, v) for v in V])
    np.testing.assert_allclose(got, want, rtol=1e-9, atol=1e-12)


@pytest.mark.skipif("cython" not in BACKENDS, reason="compiled extension not built")
def test_backends_agree():
    rng = np.random.default_rng(7)
    for n in (3, 4):
        X = rng.standard_normal((n + 1, n))
        V = random_unit(n, rng, 5000)
        a = batch_projection_radii(X, V, backend="python")
        b = batch_projection_radii(X, V, backend="cython")
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-14)


@pytest.mark.parametrize("backend", BACKENDS)
def test_kernel_degenerate_projection(backend):
    # two points coincide after projection along their difference
    X = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1.0]])
    r = batch_projection_radii(X, np.array([[1.0, 0, 0]]), backend=backend)[0]
    assert r == pytest.approx(np.sqrt(2) / 2, abs=1e-14)


def test_env_override_selects_fallback():
    env = dict(os.environ, CYLSIMPLEX_BACKEND="python")
    out = subprocess.run([sys.executable, "-c", "import cylsimplex.kernels as k; print(k.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_env_override_rejects_unknown():
    env = dict(os.environ, CYLSIMPLEX_BACKEND="gpu")
    out = subprocess.run([sys.executable, "-c", "import cylsimplex.kernels"], env=env, capture_output=True, text=True)
    assert out.returncode != 0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_kernel_invariant_under_translation_and_sign(seed):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((4, 3))
    V = random_unit(3, rng, 20)
    a = batch_projection_radii(X, V)
    b = batch_projection_radii(X + rng.standard_normal(3), -V)
    np.testing.assert_allclose(a, b, rtol=1e-9, atol=1e-12)
