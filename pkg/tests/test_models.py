import itertools

import numpy as np
import pytest

from conftest import random_unit
from symrank1.models import (
    NoiseGenSpec,
    build_tvca2,
    gen_sparse_noise,
    make_rank_one,
    planted_model,
    sample_sphere,
)
from symrank1.sshopm import SshopmConfig, sshopm_solve
from symrank1.tensor import BudgetExceededError, beta_hat, contract, densify, rayleigh


def test_make_rank_one_normalizes():
    t = make_rank_one(3.0, [2.0, 0.0, 0.0], 4)
    assert np.array_equal(t.a, [1.0, 0.0, 0.0])
    assert t.lam == 3.0
    assert t.noise.nnz == 0
    assert contract(make_rank_one(1.0, [1, 0, 0], 4), [1.0, 0, 0], 0) == 1.0


def test_make_rank_one_rejects_zero():
    with pytest.raises(ValueError):
        make_rank_one(1.0, [0.0, 0.0], 3)


def test_make_rank_one_rayleigh(rng):
    a = rng.standard_normal(6)
    t = make_rank_one(0.7, a, 5)
    x = random_unit(6, rng)
    assert rayleigh(t, x) == pytest.approx(0.7 * (t.a @ x) ** 5, rel=1e-12, abs=1e-15)


@pytest.mark.parametrize("n,m,draws,target", [(100, 4, 500, 0.03), (5, 3, 20, 1.0), (3, 4, 10, 0.1)])
def test_noise_hits_beta_hat_target(n, m, draws, target):
    t = gen_sparse_noise(NoiseGenSpec(n, m, draws, target, seed=7))
    assert beta_hat(t) == pytest.approx(target, rel=1e-12)
    assert 1 <= t.nnz <= draws
    assert np.all(np.diff(t.indices, axis=1) >= 0)


def test_noise_is_deterministic():
    spec = NoiseGenSpec(50, 4, 300, 0.03, seed=11)
    t1, t2 = gen_sparse_noise(spec), gen_sparse_noise(spec)
    assert np.array_equal(t1.indices, t2.indices)
    assert np.array_equal(t1.values, t2.values)


def test_noise_densifies_symmetric():
    d = densify(gen_sparse_noise(NoiseGenSpec(4, 4, 30, 0.5, seed=3))).entries
    for p in itertools.permutations(range(4)):
        assert np.array_equal(d, d.transpose(p))


def test_noise_collisions_keep_first():
    # n=1 makes every draw land in the same orbit
    t = gen_sparse_noise(NoiseGenSpec(1, 3, 5, 2.0, seed=0))
    assert t.nnz == 1
    first = np.random.default_rng(0)
    first.integers(0, 1, size=(5, 3))
    assert np.sign(t.values[0]) == np.sign(first.standard_normal(5)[0])


def test_noise_spec_validation():
    with pytest.raises(ValueError):
        NoiseGenSpec(10, 4, 0, 0.03)
    with pytest.raises(ValueError):
        NoiseGenSpec(10, 4, 10, 0.0)


def test_planted_model_noiseless():
    t = planted_model(10, 4, beta_hat_target=0)
    assert t.noise.nnz == 0 and t.a[0] == 1.0


def test_sample_sphere_unit(rng):
    for n in (1, 2, 10, 100):
        assert abs(np.linalg.norm(sample_sphere(n, rng)) - 1) <= 1e-12


def test_sample_sphere_moments():
    rng = np.random.default_rng(0)
    n, draws = 100, 100_000
    dots = np.array([sample_sphere(n, rng)[0] for _ in range(draws)])
    sigma = np.sqrt(1 / n / draws)
    assert abs(dots.mean()) <= 3 * sigma
    assert abs(dots.var() - 1 / n) <= 0.1 / n


def test_tvca2_identity_matrix():
    t = build_tvca2([np.eye(2)])
    for theta in np.linspace(0, np.pi, 7):
        x = np.array([np.cos(theta), np.sin(theta)])
        assert rayleigh(t, x) == pytest.approx(1.0, rel=1e-12)


def test_tvca2_polynomial_identity(rng):
    mats = [rng.standard_normal((3, 3)) for _ in range(3)]
    mats = [a + a.T for a in mats]
    t = build_tvca2(mats)
    for _ in range(100):
        x = rng.standard_normal(3)
        want = sum((x @ a @ x) ** 2 for a in mats)
        assert contract(t, x, 0) == pytest.approx(want, rel=1e-10)


def test_tvca2_rank_one_case():
    e1 = np.array([1.0, 0.0, 0.0])
    t = build_tvca2([np.outer(e1, e1)])
    want = np.zeros((3,) * 4)
    want[0, 0, 0, 0] = 1.0
    assert np.array_equal(t.entries, want)
    pair, trace = sshopm_solve(t, None, SshopmConfig(alpha=0.0, seed=1))
    assert trace.converged
    assert pair.lam == pytest.approx(1.0, abs=1e-10)
    assert abs(pair.x[0]) == pytest.approx(1.0, abs=1e-8)


def test_tvca2_rejects_bad_input(rng):
    with pytest.raises(ValueError):
        build_tvca2([np.array([[1.0, 2.0], [0.0, 1.0]])])
    with pytest.raises(BudgetExceededError):
        build_tvca2([np.eye(60)], budget=10**6)
