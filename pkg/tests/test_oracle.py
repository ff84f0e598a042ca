import numpy as np
import pytest

from conftest import random_dense, random_sparse, random_unit, rel_err
from symrank1 import bounds
from symrank1.models import make_rank_one, planted_model
from symrank1.oracle import (
    fd_gradient,
    fd_hessian,
    grid_search_principal,
    grid_value_error,
    homogeneous_value,
    naive_contract,
    sphere_grid,
)
from symrank1.sshopm import SshopmConfig, sshopm_solve
from symrank1.tensor import SymTensorDense, beta_hat, contract, densify, gradient, hessian


def test_naive_contract_zero():
    t = SymTensorDense.zeros(3, 3)
    assert naive_contract(t, np.ones(3), 0) == 0.0
    assert np.all(naive_contract(t, np.ones(3), 2) == 0)


def test_naive_contract_matrix(rng):
    a = rng.standard_normal((4, 4))
    a = a + a.T
    x = rng.standard_normal(4)
    t = SymTensorDense(a)
    assert naive_contract(t, x, 0) == pytest.approx(x @ a @ x, rel=1e-13)
    assert np.allclose(naive_contract(t, x, 1), a @ x, rtol=1e-13)
    assert np.array_equal(naive_contract(t, x, 2), a)


def test_naive_contract_rejects_sparse(rng):
    with pytest.raises(TypeError):
        naive_contract(random_sparse(3, 3, 2, rng), np.ones(3), 0)


def test_naive_agrees_with_contract(rng):
    for _ in range(200):
        n, m, r = int(rng.integers(1, 5)), int(rng.integers(2, 5)), int(rng.integers(0, 3))
        r = min(r, m)
        t = random_sparse(n, m, int(rng.integers(1, 6)), rng)
        x = rng.standard_normal(n)
        assert rel_err(contract(t, x, r), naive_contract(densify(t), x, r)) <= 1e-12


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_sphere_grid_unit_points(n):
    pts = sphere_grid(n, 0.1)
    assert np.allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-12)


def test_sphere_grid_covers(rng):
    pts = sphere_grid(3, 0.05)
    for _ in range(100):
        x = random_unit(3, rng)
        assert np.arccos(min(1.0, np.max(pts @ x))) <= 0.05
    pts4 = sphere_grid(4, 0.1)
    for _ in range(50):
        x = random_unit(4, rng)
        assert np.arccos(min(1.0, np.max(pts4 @ x))) <= 0.1


def test_grid_search_rank_one(rng):
    a = random_unit(3, rng)
    t = make_rank_one(2.0, a, 4)
    res = grid_search_principal(t, 0.02)
    assert res.best_value <= 2.0 + 1e-12
    assert res.best_value >= 2.0 - grid_value_error(t, 0.02)
    assert np.arccos(min(1.0, abs(res.best_x @ a))) <= 0.02
    assert res.best_value == pytest.approx(homogeneous_value(t, res.best_x))


def test_grid_search_n4(rng):
    a = random_unit(4, rng)
    t = make_rank_one(1.0, a, 3)
    res = grid_search_principal(t, 0.05)
    assert abs(res.best_value) >= 1.0 - grid_value_error(t, 0.05)


def test_grid_search_planted_n3():
    t = planted_model(3, 4, nnz_draws=10, beta_hat_target=0.03, seed=4)
    b = bounds.thm1_bounds(bounds.NoiseModelParams(1.0, 4, 3, beta_hat(t.noise)))
    res = grid_search_principal(t, 0.02)
    assert b.lambda_lo - grid_value_error(t, 0.02) <= abs(res.best_value) <= b.lambda_hi


def test_grid_search_agrees_with_multistart(rng):
    for _ in range(3):
        t = random_dense(3, 4, rng)
        res = grid_search_principal(t, 0.02)
        err = grid_value_error(t, 0.02)
        best = 0.0
        alpha = beta_hat(t) + 0.1
        for sign in (1.0, -1.0):
            for s in range(8):
                pair, trace = sshopm_solve(sign * t, None, SshopmConfig(alpha=alpha, seed=s, max_iters=20000))
                if trace.converged:
                    best = max(best, abs(pair.lam))
        assert abs(abs(res.best_value) - best) <= 2 * err


def test_grid_search_too_large():
    with pytest.raises(ValueError):
        grid_search_principal(make_rank_one(1.0, np.ones(5), 3))


def test_fd_exact_for_quadratic(rng):
    a = rng.standard_normal((3, 3))
    t = SymTensorDense(a + a.T)
    x = rng.standard_normal(3)
    assert np.allclose(fd_gradient(t, x), 2 * (a + a.T) @ x, atol=1e-9)
    assert np.allclose(fd_hessian(t, x), 2 * (a + a.T), atol=1e-6)


def test_fd_m3_gradient_and_m4_hessian(rng):
    t3 = random_dense(4, 3, rng)
    t4 = random_dense(4, 4, rng)
    x = random_unit(4, rng)
    assert np.max(np.abs(fd_gradient(t3, x) - gradient(t3, x))) <= 1e-6
    assert np.max(np.abs(fd_hessian(t4, x) - hessian(t4, x))) <= 1e-4


def test_fd_step_validation(rng):
    t = random_dense(2, 3, rng)
    with pytest.raises(ValueError):
        fd_gradient(t, np.ones(2), 0.0)
    with pytest.raises(ValueError):
        fd_hessian(t, np.ones(2), -1.0)
