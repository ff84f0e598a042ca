"""Builders for test tensors.

Planted rank-one tensors, the sparse Gaussian noise model, uniform sphere
samples and the symmetric 4-tensor behind the TVCA2 objective
``sum_t (x^T A_t x)^2``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .tensor import (
    DEFAULT_DENSE_BUDGET,
    BudgetExceededError,
    RankOnePlusNoise,
    SymTensorDense,
    SymTensorSparse,
    beta_hat,
)


@dataclass(frozen=True)
class NoiseGenSpec:
    """Parameters of the sparse noise generator.

    ``nnz_draws`` index tuples are drawn uniformly from all ``n**m`` tuples,
    filled with standard normals, and the result is rescaled so that its
    entrywise bound equals ``beta_hat_target``.
    """

    n: int
    m: int
    nnz_draws: int = 500
    beta_hat_target: float = 0.03
    seed: int | None = None

    def __post_init__(self):
        if self.nnz_draws < 1:
            raise ValueError("nnz_draws must be >= 1")
        if not self.beta_hat_target > 0:
            raise ValueError("beta_hat_target must be positive")
        if self.n < 1 or self.m < 2:
            raise ValueError("need n >= 1 and m >= 2")


def make_rank_one(lam: float, a, m: int) -> RankOnePlusNoise:
    """``lam * a^{(x)m}`` with ``a`` normalized and empty noise."""
    a = np.asarray(a, dtype=float).reshape(-1)
    nrm = np.linalg.norm(a)
    if nrm == 0:
        raise ValueError("a must be nonzero")
    return RankOnePlusNoise(lam, a / nrm, SymTensorSparse.empty(m, a.shape[0]))


def gen_sparse_noise(spec: NoiseGenSpec) -> SymTensorSparse:
    rng = np.random.default_rng(spec.seed)
    draws = rng.integers(0, spec.n, size=(spec.nnz_draws, spec.m))
    values = rng.standard_normal(spec.nnz_draws)
    draws.sort(axis=1)
    # Two draws in the same permutation orbit: the first one wins.
    _, first = np.unique(draws, axis=0, return_index=True)
    first.sort()
    raw = SymTensorSparse(spec.m, spec.n, draws[first], values[first])
    scale = spec.beta_hat_target / beta_hat(raw)
    return raw * scale


def sample_sphere(n: int, seed=None) -> np.ndarray:
    """Uniform draw from the unit sphere in ``R^n`` (normalized isotropic Gaussian).

    ``seed`` may be an int, ``None`` or a ``numpy.random.Generator``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    while True:
        x = rng.standard_normal(n)
        nrm = np.linalg.norm(x)
        if nrm > 0:
            return x / nrm


def planted_model(n: int, m: int, lam: float = 1.0, nnz_draws: int = 500,
                  beta_hat_target: float = 0.03, seed=None, a=None) -> RankOnePlusNoise:
    """``lam * a^{(x)m} + E`` with sparse noise ``E``; ``a`` defaults to ``e_1``.

    ``beta_hat_target = 0`` gives a noiseless tensor.
    """
    if a is None:
        a = np.zeros(n)
        a[0] = 1.0
    base = make_rank_one(lam, a, m)
    if beta_hat_target == 0:
        return base
    noise = gen_sparse_noise(NoiseGenSpec(n, m, nnz_draws, beta_hat_target, seed))
    return RankOnePlusNoise(base.lam, base.a, noise)


def build_tvca2(matrices, budget: int = DEFAULT_DENSE_BUDGET) -> SymTensorDense:
    """Symmetric 4-tensor ``A`` with ``A x^4 = sum_t (x^T A_t x)^2``.

    Built by averaging ``sum_t A_t (x) A_t`` over all 24 index permutations.
    """
    mats = [np.asarray(a, dtype=float) for a in matrices]
    if not mats:
        raise ValueError("need at least one matrix")
    n = mats[0].shape[0]
    for a in mats:
        if a.shape != (n, n):
            raise ValueError("matrices must all be square with equal dimensions")
        if np.max(np.abs(a - a.T)) > 1e-12:
            raise ValueError("input matrices must be symmetric")
    if n**4 > budget:
        raise BudgetExceededError(f"dense 4-tensor would have {n**4} entries (budget {budget})")
    stack = np.stack(mats)
    raw = np.einsum("tij,tkl->ijkl", stack, stack)
    perms = list(itertools.permutations(range(4)))
    sym = sum(raw.transpose(p) for p in perms) / len(perms)
    return SymTensorDense(sym)
