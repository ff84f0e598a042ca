import itertools

import numpy as np
import pytest

from symrank1.tensor import SymTensorDense, SymTensorSparse


def random_dense(n, m, rng):
    arr = rng.standard_normal((n,) * m)
    perms = list(itertools.permutations(range(m)))
    return SymTensorDense(sum(arr.transpose(p) for p in perms) / len(perms))


def random_sparse(n, m, k, rng):
    terms = {}
    while len(terms) < min(k, len(list(itertools.combinations_with_replacement(range(n), m)))):
        idx = tuple(sorted(rng.integers(0, n, size=m).tolist()))
        terms.setdefault(idx, float(rng.standard_normal()))
    return SymTensorSparse.from_terms(m, n, terms.items())


def random_unit(n, rng):
    x = rng.standard_normal(n)
    return x / np.linalg.norm(x)


def rel_err(got, want):
    got, want = np.asarray(got, dtype=float), np.asarray(want, dtype=float)
    return float(np.max(np.abs(got - want)) / max(1.0, float(np.max(np.abs(want)))))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
