"""Symmetric tensor representations and tensor-vector contraction.

Three representations share one contraction interface:

* :class:`SymTensorDense` -- a fully materialized ``n**m`` array.
* :class:`SymTensorSparse` -- one stored value per permutation orbit, keyed by
  the sorted (canonical) index tuple.
* :class:`RankOnePlusNoise` -- ``lam * a^{(x)m} + noise`` kept in factored form.

Indices are 0-based in memory.  The text file format in :mod:`symrank1.io`
uses 1-based indices.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Union

import numpy as np

DEFAULT_DENSE_BUDGET = 10**7
UNIT_TOL = 1e-8


class DimensionError(ValueError):
    """Raised when tensor and vector dimensions (or the contraction order) disagree."""


class BudgetExceededError(ValueError):
    """Raised when a dense materialization would exceed the entry budget."""


def multinomial(counts) -> int:
    """Number of distinct orderings of a multiset with the given multiplicities."""
    out = math.factorial(sum(counts))
    for c in counts:
        out //= math.factorial(c)
    return out


def orbit_size(index) -> int:
    """Number of distinct permutations of an index tuple."""
    return multinomial(Counter(index).values())


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def _check_vector(x, n: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise DimensionError(f"expected a vector of length {n}, got shape {x.shape}")
    return x


def _check_order(r: int, m: int) -> None:
    if r not in (0, 1, 2):
        raise DimensionError(f"contraction order r must be 0, 1 or 2, got {r}")
    if r > m:
        raise DimensionError(f"r={r} exceeds mode count m={m}")


def _symmetry_defect(entries: np.ndarray) -> float:
    m = entries.ndim
    worst = 0.0
    for perm in itertools.permutations(range(m)):
        worst = max(worst, float(np.max(np.abs(entries - entries.transpose(perm)), initial=0.0)))
    return worst


@dataclass(frozen=True, eq=False)
class SymTensorDense:
    """Fully materialized symmetric tensor.

    ``entries`` has shape ``(n,) * m``.  Symmetry is verified exhaustively on
    construction when ``n**m <= 10**6`` (tolerance ``1e-12`` relative to the
    largest entry).
    """

    entries: np.ndarray
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        if entries.ndim < 2:
            raise ValueError("a symmetric tensor needs at least 2 modes")
        n = entries.shape[0]
        if n < 1 or any(s != n for s in entries.shape):
            raise ValueError(f"all dimensions must be equal, got shape {entries.shape}")
        if self.check and entries.size <= 10**6:
            scale = max(1.0, float(np.max(np.abs(entries), initial=0.0)))
            defect = _symmetry_defect(entries)
            if defect > 1e-12 * scale:
                raise ValueError(f"entries are not symmetric (max defect {defect:.3e})")
        object.__setattr__(self, "entries", _readonly(entries))

    @property
    def m(self) -> int:
        return self.entries.ndim

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def symmetrize(cls, arr) -> "SymTensorDense":
        """Average ``arr`` over all axis permutations."""
        arr = np.asarray(arr, dtype=float)
        perms = list(itertools.permutations(range(arr.ndim)))
        out = sum(arr.transpose(p) for p in perms) / len(perms)
        return cls(out)

    @classmethod
    def zeros(cls, m: int, n: int) -> "SymTensorDense":
        return cls(np.zeros((n,) * m))

    def __add__(self, other):
        if not isinstance(other, SymTensorDense):
            return NotImplemented
        _check_same_shape(self, other)
        return SymTensorDense(self.entries + other.entries, check=False)

    def __mul__(self, c):
        return SymTensorDense(float(c) * self.entries, check=False)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0


@dataclass(frozen=True, eq=False)
class _ContractionPlan:
    # Flattened contributions of every canonical term to an order-r result:
    # result[out] += coef * prod(x[rest]).
    out: np.ndarray
    coef: np.ndarray
    rest: np.ndarray


def _build_plan(indices: np.ndarray, values: np.ndarray, r: int) -> _ContractionPlan:
    m = indices.shape[1] if indices.size else 0
    outs, coefs, rests = [], [], []
    for idx, v in zip(indices.tolist(), values.tolist()):
        counts = Counter(idx)
        for free in itertools.product(sorted(counts), repeat=r):
            remaining = counts.copy()
            remaining.subtract(free)
            if any(c < 0 for c in remaining.values()):
                continue
            rest = sorted(remaining.elements())
            outs.append(free)
            coefs.append(v * multinomial(remaining.values()))
            rests.append(rest)
    k = len(coefs)
    width = m - r if m else 0
    return _ContractionPlan(
        out=_readonly(np.array(outs, dtype=np.intp).reshape(k, r)),
        coef=_readonly(np.array(coefs, dtype=float)),
        rest=_readonly(np.array(rests, dtype=np.intp).reshape(k, width)),
    )


@dataclass(frozen=True, eq=False)
class SymTensorSparse:
    """Symmetric tensor stored as canonical (sorted) index tuples and values.

    Each stored value stands for every distinct permutation of its index
    tuple.  ``indices`` is a ``(k, m)`` integer array of 0-based indices with
    non-decreasing rows and no repeated rows; ``values`` has length ``k``.

    Contraction plans for ``r = 0, 1, 2`` are built once on construction; the
    instance is immutable afterwards.
    """

    m: int
    n: int
    indices: np.ndarray
    values: np.ndarray
    _plans: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("a symmetric tensor needs at least 2 modes")
        if self.n < 1:
            raise ValueError("dimension must be positive")
        idx = np.array(self.indices, dtype=np.intp).reshape(-1, self.m)
        vals = np.array(self.values, dtype=float).reshape(-1)
        if idx.shape[0] != vals.shape[0]:
            raise ValueError("indices and values have different lengths")
        if idx.size:
            if idx.min() < 0 or idx.max() >= self.n:
                raise ValueError(f"indices must lie in [0, {self.n})")
            if np.any(np.diff(idx, axis=1) < 0):
                raise ValueError("index tuples must be sorted non-decreasing")
            if len({tuple(row) for row in idx.tolist()}) != idx.shape[0]:
                raise ValueError("duplicate canonical index tuples")
        object.__setattr__(self, "indices", _readonly(idx))
        object.__setattr__(self, "values", _readonly(vals))
        plans = {r: _build_plan(idx, vals, r) for r in (0, 1, 2) if r <= self.m}
        object.__setattr__(self, "_plans", plans)

    @classmethod
    def empty(cls, m: int, n: int) -> "SymTensorSparse":
        return cls(m, n, np.zeros((0, m), dtype=np.intp), np.zeros(0))

    @classmethod
    def from_terms(cls, m: int, n: int, terms) -> "SymTensorSparse":
        """Build from ``(index_tuple, value)`` pairs with 0-based indices.

        Tuples are canonicalized by sorting; repeated orbits raise.
        """
        terms = [(tuple(sorted(i)), float(v)) for i, v in terms]
        if not terms:
            return cls.empty(m, n)
        idx, vals = zip(*terms)
        return cls(m, n, np.array(idx, dtype=np.intp), np.array(vals))

    @property
    def nnz(self) -> int:
        return int(self.values.shape[0])

    @property
    def terms(self) -> list:
        return [(tuple(i), v) for i, v in zip(self.indices.tolist(), self.values.tolist())]

    def orbit_sizes(self) -> np.ndarray:
        return np.array([orbit_size(i) for i in self.indices.tolist()], dtype=float)

    def __add__(self, other):
        if not isinstance(other, SymTensorSparse):
            return NotImplemented
        _check_same_shape(self, other)
        merged: dict = {}
        for i, v in itertools.chain(self.terms, other.terms):
            merged[i] = merged.get(i, 0.0) + v
        return SymTensorSparse.from_terms(self.m, self.n, merged.items())

    def __mul__(self, c):
        return SymTensorSparse(self.m, self.n, self.indices, float(c) * self.values)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0


@dataclass(frozen=True, eq=False)
class RankOnePlusNoise:
    """Structured tensor ``lam * a^{(x)m} + noise`` with unit vector ``a``.

    Never materialized; contraction uses the closed form
    ``lam * (a.x)^(m-r) * a^{(x)r} + noise x^(m-r)``.
    """

    lam: float
    a: np.ndarray
    noise: SymTensorSparse

    def __post_init__(self):
        a = np.array(self.a, dtype=float).reshape(-1)
        if abs(np.linalg.norm(a) - 1.0) > 1e-12:
            raise ValueError("planted vector a must have unit norm")
        if a.shape[0] != self.noise.n:
            raise DimensionError(f"a has length {a.shape[0]} but noise has n={self.noise.n}")
        object.__setattr__(self, "a", _readonly(a))
        object.__setattr__(self, "lam", float(self.lam))

    @property
    def m(self) -> int:
        return self.noise.m

    @property
    def n(self) -> int:
        return self.noise.n

    def __neg__(self):
        return RankOnePlusNoise(-self.lam, self.a, -self.noise)


SymTensor = Union[SymTensorDense, SymTensorSparse, RankOnePlusNoise]


def _check_same_shape(t1, t2) -> None:
    if (t1.m, t1.n) != (t2.m, t2.n):
        raise DimensionError(f"shape mismatch: (m={t1.m}, n={t1.n}) vs (m={t2.m}, n={t2.n})")


def _contract_sparse(t: SymTensorSparse, x: np.ndarray, r: int):
    plan = t._plans[r]
    n = t.n
    if plan.coef.size == 0:
        return 0.0 if r == 0 else np.zeros((n,) * r)
    w = plan.coef * np.prod(x[plan.rest], axis=1)
    if r == 0:
        return float(np.sum(w))
    if r == 1:
        return np.bincount(plan.out[:, 0], weights=w, minlength=n)
    flat = plan.out[:, 0] * n + plan.out[:, 1]
    out = np.bincount(flat, weights=w, minlength=n * n).reshape(n, n)
    return 0.5 * (out + out.T)


def contract(tensor: SymTensor, x, r: int):
    """The ``m - r`` product ``A x^(m-r)``.

    Returns a float for ``r = 0``, an ``(n,)`` array for ``r = 1`` and a
    symmetric ``(n, n)`` array for ``r = 2``.
    """
    _check_order(r, tensor.m)
    x = _check_vector(x, tensor.n)
    if isinstance(tensor, SymTensorSparse):
        return _contract_sparse(tensor, x, r)
    if isinstance(tensor, RankOnePlusNoise):
        a = tensor.a
        scale = tensor.lam * float(a @ x) ** (tensor.m - r)
        noisy = _contract_sparse(tensor.noise, x, r)
        if r == 0:
            return scale + noisy
        if r == 1:
            return scale * a + noisy
        return scale * np.outer(a, a) + noisy
    if isinstance(tensor, SymTensorDense):
        out = tensor.entries
        for _ in range(tensor.m - r):
            out = out @ x
        if r == 0:
            return float(out)
        if r == 2:
            out = 0.5 * (out + out.T)
        return np.array(out)
    raise TypeError(f"unsupported tensor type {type(tensor).__name__}")


def rayleigh(tensor: SymTensor, x) -> float:
    """Generalized Rayleigh quotient ``A x^m`` for a unit vector ``x``."""
    x = _check_vector(x, tensor.n)
    nrm = float(np.linalg.norm(x))
    if abs(nrm - 1.0) > UNIT_TOL:
        raise ValueError(f"x must have unit norm (got {nrm!r})")
    return contract(tensor, x, 0)


def gradient(tensor: SymTensor, x) -> np.ndarray:
    """Gradient of ``x -> A x^m``, i.e. ``m * A x^(m-1)``."""
    return tensor.m * contract(tensor, x, 1)


def hessian(tensor: SymTensor, x) -> np.ndarray:
    """Hessian of ``x -> A x^m``, i.e. ``m (m-1) * A x^(m-2)``."""
    m = tensor.m
    return m * (m - 1) * contract(tensor, x, 2)


def _check_budget(m: int, n: int, budget: int) -> None:
    if n**m > budget:
        raise BudgetExceededError(f"dense tensor would have {n**m} entries (budget {budget})")


def densify(tensor: SymTensor, budget: int = DEFAULT_DENSE_BUDGET) -> SymTensorDense:
    """Materialize any tensor as a dense array, copying each value over its orbit."""
    if isinstance(tensor, SymTensorDense):
        return tensor
    _check_budget(tensor.m, tensor.n, budget)
    if isinstance(tensor, RankOnePlusNoise):
        out = np.array(densify(tensor.noise, budget).entries)
        outer = tensor.a
        for _ in range(tensor.m - 1):
            outer = np.multiply.outer(outer, tensor.a)
        return SymTensorDense(out + tensor.lam * outer, check=False)
    if isinstance(tensor, SymTensorSparse):
        out = np.zeros((tensor.n,) * tensor.m)
        for idx, v in tensor.terms:
            for p in set(itertools.permutations(idx)):
                out[p] = v
        return SymTensorDense(out, check=False)
    raise TypeError(f"unsupported tensor type {type(tensor).__name__}")


def sparsify(tensor: SymTensor, drop_zeros: bool = True, budget: int = DEFAULT_DENSE_BUDGET) -> SymTensorSparse:
    """Canonical sparse form of any tensor.

    For :class:`RankOnePlusNoise` only tuples over the support of ``a`` (plus
    the noise terms) are enumerated, so large ``n`` with a sparse ``a`` is fine.
    """
    if isinstance(tensor, SymTensorSparse):
        return tensor
    m, n = tensor.m, tensor.n
    terms: dict = {}
    if isinstance(tensor, SymTensorDense):
        for idx in itertools.combinations_with_replacement(range(n), m):
            terms[idx] = float(tensor.entries[idx])
    elif isinstance(tensor, RankOnePlusNoise):
        support = np.flatnonzero(tensor.a).tolist()
        if math.comb(len(support) + m - 1, m) > budget:
            raise BudgetExceededError("support of a is too large to enumerate")
        for idx in itertools.combinations_with_replacement(support, m):
            terms[idx] = tensor.lam * float(np.prod(tensor.a[list(idx)]))
        for idx, v in tensor.noise.terms:
            terms[idx] = terms.get(idx, 0.0) + v
    else:
        raise TypeError(f"unsupported tensor type {type(tensor).__name__}")
    if drop_zeros:
        terms = {i: v for i, v in terms.items() if v != 0.0}
    return SymTensorSparse.from_terms(m, n, terms.items())


def beta_hat(tensor: SymTensor) -> float:
    """Entrywise bound ``(m-1) * sum |A_i1...im|`` over all ``n**m`` entries."""
    m = tensor.m
    if isinstance(tensor, SymTensorDense):
        total = float(np.sum(np.abs(tensor.entries)))
    elif isinstance(tensor, SymTensorSparse):
        total = float(np.sum(np.abs(tensor.values) * tensor.orbit_sizes()))
    elif isinstance(tensor, RankOnePlusNoise):
        # |lam| * ||a||_1^m covers the planted part everywhere; correct it on
        # the noise support where the two parts overlap.
        a, lam = tensor.a, tensor.lam
        total = abs(lam) * float(np.sum(np.abs(a))) ** m
        noise = tensor.noise
        if noise.nnz:
            planted = lam * np.prod(a[noise.indices], axis=1)
            delta = np.abs(planted + noise.values) - np.abs(planted)
            total += float(np.sum(delta * noise.orbit_sizes()))
    else:
        raise TypeError(f"unsupported tensor type {type(tensor).__name__}")
    return (m - 1) * total


def beta_estimate(tensor: SymTensor, samples: int, seed=None) -> tuple[float, float]:
    """Bracket ``beta(A) = (m-1) max_x rho(A x^(m-2))`` as ``(lower, upper)``.

    ``lower`` maximizes the spectral radius over ``samples`` uniform sphere
    points (plus ``+-a`` for a :class:`RankOnePlusNoise`); ``upper`` is
    :func:`beta_hat`.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((samples, tensor.n))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    if isinstance(tensor, RankOnePlusNoise):
        pts = np.vstack([tensor.a, -tensor.a, pts])
    best = 0.0
    for x in pts:
        mat = np.atleast_2d(contract(tensor, x, 2))
        best = max(best, float(np.max(np.abs(np.linalg.eigvalsh(mat)))))
    return (tensor.m - 1) * best, beta_hat(tensor)
