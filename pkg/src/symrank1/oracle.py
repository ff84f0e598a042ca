"""Brute-force references for testing.

Nothing here calls :func:`symrank1.tensor.contract`; tensors are densified and
evaluated by literal summation or plain ``einsum`` over all entries.
"""

from __future__ import annotations

import itertools
import math
import string
from dataclasses import dataclass

import numpy as np

from .tensor import SymTensor, SymTensorDense, densify


@dataclass(frozen=True, eq=False)
class GridSearchResult:
    best_x: np.ndarray
    best_value: float
    grid_resolution: float
    n_points: int


def naive_contract(tensor: SymTensorDense, x, r: int):
    """``A x^(m-r)`` by nested summation over every index tuple."""
    if not isinstance(tensor, SymTensorDense):
        raise TypeError("naive_contract takes a dense tensor")
    x = [float(v) for v in x]
    m, n = tensor.m, tensor.n
    entries = tensor.entries
    out = np.zeros((n,) * r)
    for free in itertools.product(range(n), repeat=r):
        total = 0.0
        for summed in itertools.product(range(n), repeat=m - r):
            term = float(entries[free + summed])
            for i in summed:
                term *= x[i]
            total += term
        out[free] = total
    return float(out) if r == 0 else out


def _dense(tensor: SymTensor) -> np.ndarray:
    return densify(tensor).entries


def evaluate_many(tensor: SymTensor, points) -> np.ndarray:
    """``A x^m`` for every row of ``points`` (no normalization)."""
    entries = _dense(tensor)
    m = entries.ndim
    letters = string.ascii_lowercase[:m]
    spec = letters + "," + ",".join("z" + c for c in letters) + "->z"
    points = np.atleast_2d(np.asarray(points, dtype=float))
    return np.einsum(spec, entries, *([points] * m), optimize=True)


def homogeneous_value(tensor: SymTensor, x) -> float:
    return float(evaluate_many(tensor, np.asarray(x, dtype=float)[None, :])[0])


def sphere_grid(n: int, resolution: float = 0.02) -> np.ndarray:
    """Deterministic quasi-uniform points on the unit sphere in ``R^n`` (``n <= 4``)."""
    if n == 1:
        return np.array([[1.0], [-1.0]])
    if n == 2:
        t = np.arange(0.0, 2 * math.pi, resolution)
        return np.column_stack([np.cos(t), np.sin(t)])
    if n == 3:
        # Fibonacci lattice; spacing ~ sqrt(4 pi / N)
        count = int(math.ceil(4 * math.pi / resolution**2))
        k = np.arange(count) + 0.5
        z = 1 - 2 * k / count
        rho = np.sqrt(1 - z**2)
        phi = math.pi * (1 + math.sqrt(5)) * k
        return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])
    if n == 4:
        blocks = []
        for t1 in np.arange(resolution / 2, math.pi, resolution):
            s1 = math.sin(t1)
            c2 = max(1, int(math.ceil(math.pi * s1 / resolution)))
            for t2 in (np.arange(c2) + 0.5) * math.pi / c2:
                s2 = math.sin(t2)
                c3 = max(1, int(math.ceil(2 * math.pi * s1 * s2 / resolution)))
                ph = np.arange(c3) * 2 * math.pi / c3
                blocks.append(np.column_stack([
                    np.full(c3, math.cos(t1)),
                    np.full(c3, s1 * math.cos(t2)),
                    s1 * s2 * np.cos(ph),
                    s1 * s2 * np.sin(ph),
                ]))
        return np.vstack(blocks)
    raise ValueError(f"grid search supports n <= 4, got n={n}")


def grid_search_principal(tensor: SymTensor, resolution: float = 0.02, chunk: int = 200_000) -> GridSearchResult:
    """Point of largest ``|A x^m|`` over :func:`sphere_grid`.

    Ties go to the earliest grid point.
    """
    if tensor.n > 4:
        raise ValueError(f"grid search supports n <= 4, got n={tensor.n}")
    pts = sphere_grid(tensor.n, resolution)
    best_i, best_abs, best_val = -1, -1.0, 0.0
    for start in range(0, len(pts), chunk):
        vals = evaluate_many(tensor, pts[start:start + chunk])
        i = int(np.argmax(np.abs(vals)))
        if abs(vals[i]) > best_abs:
            best_i, best_abs, best_val = start + i, float(abs(vals[i])), float(vals[i])
    return GridSearchResult(pts[best_i].copy(), best_val, resolution, len(pts))


def grid_value_error(tensor: SymTensor, resolution: float) -> float:
    """Bound on how far the grid maximum can fall below the true maximum of ``|A x^m|``.

    The maximum is a critical point, so the loss is second order in the
    distance to the nearest grid point (at most ``resolution``):
    ``0.5 * ||Hessian|| * resolution^2`` with ``||Hessian|| <= m (m-1) sum|A|``
    plus the ``m * |A x^m|`` term from the sphere constraint.
    """
    entries = _dense(tensor)
    m = entries.ndim
    total = float(np.sum(np.abs(entries)))
    return 0.5 * (m * (m - 1) + m) * total * resolution**2


def fd_gradient(tensor: SymTensor, x, step: float = 1e-5) -> np.ndarray:
    """Central differences of ``x -> A x^m`` (no sphere constraint)."""
    if not step > 0:
        raise ValueError("step must be positive")
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    eye = np.eye(n) * step
    plus = evaluate_many(tensor, x + eye)
    minus = evaluate_many(tensor, x - eye)
    return (plus - minus) / (2 * step)


def fd_hessian(tensor: SymTensor, x, step: float = 1e-4) -> np.ndarray:
    """Central second differences of ``x -> A x^m``."""
    if not step > 0:
        raise ValueError("step must be positive")
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    e = np.eye(n) * step
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            pts = np.array([x + e[i] + e[j], x + e[i] - e[j], x - e[i] + e[j], x - e[i] - e[j]])
            fpp, fpm, fmp, fmm = evaluate_many(tensor, pts)
            out[i, j] = (fpp - fpm - fmp + fmm) / (4 * step**2)
    return out
