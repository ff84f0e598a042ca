"""Shifted symmetric higher-order power method (SS-HOPM).

The iteration is ``x <- normalize(A x^(m-1) + alpha * x)``.  With
``alpha > beta_hat(A)`` it increases the Rayleigh quotient monotonically and
converges to an eigenpair ``A x^(m-1) = lam * x``.  To seek minima instead of
maxima, run it on ``-A``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .models import sample_sphere
from .tensor import SymTensor, contract, rayleigh

NEGATIVE_STABLE = "negative-stable"
POSITIVE_STABLE = "positive-stable"
UNSTABLE = "unstable"
UNCLASSIFIED = "unclassified"

DEGENERATE_NORM = 1e-14


class DegenerateStepError(ArithmeticError):
    """The update vector ``A x^(m-1) + alpha x`` vanished."""


@dataclass(frozen=True)
class SshopmConfig:
    alpha: float = 0.0
    tol: float = 1e-10
    max_iters: int = 1000
    seed: int | None = None
    residual_tol: float = 1e-6
    stability_margin: float = 1e-9
    classify: bool = True

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


@dataclass(frozen=True, eq=False)
class EigenPair:
    x: np.ndarray
    lam: float
    residual: float
    stability: str = UNCLASSIFIED


@dataclass(eq=False)
class SshopmTrace:
    """Per-iteration record of one solve.

    ``lambdas[k]`` is the Rayleigh quotient at ``x_k`` (``k = 0`` is the
    start).  ``alignments[k]`` is ``|a . x_k|`` when a reference vector was
    given, else the list stays empty.
    """

    lambdas: list = field(default_factory=list)
    alignments: list = field(default_factory=list)
    converged: bool = False
    iterations: int = 0

    @property
    def iterates(self):
        for k, lam in enumerate(self.lambdas):
            yield k, lam, (self.alignments[k] if self.alignments else None)

    def is_monotone(self, slack: float = 1e-12) -> bool:
        lam = np.asarray(self.lambdas)
        return bool(np.all(np.diff(lam) >= -slack))


@dataclass(frozen=True)
class StabilityReport:
    label: str
    spectral_radius: float
    stable: bool
    reason: str = ""


def sshopm_step(tensor: SymTensor, x, alpha: float) -> np.ndarray:
    """One SS-HOPM update from the unit vector ``x``."""
    x = np.asarray(x, dtype=float)
    y = contract(tensor, x, 1) + alpha * x
    nrm = np.linalg.norm(y)
    if nrm <= DEGENERATE_NORM:
        raise DegenerateStepError(f"update vector has norm {nrm:.3e}")
    return y / nrm


def sshopm_solve(tensor: SymTensor, x0=None, config: SshopmConfig = SshopmConfig(),
                 truth=None) -> tuple[EigenPair, SshopmTrace]:
    """Run SS-HOPM from ``x0`` (or a uniform random start drawn with ``config.seed``).

    Stops once successive Rayleigh quotients differ by at most ``config.tol``
    and the eigen-residual ``||A x^(m-1) - lam x||`` is at most
    ``config.residual_tol``.  If that never happens within ``max_iters`` the
    last iterate is returned with ``trace.converged = False``.

    ``truth`` is an optional reference direction whose alignment ``|a . x_k|``
    is recorded in the trace.
    """
    alpha = float(config.alpha)
    if x0 is None:
        x = sample_sphere(tensor.n, config.seed)
    else:
        x = np.asarray(x0, dtype=float)
        if abs(np.linalg.norm(x) - 1.0) > 1e-8:
            raise ValueError("x0 must be a unit vector")
    truth = None if truth is None else np.asarray(truth, dtype=float)
    trace = SshopmTrace()

    g = contract(tensor, x, 1)
    lam = float(x @ g)
    trace.lambdas.append(lam)
    if truth is not None:
        trace.alignments.append(abs(float(truth @ x)))

    for k in range(1, config.max_iters + 1):
        y = g + alpha * x
        nrm = np.linalg.norm(y)
        if nrm <= DEGENERATE_NORM:
            raise DegenerateStepError(f"update vector has norm {nrm:.3e} at iteration {k}")
        x = y / nrm
        g = contract(tensor, x, 1)
        lam_new = float(x @ g)
        trace.lambdas.append(lam_new)
        if truth is not None:
            trace.alignments.append(abs(float(truth @ x)))
        trace.iterations = k
        if abs(lam_new - lam) <= config.tol and np.linalg.norm(g - lam_new * x) <= config.residual_tol:
            trace.converged = True
            break
        lam = lam_new

    lam = rayleigh(tensor, x)
    residual = float(np.linalg.norm(contract(tensor, x, 1) - lam * x))
    pair = EigenPair(x, lam, residual)
    if config.classify and residual <= config.residual_tol:
        report = classify_stability(tensor, pair, alpha, config.stability_margin, config.residual_tol)
        pair = EigenPair(x, lam, residual, report.label)
    return pair, trace


def complement_basis(x) -> np.ndarray:
    """Orthonormal basis (columns) of the orthogonal complement of unit ``x``.

    Deterministic: the standard basis minus the axis where ``|x_i|`` is
    largest is orthogonalized against ``x`` by Householder QR.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    drop = int(np.argmax(np.abs(x)))
    cols = [x] + [np.eye(n)[:, i] for i in range(n) if i != drop]
    q, _ = np.linalg.qr(np.column_stack(cols))
    return q[:, 1:]


def classify_stability(tensor: SymTensor, pair: EigenPair, alpha: float,
                       margin: float = 1e-9, residual_gate: float = 1e-6) -> StabilityReport:
    """Classify ``pair`` as a fixed point of SS-HOPM with shift ``alpha``.

    The fixed point is stable when every eigenvalue of
    ``((m-1) U^T A x^(m-2) U + alpha I) / (lam + alpha)`` has magnitude below
    ``1 - margin``, with ``U`` spanning the complement of ``x``.  Stable points
    are labelled negative-stable (local max of the Rayleigh quotient: all
    projected curvatures below ``lam``) or positive-stable (local min).
    """
    if pair.residual > residual_gate:
        raise ValueError(f"pair residual {pair.residual:.3e} exceeds {residual_gate:.1e}")
    lam, x, m = pair.lam, pair.x, tensor.m
    denom = lam + alpha
    if abs(denom) <= 1e-12 * max(1.0, abs(lam), abs(alpha)):
        return StabilityReport(UNCLASSIFIED, float("nan"), False, "lam + alpha is numerically zero")
    if tensor.n == 1:
        return StabilityReport(NEGATIVE_STABLE if denom > 0 else POSITIVE_STABLE, 0.0, True,
                               "no directions orthogonal to x")
    u = complement_basis(x)
    proj = (m - 1) * (u.T @ contract(tensor, x, 2) @ u)
    curv = np.linalg.eigvalsh(0.5 * (proj + proj.T))
    rho = float(np.max(np.abs((curv + alpha) / denom)))
    if rho >= 1 - margin:
        return StabilityReport(UNSTABLE, rho, False, "spectral radius not below 1")
    if np.all(curv < lam):
        return StabilityReport(NEGATIVE_STABLE, rho, True)
    if np.all(curv > lam):
        return StabilityReport(POSITIVE_STABLE, rho, True)
    return StabilityReport(UNSTABLE, rho, False, "indefinite projected curvature")
