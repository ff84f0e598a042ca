"""Success rate of SS-HOPM versus shift on a planted rank-one tensor.

For each noise draw the tensor ``lam * e_1^{(x)m} + E`` is built, then every
shift on the grid is tried from ``starts_per_alpha`` uniform random starts.  A
trial succeeds when the solve converged and ``|e_1 . x| > success_threshold``.

Seeds are derived from ``(master_seed, noise_draw, alpha_index, trial)`` so the
records do not depend on execution order or worker count.
"""

from __future__ import annotations

import csv
import dataclasses
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bounds
from .io import format_float
from .models import planted_model, sample_sphere
from .sshopm import DegenerateStepError, SshopmConfig, sshopm_solve
from .tensor import beta_hat

log = logging.getLogger(__name__)

CSV_HEADER = ["alpha", "trial", "noise_draw", "final_lambda", "a_dot_x", "iterations", "converged", "success"]


def default_alpha_grid() -> list[float]:
    return [round(-1.0 + 0.1 * i, 10) for i in range(61)]


@dataclass(frozen=True)
class SweepConfig:
    n: int = 100
    m: int = 4
    nnz_draws: int = 500
    beta_hat_target: float = 0.03
    lam: float = 1.0
    alpha_grid: tuple = field(default_factory=lambda: tuple(default_alpha_grid()))
    starts_per_alpha: int = 10
    success_threshold: float = 0.9
    master_seed: int = 0
    noise_redraws: int = 1
    tol: float = 1e-10
    max_iters: int = 1000

    def __post_init__(self):
        object.__setattr__(self, "alpha_grid", tuple(float(a) for a in self.alpha_grid))
        if not self.alpha_grid:
            raise ValueError("alpha_grid must be non-empty")
        if not 0 < self.success_threshold <= 1:
            raise ValueError("success_threshold must lie in (0, 1]")
        if self.starts_per_alpha < 1 or self.noise_redraws < 1:
            raise ValueError("starts_per_alpha and noise_redraws must be >= 1")


@dataclass(frozen=True)
class SweepRecord:
    alpha: float
    trial: int
    noise_draw: int
    final_lambda: float
    a_dot_x: float
    iterations: int
    converged: bool
    success: bool


@dataclass
class SweepResult:
    config: SweepConfig
    records: list
    summary: dict


def _noise_seed(cfg: SweepConfig, draw: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([cfg.master_seed, 0, draw])


def _start_seed(cfg: SweepConfig, draw: int, alpha_index: int, trial: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([cfg.master_seed, 1, draw, alpha_index, trial])


def build_tensor(cfg: SweepConfig, draw: int):
    seed = np.random.default_rng(_noise_seed(cfg, draw))
    return planted_model(cfg.n, cfg.m, cfg.lam, cfg.nnz_draws, cfg.beta_hat_target, seed)


def _run_alpha(cfg: SweepConfig, draw: int, alpha_index: int, tensor=None) -> list[SweepRecord]:
    if tensor is None:
        tensor = build_tensor(cfg, draw)
    alpha = cfg.alpha_grid[alpha_index]
    solver = SshopmConfig(alpha=alpha, tol=cfg.tol, max_iters=cfg.max_iters, classify=False)
    out = []
    for trial in range(cfg.starts_per_alpha):
        x0 = sample_sphere(cfg.n, np.random.default_rng(_start_seed(cfg, draw, alpha_index, trial)))
        try:
            pair, trace = sshopm_solve(tensor, x0, solver)
        except DegenerateStepError as exc:
            log.warning("alpha=%g trial=%d draw=%d: %s", alpha, trial, draw, exc)
            out.append(SweepRecord(alpha, trial, draw, float("nan"), float("nan"), 0, False, False))
            continue
        dot = float(tensor.a @ pair.x)
        ok = trace.converged and abs(dot) > cfg.success_threshold
        out.append(SweepRecord(alpha, trial, draw, pair.lam, dot, trace.iterations, trace.converged, ok))
    return out


def _run_alpha_job(args):
    cfg, draw, alpha_index = args
    return _run_alpha(cfg, draw, alpha_index)


def reference_thresholds(cfg: SweepConfig, beta_E: float) -> dict:
    p = bounds.NoiseModelParams(cfg.lam, cfg.m, cfg.n, beta_E)
    out = {
        "thm4_principal": bounds.thm4_principal_worst_case(p),
        "thm4_spurious_envelope": bounds.thm4_spurious_envelope(p),
        "thm4_spurious_crude": bounds.thm4_spurious_crude(p),
        "reference_alpha_principal": bounds.REFERENCE_ALPHA_PRINCIPAL,
        "reference_alpha_spurious": bounds.REFERENCE_ALPHA_SPURIOUS,
    }
    if cfg.m % 2 == 0 and cfg.lam > 0:
        out["thm6"] = bounds.thm6_alpha_min(p)
    return out


def summarize(cfg: SweepConfig, records: list[SweepRecord], beta_E: float, beta_A: float) -> dict:
    rates = []
    for alpha in cfg.alpha_grid:
        rows = [r for r in records if r.alpha == alpha]
        rates.append({
            "alpha": alpha,
            "success_rate": float(np.mean([r.success for r in rows])),
            "converged_rate": float(np.mean([r.converged for r in rows])),
            "mean_iterations": float(np.mean([r.iterations for r in rows])),
        })
    return {
        "rates": rates,
        "thresholds": reference_thresholds(cfg, beta_E),
        "beta_hat_noise": beta_E,
        "beta_hat_tensor": beta_A,
        "assumptions": ["lambda = 1 is inferred, not stated, for the reference experiment"] if cfg.lam == 1.0 else [],
    }


def run_sweep(cfg: SweepConfig, workers: int = 1) -> SweepResult:
    """Run the whole grid; per-trial numerical failures are recorded, not raised."""
    jobs = [(cfg, d, i) for d in range(cfg.noise_redraws) for i in range(len(cfg.alpha_grid))]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_alpha_job, jobs))
    else:
        tensors = {d: build_tensor(cfg, d) for d in range(cfg.noise_redraws)}
        chunks = [_run_alpha(cfg, d, i, tensors[d]) for _, d, i in jobs]
    records = sorted((r for c in chunks for r in c), key=lambda r: (r.noise_draw, r.alpha, r.trial))
    t0 = build_tensor(cfg, 0)
    beta_E = beta_hat(t0.noise)
    summary = summarize(cfg, records, beta_E, beta_hat(t0))
    return SweepResult(cfg, records, summary)


def mean_success(summary: dict, lo: float, hi: float) -> float:
    rates = [r["success_rate"] for r in summary["rates"] if lo - 1e-9 <= r["alpha"] <= hi + 1e-9]
    return float(np.mean(rates))


def _csv_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format_float(v)
    return str(v)


def emit_csv(records, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in records:
            row = dataclasses.astuple(r)
            w.writerow([_csv_value(v) for v in row])


def plot_summary(summary: dict):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    alphas = [r["alpha"] for r in summary["rates"]]
    rates = [r["success_rate"] for r in summary["rates"]]
    th = summary["thresholds"]
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.plot(alphas, rates, "o-", color="k", ms=3, label="success rate")
    ax.axvline(th["thm4_principal"], color="tab:blue", ls="--",
               label=f"principal threshold {th['thm4_principal']:.4f} (reference {th['reference_alpha_principal']})")
    ax.axvline(th["thm4_spurious_envelope"], color="tab:red", ls="--",
               label=f"spurious threshold {th['thm4_spurious_envelope']:.4f} (reference {th['reference_alpha_spurious']})")
    ax.set_xlabel("shift alpha")
    ax.set_ylabel("success rate")
    ax.set_ylim(-0.05, 1.05)
    ax.legend(fontsize=7, loc="lower left")
    fig.tight_layout()
    return fig


def emit_plot(summary: dict, path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig = plot_summary(summary)
    with matplotlib.rc_context({"svg.hashsalt": "symrank1", "svg.fonttype": "none"}):
        fig.savefig(Path(path), format="svg", metadata={"Date": None})
    plt.close(fig)


def parse_config_text(text: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment.

    ``alpha_grid`` accepts ``start:stop:step`` (inclusive stop) or a comma list.
    """
    types = {f.name: f.type for f in dataclasses.fields(SweepConfig)}
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = {"lambda": "lam"}.get(key, key)
        if key not in types:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        if key == "alpha_grid":
            out[key] = parse_alpha_grid(value)
        elif types[key] in ("int", int):
            out[key] = int(value)
        else:
            out[key] = float(value)
    return out


def parse_alpha_grid(value: str) -> tuple:
    if ":" in value:
        start, stop, step = (float(v) for v in value.split(":"))
        count = int(round((stop - start) / step)) + 1
        return tuple(round(start + i * step, 10) for i in range(count))
    return tuple(float(v) for v in value.split(",") if v.strip())


def load_config(path, **overrides) -> SweepConfig:
    values = parse_config_text(Path(path).read_text()) if path else {}
    values.update({k: v for k, v in overrides.items() if v is not None})
    return SweepConfig(**values)
