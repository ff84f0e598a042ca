"""Command-line entry points.

    symrank1 solve TENSOR --alpha A [--starts K] [--truth-axis I]
    symrank1 bounds --lambda L --m M --n N --beta-e B
    symrank1 sweep [--config FILE] --out-dir DIR
    symrank1 gen-noise --n N --m M --out FILE
    symrank1 tvca2 MATRICES --out FILE

Every subcommand takes ``--seed``.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import bounds, experiments, io
from .models import NoiseGenSpec, build_tvca2, gen_sparse_noise, make_rank_one
from .sshopm import DegenerateStepError, SshopmConfig, sshopm_solve
from .tensor import RankOnePlusNoise

log = logging.getLogger("symrank1")


def _cmd_solve(args) -> int:
    tensor = io.read_tensor(args.tensor)
    truth = None
    if args.truth_axis is not None:
        if not 1 <= args.truth_axis <= tensor.n:
            raise SystemExit(f"--truth-axis must lie in 1..{tensor.n}")
        truth = np.zeros(tensor.n)
        truth[args.truth_axis - 1] = 1.0
    if args.minimize:
        tensor = -tensor
    rng = np.random.default_rng(args.seed)
    for start in range(args.starts):
        seed = int(rng.integers(2**63))
        cfg = SshopmConfig(alpha=args.alpha, tol=args.tol, max_iters=args.max_iters, seed=seed)
        row = {"start": start, "alpha": args.alpha, "seed": seed}
        try:
            pair, trace = sshopm_solve(tensor, None, cfg)
        except DegenerateStepError as exc:
            row.update(error=str(exc), converged=False)
        else:
            lam = -pair.lam if args.minimize else pair.lam
            row.update(
                **{"lambda": lam},
                residual=pair.residual,
                stability=pair.stability,
                converged=trace.converged,
                iterations=trace.iterations,
                x=pair.x.tolist(),
            )
            if truth is not None:
                row["a_dot_x"] = float(truth @ pair.x)
        print(json.dumps(row))
    return 0


def _cmd_bounds(args) -> int:
    p = bounds.NoiseModelParams(args.lam, args.m, args.n, args.beta_e)
    vals = bounds.all_bounds(p, epsilon=args.epsilon, gamma=args.gamma, rayleigh_value=args.rayleigh)
    if args.json:
        print(json.dumps(vals, indent=2))
        return 0
    print(f"model: lambda={p.lam:g} m={p.m} n={p.n} beta_E={p.beta_E:g}")
    print(f"thm1: |lambda_p| in [{vals['thm1_lambda_lo']:.6g}, {vals['thm1_lambda_hi']:.6g}], "
          f"|cos theta|^m >= {vals['thm1_cos_m_lo']:.6g}" + (" (vacuous)" if vals["thm1_vacuous"] else ""))
    line = f"thm2: |A x^m| >= {vals['thm2_threshold']:.6g} certifies |a.x| >= {args.epsilon:g}"
    if "thm2_certified" in vals:
        line += f"; value {args.rayleigh:g} -> {'certified' if vals['thm2_certified'] else 'not certified'}"
    print(line)
    print(f"thm3: Pr(|a.x| > {args.epsilon:g}) <= {vals['thm3_tail']:.6g}")
    print(f"thm4: principal alpha_min (beta_E->0 limit -lambda/2) = {vals['thm4_principal_limit']:.6g}")
    print(f"thm4: principal alpha_min (worst case) = {vals['thm4_principal_worst_case']:.6g} "
          f"(reference {bounds.REFERENCE_ALPHA_PRINCIPAL}; diff {vals['thm4_principal_worst_case'] - bounds.REFERENCE_ALPHA_PRINCIPAL:+.4f})")
    print(f"thm4: principal alpha_min (lambda_p = lambda) = {vals['thm4_principal_lambda_p_eq_lambda']:.6g}")
    print(f"thm4: spurious alpha_min (beta_E->0 limit lambda(m/2-1)) = {vals['thm4_spurious_limit']:.6g}")
    print(f"thm4: spurious alpha_min (|sin cos^(m-2)| <= 1) = {vals['thm4_spurious_crude']:.6g} "
          f"(reference {bounds.REFERENCE_ALPHA_SPURIOUS}; diff {vals['thm4_spurious_crude'] - bounds.REFERENCE_ALPHA_SPURIOUS:+.4f})")
    print(f"thm4: spurious alpha_min (max over theta) = {vals['thm4_spurious_envelope']:.6g} "
          f"(reference {bounds.REFERENCE_ALPHA_SPURIOUS}; diff {vals['thm4_spurious_envelope'] - bounds.REFERENCE_ALPHA_SPURIOUS:+.4f})")
    if "thm5_alpha_min" in vals:
        print(f"thm5: gamma={args.gamma:g}: alpha > {vals['thm5_alpha_min']:.6g} improves |a.x|")
    else:
        print("thm5: not applicable (needs lambda > 0 and gamma^(m-2) > 0)")
    if "thm6_alpha_min" in vals:
        print(f"thm6: alpha > {vals['thm6_alpha_min']:.6g} gives monotone convergence")
    else:
        print("thm6: not applicable (needs even m and lambda > 0)")
    return 0


def _cmd_sweep(args) -> int:
    cfg = experiments.load_config(args.config, master_seed=args.seed)
    if cfg.lam == 1.0:
        log.info("assuming lambda = 1 for the planted component")
    result = experiments.run_sweep(cfg, workers=args.workers)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    experiments.emit_csv(result.records, out / "sweep.csv")
    experiments.emit_plot(result.summary, out / "sweep.svg")
    (out / "summary.json").write_text(json.dumps(result.summary, indent=2) + "\n")
    for row in result.summary["rates"]:
        print(f"alpha={row['alpha']:+.2f} success={row['success_rate']:.2f}")
    return 0


def _cmd_gen_noise(args) -> int:
    values = {}
    if args.config:
        values = _read_kv(args.config)
    spec = NoiseGenSpec(
        n=int(values.get("n", args.n)),
        m=int(values.get("m", args.m)),
        nnz_draws=int(values.get("nnz_draws", args.draws)),
        beta_hat_target=float(values.get("beta_hat_target", args.beta_hat)),
        seed=args.seed,
    )
    tensor = gen_sparse_noise(spec)
    if args.planted_lambda is not None:
        a = np.zeros(spec.n)
        a[0] = 1.0
        base = make_rank_one(args.planted_lambda, a, spec.m)
        tensor = RankOnePlusNoise(base.lam, base.a, tensor)
    io.write_tensor(tensor, args.out)
    return 0


def _cmd_tvca2(args) -> int:
    tensor = build_tvca2(io.read_matrices(args.matrices))
    io.write_tensor(tensor, args.out)
    return 0


def _read_kv(path) -> dict:
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symrank1", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run SS-HOPM on a tensor file, one JSON line per start")
    p.add_argument("tensor")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--starts", type=int, default=1)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iters", type=int, default=1000)
    p.add_argument("--truth-axis", type=int, help="1-based axis i; report e_i . x")
    p.add_argument("--minimize", action="store_true", help="seek minima (runs on the negated tensor)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("bounds", help="evaluate all bounds for a noise model")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--beta-e", type=float, default=0.03)
    p.add_argument("--epsilon", type=float, default=0.9)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--rayleigh", type=float)
    p.add_argument("--json", action="store_true")
    p.add_argument("--seed", type=int, default=0, help="accepted for uniformity; unused")
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("sweep", help="success rate vs shift experiment")
    p.add_argument("--config", help="key = value file with SweepConfig fields")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, help="overrides master_seed")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("gen-noise", help="write a sparse symmetric noise tensor")
    p.add_argument("--config", help="key = value file (n, m, nnz_draws, beta_hat_target)")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--draws", type=int, default=500)
    p.add_argument("--beta-hat", type=float, default=0.03)
    p.add_argument("--planted-lambda", type=float, help="also add lambda * e_1^(x)m")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_gen_noise)

    p = sub.add_parser("tvca2", help="build the symmetric 4-tensor of a TVCA2 problem")
    p.add_argument("matrices")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0, help="accepted for uniformity; unused")
    p.set_defaults(func=_cmd_tvca2)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"symrank1 {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
