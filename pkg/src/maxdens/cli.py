"""Command-line interface: estimate, rates, simulate, plot."""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .asymptotics import PAPER_ROWS, RHOS, format_fraction, paper_diffs, rate_exponents
from .bandwidth import al_cdf, cv_cdf, oracle_ne1, oracle_ne2, sj_density, ucv_density
from .errors import MaxdensError, SchemaError
from .estimators import EstimatorFit, block_maxima, fit_gev_mle
from .kernels import get_kernel, kernel_for_tail
from .simulation import (
    ExperimentPlan,
    cells_to_csv,
    manifest_to_text,
    run_plan,
    smd_quantile,
)
from .tailmodels import parse_family, smd_pdf


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maxdens",
        description="Estimate the density of the maximum of m future observations.")
    parser.add_argument("--version", action="version", version=f"maxdens {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="fit one estimator and write a density curve")
    est.add_argument("--family", help='synthetic model, e.g. "pareto(l=1)"')
    est.add_argument("--data", type=Path, help="text file with one observation per line")
    est.add_argument("--n", type=int, help="synthetic sample size")
    est.add_argument("--m", type=int, required=True, help="forecast horizon")
    est.add_argument("--estimator", choices=("pe", "ne1", "ne2"), default="ne1")
    est.add_argument("--bandwidth", choices=("cv", "pi", "oracle"), default="cv")
    est.add_argument("--kernel", default="auto",
                     choices=("auto", "gaussian", "epanechnikov"))
    est.add_argument("--block-size", type=int, default=None,
                     help="PE block size k (defaults to m)")
    est.add_argument("--rescale-to-m", action="store_true",
                     help="rescale fitted PE parameters from k to m")
    est.add_argument("--seed", type=int, default=0)
    est.add_argument("--grid-points", type=int, default=512)
    est.add_argument("--min-blocks", type=int, default=20)
    est.add_argument("--out", type=Path, required=True)
    est.add_argument("--format", choices=("csv",), default="csv")

    rates = sub.add_parser("rates", help="emit the asymptotic rate tables")
    rates.add_argument("--out", type=Path, required=True)
    rates.add_argument("--diff-paper", action="store_true",
                       help="also write a report of differences from the published tables")

    sim = sub.add_parser("simulate", help="run a Monte-Carlo MISE benchmark plan")
    sim.add_argument("--plan", type=Path, help="key=value plan file; flags override")
    sim.add_argument("--family", action="append", default=None,
                     help="repeatable family spec")
    sim.add_argument("--n", default=None, help="comma-separated sample sizes")
    sim.add_argument("--rho", default=None,
                     help="comma-separated horizon exponents, e.g. 1/4,1/2")
    sim.add_argument("--estimators", default=None, help="comma list from pe,ne1,ne2")
    sim.add_argument("--selectors", default=None, help="comma list from cv,pi,oracle")
    sim.add_argument("--reps", type=int, default=None)
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--grid-points", type=int, default=None)
    sim.add_argument("--q-range", default=None, help="q_lo,q_hi (default 0.1,0.9)")
    sim.add_argument("--min-blocks", type=int, default=None)
    sim.add_argument("--workers", type=int, default=None)
    sim.add_argument("--out", type=Path, required=True)

    plot = sub.add_parser("plot", help="render an estimate or simulate CSV as SVG")
    plot.add_argument("--input", type=Path, required=True)
    plot.add_argument("--out", type=Path, required=True)
    plot.add_argument("--format", choices=("svg",), default="svg")
    return parser


# ---------------------------------------------------------------------------
# estimate


def _load_data(path: Path) -> np.ndarray:
    try:
        values = [float(line) for line in path.read_text().split()]
    except ValueError as exc:
        raise SchemaError(f"{path}: expected one real number per line ({exc})") from None
    if not values:
        raise SchemaError(f"{path} is empty")
    return np.asarray(values)


def cmd_estimate(args) -> int:
    if (args.family is None) == (args.data is None):
        raise MaxdensError("estimate needs exactly one of --family or --data")
    model = None
    if args.family:
        if args.n is None:
            raise MaxdensError("--family mode needs --n")
        model = parse_family(args.family)
        sample = model.sample(args.n, args.seed)
    else:
        sample = _load_data(args.data)
    m = args.m
    if m < 1:
        raise MaxdensError("--m must be >= 1")
    k = args.block_size or m
    if args.kernel == "auto":
        kern = kernel_for_tail(model.tail.tag) if model else get_kernel("gaussian")
    else:
        kern = get_kernel(args.kernel)

    if sample.size % k and args.estimator in ("pe", "ne2"):
        kept = sample.size - sample.size % k
        print(f"warning: block size {k} does not divide n={sample.size}; "
              f"truncating to {kept} observations", file=sys.stderr)
        sample = sample[:kept]

    if args.estimator == "pe":
        gev = fit_gev_mle(block_maxima(sample, k), min_blocks=args.min_blocks)
        fit = EstimatorFit.pe(gev, m=m, k=k, rescale_to_m=args.rescale_to_m)
    elif args.estimator == "ne1":
        if args.bandwidth == "cv":
            h1, h2 = ucv_density(sample, kern).value, cv_cdf(sample, kern).value
        elif args.bandwidth == "pi":
            h1, h2 = sj_density(sample, kern).value, al_cdf(sample, kern).value
        else:
            if model is None:
                raise MaxdensError("oracle bandwidths need a --family model")
            x_mid = float(smd_quantile(model, m, 0.5))
            h1, h2 = oracle_ne1(model, kern, kern, sample.size, m, x_mid)
        fit = EstimatorFit.ne1(sample, m, h1, h2, kern, kern)
    else:
        blocks = block_maxima(sample, m)
        if args.bandwidth == "cv":
            h = ucv_density(blocks.blocks, kern).value
        elif args.bandwidth == "pi":
            h = sj_density(blocks.blocks, kern).value
        else:
            if model is None:
                raise MaxdensError("oracle bandwidths need a --family model")
            x_mid = float(smd_quantile(model, m, 0.5))
            h = oracle_ne2(model, kern, sample.size, m, x_mid)
        fit = EstimatorFit.ne2(blocks, h, kern)

    if model is not None:
        grid = np.linspace(float(smd_quantile(model, m, 0.01)),
                           float(smd_quantile(model, m, 0.99)), args.grid_points)
    else:
        # empirical proxy for the smd quantile range
        lo, hi = np.quantile(sample, [0.01 ** (1.0 / m), 0.99 ** (1.0 / m)])
        span = hi - lo if hi > lo else 1.0
        grid = np.linspace(lo, hi + 0.05 * span, args.grid_points)

    est = np.asarray(fit.density(grid), dtype=float)
    lines = [
        f"# maxdens estimate {__version__}",
        f"# estimator={args.estimator} m={m} n={sample.size} seed={args.seed}",
        f"# fit: {fit.describe()}",
    ]
    if model is not None:
        lines.append(f"# family={model.spec_string()}")
        truth = np.asarray(smd_pdf(model, m, grid), dtype=float)
        lines.append("x,estimate,true_smd")
        lines.extend(f"{x:.10g},{e:.10g},{t:.10g}" for x, e, t in zip(grid, est, truth))
    else:
        lines.append("x,estimate")
        lines.extend(f"{x:.10g},{e:.10g}" for x, e in zip(grid, est))
    args.out.write_text("\n".join(lines) + "\n")
    print(f"wrote {args.out}")
    return 0


# ---------------------------------------------------------------------------
# rates


def cmd_rates(args) -> int:
    lines = ["family,params,tail1,tail2,rho,pe,ne1,ne2,pe_norm,ne1_norm,ne2_norm"]
    for row in PAPER_ROWS:
        for rho in RHOS:
            r = row.computed(rho)
            cells = [r.pe, r.ne1, r.ne2, r.pe_normalized, r.ne1_normalized,
                     r.ne2_normalized]
            lines.append(
                f"{row.family},\"{row.params}\",{format_fraction(row.p1)},"
                f"{format_fraction(row.p2)},{rho},"
                + ",".join(format_fraction(c) for c in cells))
    args.out.write_text("\n".join(lines) + "\n")
    print(f"wrote {args.out}")
    if args.diff_paper:
        diff_path = args.out.with_suffix(".diff.csv")
        dlines = ["family,params,rho,estimator,table,computed,paper"]
        for d in paper_diffs():
            table = "normalized" if d.normalized else "mse"
            dlines.append(f"{d.family},\"{d.params}\",{d.rho},{d.estimator},{table},"
                          f"{format_fraction(d.computed)},{format_fraction(d.printed)}")
        diff_path.write_text("\n".join(dlines) + "\n")
        print(f"wrote {diff_path} ({len(dlines) - 1} differing cells)")
    return 0


# ---------------------------------------------------------------------------
# simulate


def _read_plan_file(path: Path) -> dict:
    options = {}
    for raw in path.read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SchemaError(f"{path}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        options[key.strip().lower().replace("-", "_")] = value.strip()
    return options


def _split(text: str) -> list[str]:
    seps = ";" if ";" in text else ","
    return [part.strip() for part in text.split(seps) if part.strip()]


def cmd_simulate(args) -> int:
    opts = _read_plan_file(args.plan) if args.plan else {}
    families = args.family or (_split(opts["families"]) if "families" in opts else None)
    if not families:
        raise MaxdensError("simulate needs at least one family (flag or plan file)")
    n_text = args.n or opts.get("n") or opts.get("n_values")
    if not n_text:
        raise MaxdensError("simulate needs sample sizes (--n or plan n=)")
    rho_text = args.rho or opts.get("rho") or opts.get("m_rules") or "1/4"
    est_text = args.estimators or opts.get("estimators") or "pe,ne1"
    sel_text = args.selectors or opts.get("selectors") or "cv,pi"
    q_text = args.q_range or opts.get("q_range") or "0.1,0.9"
    q_lo, q_hi = (float(v) for v in _split(q_text))
    plan = ExperimentPlan(
        families=tuple(families),
        n_values=tuple(int(v) for v in _split(str(n_text))),
        m_rules=tuple(Fraction(v) for v in _split(rho_text)),
        estimators=tuple(v.lower() for v in _split(est_text)),
        selectors=tuple(v.lower() for v in _split(sel_text)),
        replicates=args.reps if args.reps is not None else int(opts.get("reps", 200)),
        base_seed=args.seed if args.seed is not None else int(opts.get("seed", 0)),
        grid_points=(args.grid_points if args.grid_points is not None
                     else int(opts.get("grid_points", 512))),
        q_range=(q_lo, q_hi),
        min_blocks=(args.min_blocks if args.min_blocks is not None
                    else int(opts.get("min_blocks", 4))),
    )
    cells, manifest = run_plan(plan, workers=args.workers)
    args.out.write_text(cells_to_csv(cells))
    manifest_path = args.out.with_suffix(args.out.suffix + ".manifest.txt")
    manifest_path.write_text(manifest_to_text(manifest))
    print(f"wrote {args.out} ({len(cells)} cells) and {manifest_path}")
    return 0


# ---------------------------------------------------------------------------
# plot


def _exact_tail_params(family: str, params: str):
    """(tag, p1, p2) as exact fractions, for reference slopes in plots."""
    vals = {}
    for part in params.split(","):
        key, _, val = part.partition("=")
        vals[key.strip()] = Fraction(val.strip())
    if family == "pareto":
        return "hall", vals["l"], Fraction(1)
    if family == "t":
        return "hall", vals["l"], Fraction(2)
    if family == "burr":
        return "hall", vals["c"] * vals["l"], vals["c"]
    if family == "frechet":
        return "hall", 1 / vals["g"], 1 / vals["g"]
    if family == "weibull":
        return "weibull", vals["k"], Fraction(0)
    if family == "revburr":
        return "bounded", -1 / (vals["c"] * vals["l"]), 1 / vals["c"]
    raise SchemaError(f"unknown family {family!r}")


def _plot_density(rows: list[dict], out: Path) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    x = np.array([float(r["x"]) for r in rows])
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for name in rows[0]:
        if name == "x":
            continue
        y = np.array([float(r[name]) for r in rows])
        style = {"lw": 1.8} if name != "true_smd" else {"lw": 1.2, "ls": "--", "color": "k"}
        ax.plot(x, y, label=name, **style)
    ax.set_xlabel("x")
    ax.set_ylabel("density")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out, format="svg")
    plt.close(fig)


def _plot_mise(rows: list[dict], out: Path) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4.5))
    series = {}
    for r in rows:
        key = (r["family"], r["params"], r["rho"], r["estimator"], r["selector"])
        series.setdefault(key, []).append((int(r["n"]), float(r["mean_mise"])))
    for (family, params, rho, estimator, selector), pts in series.items():
        pts.sort()
        ns = np.array([p[0] for p in pts], dtype=float)
        ys = np.array([p[1] for p in pts])
        label = f"{family}({params}) {estimator}" + (f"-{selector}" if selector != "-" else "")
        ax.loglog(ns, ys, marker="o", label=label)
        if len(pts) >= 2:
            try:
                tag, p1, p2 = _exact_tail_params(family, params)
                exponent = rate_exponents(tag, p1, p2, Fraction(rho)).column(estimator)
            except (ValueError, ZeroDivisionError, KeyError, SchemaError):
                exponent = None
            if exponent is not None:
                ref = ys[-1] * (ns / ns[-1]) ** float(exponent)
                ax.loglog(ns, ref, ls="--", color="gray", lw=1.0,
                          label=f"slope {format_fraction(exponent)}")
    ax.set_xlabel("n")
    ax.set_ylabel("mean scaled MISE")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out, format="svg")
    plt.close(fig)


def _read_csv(path: Path) -> tuple[list[str], list[dict]]:
    import csv as csvmod

    text = [line for line in path.read_text().splitlines()
            if line.strip() and not line.startswith("#")]
    if not text:
        raise SchemaError(f"{path} contains no data rows")
    reader = csvmod.DictReader(text)
    rows = [dict(r) for r in reader]
    if not rows or reader.fieldnames is None:
        raise SchemaError(f"{path} contains no data rows")
    return list(reader.fieldnames), rows


def cmd_plot(args) -> int:
    header, rows = _read_csv(args.input)
    if "x" in header and "estimate" in header:
        _plot_density(rows, args.out)
    elif "mean_mise" in header and "n" in header:
        _plot_mise(rows, args.out)
    else:
        raise SchemaError(
            f"{args.input}: not a maxdens estimate or simulate CSV (columns {header})")
    print(f"wrote {args.out}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {"estimate": cmd_estimate, "rates": cmd_rates,
                "simulate": cmd_simulate, "plot": cmd_plot}
    try:
        return handlers[args.command](args)
    except MaxdensError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
