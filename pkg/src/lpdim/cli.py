"""Command-line entry point.

Subcommands: gen (synthetic cube CSV), table1 (RC_1 vs RC_2 fractions),
concentration (RC/CV sweep), dims (dimension reports + correlations),
knn-eval (leave-one-out quality grid), compare (statistical report).
Outputs are CSV for tabular data, JSON for structured records and markdown
for human-readable reports; every seeded command is byte-deterministic.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import concentration as conc
from . import dataset as dsmod
from . import dimension as dimmod
from . import knn as knnmod
from . import stats as statsmod
from .metrics import CANONICAL_EXPONENTS

DESK_TABLE1_DIMS = (1, 2, 3, 4, 10, 15, 20, 100)
DESK_TABLE1_POINTS = (10, 20, 100)
DESK_SWEEP_DIMS = (1, 2, 3, 4, 5, 10, 20, 50, 100, 200)
PAPER_SWEEP_DIMS = tuple(range(1, 6)) + tuple(range(10, 201, 5))

PREPROCESS_CHOICES = {"empty": "empty", "std": "standardise", "minmax": "minmax"}
WILCOXON_EXP_PAIRS = ((0.5, 1.0), (0.5, 2.0), (1.0, 2.0))
WILCOXON_MODE_PAIRS = (("empty", "standardise"), ("empty", "minmax"), ("standardise", "minmax"))
MEASURES = ("tnnsc", "accuracy", "se_sp")


def _fmt_p(p: float) -> str:
    if math.isinf(p):
        return "inf"
    return f"{p:g}"


def _parse_ps(text: str) -> list[float]:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        out.append(math.inf if tok in ("inf", "oo") else float(tok))
    return out


def _parse_dims(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",")]


def _write_text(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def cmd_gen(args) -> int:
    X = dsmod.gen_uniform_cube(args.n, args.d, args.seed)
    lines = [",".join(f"x{i}" for i in range(args.d))]
    lines += [",".join(repr(float(v)) for v in row) for row in X]
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


def cmd_table1(args) -> int:
    dims = _parse_dims(args.dims) if args.dims else list(DESK_TABLE1_DIMS)
    points = [int(v) for v in args.points.split(",")] if args.points else list(DESK_TABLE1_POINTS)
    lines = ["dim,k_points,reps,fraction"]
    for k in points:
        for dim, frac in conc.rc_comparison_experiment(k, dims, args.reps, args.seed):
            lines.append(f"{dim},{k},{args.reps},{frac:.6f}")
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


def cmd_concentration(args) -> int:
    if args.scale == "paper":
        n, dims = 10000, list(PAPER_SWEEP_DIMS)
    else:
        n, dims = args.n, (_parse_dims(args.dims) if args.dims else list(DESK_SWEEP_DIMS))
    ps = _parse_ps(args.ps) if args.ps else list(CANONICAL_EXPONENTS)
    records = conc.concentration_sweep(n, dims, ps, args.seed)
    lines = ["dim,p,rc,cv"]
    lines += [f"{r.dimension},{_fmt_p(r.p)},{r.rc!r},{r.cv!r}" for r in records]
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


def cmd_dims(args) -> int:
    manifests = dsmod.load_manifest(args.manifest)
    base_dir = Path(args.manifest).parent
    cfg = dimmod.DimensionConfig()
    mode = PREPROCESS_CHOICES[args.preprocess] if args.preprocess != "all" else "empty"
    rows = []
    failures = []
    for mf in manifests:
        try:
            ds = dsmod.load_csv(mf, base_dir=base_dir)
            ds = dsmod.preprocess(ds, mode)
            rep = dimmod.estimate_all(ds, cfg)
        except Exception as exc:  # keep going; report at the end
            failures.append(f"{mf.name}: {exc}")
            continue
        rows.append((mf.name, ds.n, rep))
    lines = [f"# preprocessing={mode} centered_pca=true"]
    lines.append("name,n_attr,cases,pca_k,pca_bs,pca_cn,sep_d,frac_d")
    for name, cases, r in rows:
        lines.append(
            f"{name},{r.n_attr},{cases},{r.pca_k},{r.pca_bs},{r.pca_cn},{r.sep_d:.4f},{r.frac_d:.4f}"
        )
    _write_text(args.out, "\n".join(lines) + "\n")

    if len(rows) >= 2 and args.analysis_out:
        names = ["n_attr", "pca_k", "pca_bs", "pca_cn", "sep_d", "frac_d"]
        cols = [
            [getattr(r, a) for _, _, r in rows] for a in names
        ]
        analysis_lines = ["dimension," + ",".join(names)]
        try:
            R = dimmod.pearson_correlation_matrix(cols)
            for i, a in enumerate(names):
                analysis_lines.append(a + "," + ",".join(f"{v:.4f}" for v in R[i]))
        except ValueError as exc:
            analysis_lines.append(f"# correlation unavailable: {exc}")
        analysis_lines.append("")
        analysis_lines.append("regression,slope")
        n_attr = np.array(cols[0], dtype=float)
        for a, col in zip(names[1:], cols[1:]):
            slope = dimmod.slope_through_origin(n_attr, np.array(col, dtype=float))
            analysis_lines.append(f"{a}_on_n_attr,{slope:.4f}")
        _write_text(args.analysis_out, "\n".join(analysis_lines) + "\n")

    for msg in failures:
        print(f"error: {msg}", file=sys.stderr)
    return 2 if failures else 0


def _record_key(rec: dict) -> tuple:
    p = rec["p"]
    return (rec["dataset"], rec["preprocessing"], math.inf if p == "inf" else float(p))


def cmd_knn_eval(args) -> int:
    manifests = dsmod.load_manifest(args.manifest)
    base_dir = Path(args.manifest).parent
    ps = _parse_ps(args.ps) if args.ps else list(CANONICAL_EXPONENTS)
    if args.preprocess == "all":
        modes = list(PREPROCESS_CHOICES.values())
    else:
        modes = [PREPROCESS_CHOICES[args.preprocess]]

    existing: dict[tuple, dict] = {}
    out_path = Path(args.out)
    if out_path.exists():
        for rec in json.loads(out_path.read_text(encoding="utf-8")):
            existing[_record_key(rec)] = rec

    failures = []
    for mf in manifests:
        wanted = [
            (mode, p)
            for mode in modes
            for p in ps
            if (mf.name, mode, p) not in existing
        ]
        if not wanted:
            continue
        try:
            ds = dsmod.load_csv(mf, base_dir=base_dir)
            for mode in sorted({m for m, _ in wanted}):
                prepared = dsmod.preprocess(ds, mode)
                for p in [p for m, p in wanted if m == mode]:
                    rec = knnmod.loo_evaluate(prepared, knnmod.KnnConfig(k=args.k, p=p))
                    rec = replace(rec, preprocessing=mode)
                    existing[(mf.name, mode, p)] = rec.to_dict()
        except Exception as exc:
            failures.append(f"{mf.name}: {exc}")

    records = [existing[key] for key in sorted(existing, key=lambda k: (k[0], k[1], k[2]))]
    _write_text(args.out, json.dumps(records, indent=2, sort_keys=True) + "\n")
    for msg in failures:
        print(f"error: {msg}", file=sys.stderr)
    return 2 if failures else 0


def _measure_value(rec: dict, measure: str) -> float:
    if measure == "tnnsc":
        return rec["tnnsc"]
    if measure == "accuracy":
        return rec["accuracy"]
    if measure == "se_sp":
        return rec["sensitivity"] + rec["specificity"]
    raise ValueError(measure)


def _grid_from_records(records: list[dict]):
    """Index records as grid[mode][database][p] -> record dict."""
    grid: dict[str, dict[str, dict[float, dict]]] = {}
    for rec in records:
        p = math.inf if rec["p"] == "inf" else float(rec["p"])
        grid.setdefault(rec["preprocessing"], {}).setdefault(rec["dataset"], {})[p] = rec
    return grid


def build_comparison_report(records: list[dict], alpha: float = 0.05) -> dict:
    """Frequency, Friedman/Nemenyi and Wilcoxon report over a complete grid."""
    grid = _grid_from_records(records)
    modes = sorted(grid)
    if not modes:
        raise ValueError("no records")
    databases = sorted(grid[modes[0]])
    if len(databases) < 2:
        raise ValueError("need a complete grid for at least 2 databases")
    exponents = sorted(grid[modes[0]][databases[0]])
    for mode in modes:
        if sorted(grid[mode]) != databases:
            raise ValueError(f"incomplete grid: mode {mode!r} misses databases")
        for db in databases:
            if sorted(grid[mode][db]) != exponents:
                raise ValueError(f"incomplete grid: ({mode}, {db}) misses exponents")

    report: dict = {
        "databases": databases,
        "exponents": [_fmt_p(p) for p in exponents],
        "frequency": {},
        "friedman": {},
        "wilcoxon_exponents": {},
        "wilcoxon_preprocessing": {},
    }

    for measure in MEASURES:
        report["frequency"][measure] = {}
        for mode in modes:
            if measure in ("tnnsc", "accuracy"):
                cells = {
                    db: {
                        p: statsmod.QualityCell(
                            tnnsc=grid[mode][db][p]["tnnsc"],
                            accuracy=grid[mode][db][p]["accuracy"],
                            n=grid[mode][db][p]["n"],
                            n_pos=grid[mode][db][p]["n_pos"],
                        )
                        for p in exponents
                    }
                    for db in databases
                }
                freq = statsmod.frequency_report(cells, measure)
                entry = {
                    "best": {_fmt_p(p): freq.best[p] for p in exponents},
                    "worst": {_fmt_p(p): freq.worst[p] for p in exponents},
                    "insignificantly_best": {_fmt_p(p): freq.insignificantly_best[p] for p in exponents},
                    "insignificantly_worst": {_fmt_p(p): freq.insignificantly_worst[p] for p in exponents},
                }
            else:
                # significance testing is not defined for se+sp; tally best/worst only
                best = {p: 0 for p in exponents}
                worst = {p: 0 for p in exponents}
                for db in databases:
                    vals = {p: _measure_value(grid[mode][db][p], measure) for p in exponents}
                    hi, lo = max(vals.values()), min(vals.values())
                    for p in exponents:
                        if vals[p] == hi:
                            best[p] += 1
                        if vals[p] == lo:
                            worst[p] += 1
                entry = {
                    "best": {_fmt_p(p): best[p] for p in exponents},
                    "worst": {_fmt_p(p): worst[p] for p in exponents},
                }
            report["frequency"][measure][mode] = entry

    m = len(exponents)
    N = len(databases)
    for mode in modes:
        report["friedman"][mode] = {}
        report["wilcoxon_exponents"][mode] = {}
        for measure in MEASURES:
            Q = np.array(
                [[_measure_value(grid[mode][db][p], measure) for p in exponents] for db in databases]
            )
            outcome, rank_matrix = statsmod.friedman_test(Q, alpha=alpha)
            cd = statsmod.nemenyi_cd(m, N, alpha=alpha)
            mean_ranks = rank_matrix.mean_ranks
            best_idx = int(np.argmax(mean_ranks))
            insig = [
                _fmt_p(exponents[i])
                for i in range(m)
                if abs(mean_ranks[best_idx] - mean_ranks[i]) <= cd
            ]
            report["friedman"][mode][measure] = {
                "statistic": outcome.statistic,
                "p_value": outcome.p_value,
                "alpha": alpha,
                "best_p": _fmt_p(exponents[best_idx]),
                "best_mean_rank": float(mean_ranks[best_idx]),
                "mean_ranks": {_fmt_p(p): float(r) for p, r in zip(exponents, mean_ranks)},
                "nemenyi_cd": cd,
                "insignificantly_different_from_best": insig,
            }

            pair_ps = {}
            for pa, pb in WILCOXON_EXP_PAIRS:
                if pa not in exponents or pb not in exponents:
                    continue
                a = [_measure_value(grid[mode][db][pa], measure) for db in databases]
                b = [_measure_value(grid[mode][db][pb], measure) for db in databases]
                out = statsmod.wilcoxon_signed_rank(a, b, alpha=alpha)
                pair_ps[f"{_fmt_p(pa)}_vs_{_fmt_p(pb)}"] = out.p_value
            report["wilcoxon_exponents"][mode][measure] = pair_ps

    for measure in MEASURES:
        report["wilcoxon_preprocessing"][measure] = {}
        for p in (0.5, 1.0, 2.0):
            if p not in exponents:
                continue
            pair_ps = {}
            for ma, mb in WILCOXON_MODE_PAIRS:
                if ma not in modes or mb not in modes:
                    continue
                a = [_measure_value(grid[ma][db][p], measure) for db in databases]
                b = [_measure_value(grid[mb][db][p], measure) for db in databases]
                out = statsmod.wilcoxon_signed_rank(a, b, alpha=alpha)
                pair_ps[f"{ma}_vs_{mb}"] = out.p_value
            report["wilcoxon_preprocessing"][measure][_fmt_p(p)] = pair_ps
    return report


def render_markdown_report(report: dict) -> str:
    """Markdown rendering: frequency tables, Friedman/Nemenyi grid, Wilcoxon pairs."""
    exps = report["exponents"]
    lines: list[str] = ["# lp comparison report", ""]

    lines.append("## Frequency comparison")
    for measure, per_mode in report["frequency"].items():
        lines.append("")
        lines.append(f"### {measure}")
        for mode, entry in per_mode.items():
            lines.append("")
            lines.append(f"**{mode}**")
            lines.append("")
            lines.append("| indicator | " + " | ".join(exps) + " |")
            lines.append("|---" * (len(exps) + 1) + "|")
            for key, label in (
                ("best", "The best"),
                ("worst", "The worst"),
                ("insignificantly_best", "Insignificantly different from the best"),
                ("insignificantly_worst", "Insignificantly different from the worst"),
            ):
                if key not in entry:
                    continue
                lines.append(f"| {label} | " + " | ".join(str(entry[key][p]) for p in exps) + " |")

    lines.append("")
    lines.append("## Friedman and Nemenyi")
    lines.append("")
    lines.append("| preprocessing | measure | p-value | best p | best mean rank | insignificant set |")
    lines.append("|---|---|---|---|---|---|")
    for mode, per_measure in report["friedman"].items():
        for measure, cell in per_measure.items():
            pv = cell["p_value"]
            pv_text = "<0.0001" if pv < 1e-4 else f"{pv:.4f}"
            insig = " ".join(cell["insignificantly_different_from_best"])
            lines.append(
                f"| {mode} | {measure} | {pv_text} | {cell['best_p']} | "
                f"{cell['best_mean_rank']:.4f} | {insig} |"
            )

    lines.append("")
    lines.append("## Wilcoxon: exponent pairs")
    lines.append("")
    lines.append("| preprocessing | measure | 0.5 & 1 | 0.5 & 2 | 1 & 2 |")
    lines.append("|---|---|---|---|---|")
    for mode, per_measure in report["wilcoxon_exponents"].items():
        for measure, pair_ps in per_measure.items():
            vals = [pair_ps.get(f"{_fmt_p(a)}_vs_{_fmt_p(b)}") for a, b in WILCOXON_EXP_PAIRS]
            cells = " | ".join("-" if v is None else f"{v:.4f}" for v in vals)
            lines.append(f"| {mode} | {measure} | {cells} |")

    lines.append("")
    lines.append("## Wilcoxon: preprocessing pairs")
    lines.append("")
    lines.append("| measure | p | E & S | E & M | S & M |")
    lines.append("|---|---|---|---|---|")
    for measure, per_p in report["wilcoxon_preprocessing"].items():
        for p, pair_ps in per_p.items():
            vals = [pair_ps.get(f"{a}_vs_{b}") for a, b in WILCOXON_MODE_PAIRS]
            cells = " | ".join("-" if v is None else f"{v:.4f}" for v in vals)
            lines.append(f"| {measure} | {p} | {cells} |")
    lines.append("")
    return "\n".join(lines)


def cmd_compare(args) -> int:
    records = json.loads(Path(args.results).read_text(encoding="utf-8"))
    report = build_comparison_report(records)
    _write_text(args.out, json.dumps(report, indent=2, sort_keys=True) + "\n")
    if args.markdown_out:
        _write_text(args.markdown_out, render_markdown_report(report))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lpdim")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a uniform-cube CSV")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--d", type=int, default=10)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("table1", help="fraction of RC_1 > RC_2 per dimension")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--dims", default=None)
    p.add_argument("--points", default=None, help="comma list of point counts")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("concentration", help="RC/CV sweep over dimensions")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--dims", default=None)
    p.add_argument("--ps", default=None)
    p.add_argument("--scale", choices=("desk", "paper"), default="desk")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_concentration)

    p = sub.add_parser("dims", help="dimension estimates per dataset")
    p.add_argument("--manifest", required=True)
    p.add_argument("--preprocess", choices=tuple(PREPROCESS_CHOICES) + ("all",), default="empty")
    p.add_argument("--out", required=True)
    p.add_argument("--analysis-out", default=None)
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("knn-eval", help="leave-one-out kNN quality grid")
    p.add_argument("--manifest", required=True)
    p.add_argument("--k", type=int, default=11)
    p.add_argument("--ps", default=None)
    p.add_argument("--preprocess", choices=tuple(PREPROCESS_CHOICES) + ("all",), default="all")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_knn_eval)

    p = sub.add_parser("compare", help="statistical comparison report")
    p.add_argument("--results", required=True, help="knn-eval JSON output")
    p.add_argument("--out", required=True, help="JSON report path")
    p.add_argument("--markdown-out", default=None)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
