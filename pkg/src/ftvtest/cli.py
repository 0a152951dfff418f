"""Command line entry point: ``ftvtest <subcommand> ...``.

On failure the process exits nonzero and writes ``{"error": ..., "message": ...}``
to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import ensemble as ens
from .errors import FtvTestError
from .ftv import FtvConfig, breakdown, evaluate, percentile_report
from .graph import load_graph, load_plan
from .metrics import ENSEMBLE_MEAN, Standard, ensemble_mean_shares
from .recom import SEED_STREAM, ChainConfig, make_rng, run_chain, seed_plan
from .report import (
    breakdown_percentages,
    emit_breakdown,
    emit_mean_variance_csv,
    emit_target_table,
    score_plan,
)
from .traintest import SplitConfig, train_test

_STANDARD_NAMES = {
    "proportional": "proportional",
    "eg": "efficiency_gap",
    "efficiency-gap": "efficiency_gap",
    "ensemble-mean": "ensemble_mean",
}


class CliError(FtvTestError):
    pass


def _ids(text: str) -> list[str]:
    ids = [x.strip() for x in text.split(",") if x.strip()]
    if not ids:
        raise CliError("empty election list")
    return ids


def _standard(name: str, slope: str) -> Standard:
    try:
        kind = _STANDARD_NAMES[name]
    except KeyError:
        raise CliError(f"unknown standard {name!r}") from None
    return Standard(kind, slope=slope)


def _write(text: str, out) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=False) + "\n"


def _means_for(args, graph, std: Standard, elections):
    if std.kind != ENSEMBLE_MEAN:
        return None
    if not args.ensemble:
        raise CliError("the ensemble-mean standard needs --ensemble")
    return ensemble_mean_shares(ens.read_ensemble(args.ensemble, graph), graph, elections)


def cmd_run_chain(args) -> None:
    graph = load_graph(args.graph)
    config = ChainConfig.load(args.config)
    if args.seed is not None:
        config = ChainConfig.from_dict({**config.to_dict(), "seed": args.seed})
    if args.plan:
        start = load_plan(args.plan, graph, config.k)
    else:
        start = seed_plan(graph, config, make_rng(config.seed, SEED_STREAM))
    fmt = "auto" if args.format in (None, "auto") else args.format
    with ens.EnsembleWriter(args.out, config.k, fmt) as sink:
        summary = run_chain(graph, start, config, sink)
    if args.summary:
        Path(args.summary).write_text(_dump(summary.to_dict()), encoding="utf-8")


def cmd_score(args) -> None:
    graph = load_graph(args.graph)
    plan = load_plan(args.plan, graph)
    elections = _ids(args.elections)
    configs = []
    means = None
    if args.ftv_elections:
        std = _standard(args.standard, args.slope)
        ftv_ids = _ids(args.ftv_elections)
        configs.append(FtvConfig(ftv_ids, std, args.t or "ftv"))
        means = _means_for(args, graph, std, ftv_ids)
    record = score_plan(graph, plan, elections, configs, means, name=Path(args.plan).stem)
    _write(_dump(record.to_dict()), args.out)


def cmd_ftv(args) -> None:
    graph = load_graph(args.graph)
    plan = load_plan(args.plan, graph)
    std = _standard(args.standard, args.slope)
    config = FtvConfig(_ids(args.elections), std, args.t or "ftv")
    means = _means_for(args, graph, std, config.election_ids)
    _write(_dump(evaluate(graph, plan, config, means).to_dict()), args.out)


def cmd_breakdown(args) -> None:
    graph = load_graph(args.graph)
    std = _standard(args.standard, args.slope)
    config = FtvConfig(_ids(args.elections), std, args.t or "ftv")
    means = _means_for(args, graph, std, config.election_ids)
    report = breakdown(ens.read_ensemble(args.ensemble, graph), graph, config, means)
    if args.pie_out:
        emit_breakdown(report, args.pie_out)
    if args.format == "csv":
        lines = ["score,count,share"] + [
            f"{s},{c},{share:.6f}" for s, (c, share) in enumerate(zip(report.counts, map(float, report.shares)))
        ]
        _write("\n".join(lines) + "\n", args.out)
        return
    out = report.to_dict()
    out["percentages_4_to_0"] = breakdown_percentages(report)
    if args.percentiles:
        out["percentiles"] = {}
        for p in args.percentiles.split(","):
            rep = percentile_report(ens.read_ensemble(args.ensemble, graph), graph, config, p, means)
            out["percentiles"][p] = rep.to_dict()
    _write(_dump(out), args.out)


def cmd_traintest(args) -> None:
    graph = load_graph(args.graph)
    t = args.t or "0.07"
    split = SplitConfig(_ids(args.early), _ids(args.later), t)
    result = train_test(ens.read_ensemble(args.ensemble, graph), graph, split)
    _write(_dump(result.to_dict()), args.out)


def cmd_mean_variance(args) -> None:
    graph = load_graph(args.graph)
    if not args.out:
        raise CliError("mean-variance needs --out")
    emit_mean_variance_csv(ens.read_ensemble(args.ensemble, graph), graph, _ids(args.elections), args.out)


def cmd_targets(args) -> None:
    graph = load_graph(args.graph)
    elections = _ids(args.elections)
    plans = {}
    for item in args.plan:
        name, sep, path = item.partition("=")
        if not sep:
            name, path = Path(item).stem, item
        plans[name] = load_plan(path, graph)
    standards = [_standard(s, args.slope) for s in _ids(args.standards)]
    means = None
    if any(s.kind == ENSEMBLE_MEAN for s in standards):
        means = _means_for(args, graph, Standard(ENSEMBLE_MEAN), elections)
    table = emit_target_table(graph, plans, elections, standards, means)
    _write(table.to_csv() if args.format == "csv" else _dump(table.to_dict()), args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ftvtest", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, ensemble=False, plan=False):
        p.add_argument("--graph", required=True, help="dual graph JSON")
        if plan:
            p.add_argument("--plan", required=True, help="plan CSV (unit_id,district)")
        if ensemble:
            p.add_argument("--ensemble", required=True, help="ensemble file")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=["json", "csv"], default="json")

    def ftv_opts(p):
        p.add_argument("--standard", default="proportional", choices=sorted(_STANDARD_NAMES))
        p.add_argument("--slope", default="2", help="efficiency-gap slope")
        p.add_argument("--t", help="fixed threshold instead of max(0.07, 1/k)")

    p = sub.add_parser("run-chain", help="generate a ReCom ensemble")
    p.add_argument("--graph", required=True)
    p.add_argument("--config", required=True, help="ChainConfig JSON")
    p.add_argument("--plan", help="start plan CSV (default: seeded tree bipartition)")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--format", choices=["auto", "compact", "jsonl"], default="auto")
    p.add_argument("--summary", help="write the run summary JSON here")
    p.set_defaults(func=cmd_run_chain)

    p = sub.add_parser("score", help="disprop series, mean/variance and FTV marks for one plan")
    common(p, plan=True)
    p.add_argument("--elections", required=True)
    p.add_argument("--ftv-elections", help="four election ids for the FTV marks")
    p.add_argument("--ensemble", help="ensemble for the ensemble-mean standard")
    ftv_opts(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("ftv", help="FTV Test for one plan")
    common(p, plan=True)
    p.add_argument("--elections", required=True, help="four comma-separated election ids")
    p.add_argument("--ensemble", help="ensemble for the ensemble-mean standard")
    ftv_opts(p)
    p.set_defaults(func=cmd_ftv)

    p = sub.add_parser("breakdown", help="ensemble breakdown by FTV score")
    common(p, ensemble=True)
    p.add_argument("--elections", required=True)
    p.add_argument("--pie-out", help="write percentages (score 4 to 0) here")
    p.add_argument("--percentiles", help="comma-separated percentile plans, e.g. 0.25,0.10")
    ftv_opts(p)
    p.set_defaults(func=cmd_breakdown)

    p = sub.add_parser("traintest", help="early/later score histograms")
    common(p, ensemble=True)
    p.add_argument("--early", required=True)
    p.add_argument("--later", required=True)
    p.add_argument("--t", help="threshold (default 0.07; 'ftv' for max(0.07, 1/k))")
    p.set_defaults(func=cmd_traintest)

    p = sub.add_parser("mean-variance", help="variance,mean CSV over an ensemble")
    common(p, ensemble=True)
    p.add_argument("--elections", required=True)
    p.set_defaults(func=cmd_mean_variance)

    p = sub.add_parser("targets", help="targets and outcomes table")
    common(p)
    p.add_argument("--plan", action="append", required=True, help="NAME=path.csv, repeatable")
    p.add_argument("--elections", required=True)
    p.add_argument("--standards", default="proportional,eg")
    p.add_argument("--slope", default="2")
    p.add_argument("--ensemble", help="ensemble for the ensemble-mean standard")
    p.set_defaults(func=cmd_targets)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (FtvTestError, ValueError, OSError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
