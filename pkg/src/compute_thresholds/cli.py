"""ctl: command-line front end.

Exit codes: 0 success, 1 usage errors, 2 scenario parse/validation errors,
3 internal errors.  A crossing search that finds no crossing in the bracket
is a successful run reporting an empty result, not an error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .analysis import AnalysisError, NoCrossing, NonMonotone, SweepTargetUnresolved, find_crossing, sweep
from .report import _STATUS_LABEL, render_report
from .rulesets import builtin_registry, evaluate_all
from .scaling import DEFAULT_CONFIG, min_detectable_finetune_fraction
from .scenario import (
    ScenarioError,
    defaults_to_jsonable,
    parse_scenario,
    registry_to_jsonable,
    resolve_rulesets,
)
from .accounting import (
    DISTILL_MULTIPLIER,
    KICKSTART_MULTIPLIER,
    REINCARNATE_MATCH_MULTIPLIER,
    REINCARNATE_SURPASS_MULTIPLIER,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctl",
        description="Compute-threshold accounting over model lineages.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evaluate", help="evaluate a scenario against rule sets")
    p.add_argument("file", help="scenario JSON file")
    p.add_argument(
        "--rulesets",
        default=None,
        help="comma-separated rule set ids, or 'all' for every builtin "
        "(default: the scenario's selection)",
    )
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("sweep", help="evaluate over a grid of swept values")
    p.add_argument("file", help="scenario JSON file with a sweep block")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("crossing", help="bisect for the smallest covered swept value")
    p.add_argument("file", help="scenario JSON file with a sweep block")
    p.add_argument("--ruleset", required=True, help="rule set id to search under")
    p.add_argument("--tol-ooms", type=float, default=1e-3, dest="tol_ooms")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_crossing)

    p = sub.add_parser("rulesets", help="list built-in rule sets and constants")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_rulesets)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage; our contract reserves 2 for input errors
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SweepTargetUnresolved, NonMonotone) as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BrokenPipeError:
        # downstream closed our stdout (ctl ... | head); finish quietly,
        # parking stdout on devnull so interpreter shutdown stays silent
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK
    except OSError as exc:
        print(f"error: cannot read input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AnalysisError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def _load_scenario(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_scenario(fh.read())


def _select_rulesets(scenario, flag):
    registry = builtin_registry()
    if flag is None:
        return resolve_rulesets(scenario, registry)
    if flag.strip() == "all":
        return dict(registry)
    # named ids may also refer to the scenario's inline custom rule sets
    inline = {
        ref.id: ref for ref in scenario.ruleset_selection if not isinstance(ref, str)
    }
    chosen = {}
    for rid in (part.strip() for part in flag.split(",")):
        if not rid:
            continue
        if rid in inline:
            chosen[rid] = inline[rid]
        elif rid in registry:
            chosen[rid] = registry[rid]
        else:
            raise ScenarioError(f"unknown rule set id {rid!r}")
    if not chosen:
        raise ScenarioError("--rulesets selected nothing")
    return {rid: chosen[rid] for rid in sorted(chosen)}


def _cmd_evaluate(args) -> int:
    scenario = _load_scenario(args.file)
    rulesets = _select_rulesets(scenario, args.rulesets)
    verdicts = evaluate_all(scenario.lineage, scenario.subject, rulesets, cfg=scenario.scaling)
    sys.stdout.write(render_report(verdicts, args.format))
    return EXIT_OK


def _cmd_sweep(args) -> int:
    scenario = _load_scenario(args.file)
    rows = sweep(scenario)
    if args.format == "json":
        doc = {
            "target": scenario.sweep.target,
            "rows": [
                {
                    "value": r.value.render(),
                    "ruleset_id": r.ruleset_id,
                    "status": r.status.value,
                    "effective": r.effective.render(),
                }
                for r in rows
            ],
        }
        print(json.dumps(doc, indent=2))
        return EXIT_OK
    print(f"sweep target: {scenario.sweep.target}")
    cells = [("value", "ruleset", "status", "effective")]
    for r in rows:
        cells.append(
            (r.value.scientific(), r.ruleset_id, _STATUS_LABEL[r.status], r.effective.scientific())
        )
    widths = [max(len(row[i]) for row in cells) for i in range(4)]
    for row in cells:
        print("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return EXIT_OK


def _cmd_crossing(args) -> int:
    scenario = _load_scenario(args.file)
    rulesets = _select_rulesets(scenario, args.ruleset)
    ruleset = rulesets[args.ruleset.strip()]
    reason = None
    crossing = None
    try:
        crossing = find_crossing(scenario, ruleset, tolerance_ooms=args.tol_ooms)
    except NoCrossing as exc:
        reason = {"code": exc.code, "message": str(exc)}
    if args.format == "json":
        doc = {
            "ruleset_id": ruleset.id,
            "tolerance_ooms": args.tol_ooms,
            "crossing": crossing.render() if crossing is not None else None,
            "crossing_compact": crossing.compact() if crossing is not None else None,
            "reason": reason,
        }
        print(json.dumps(doc, indent=2))
        return EXIT_OK
    if crossing is None:
        print(f"no crossing under {ruleset.id}: {reason['message']}")
    else:
        print(
            f"crossing under {ruleset.id}: {crossing.scientific()} "
            f"({crossing.render()}) within {args.tol_ooms:g} OOMs"
        )
    return EXIT_OK


def _format_policy(policy) -> list:
    from .accounting import ExpansionAdjustmentKind, FinetuneCounting, ReuseAdjustmentKind

    lines = []
    ft = policy.count_finetune
    if ft.mode is FinetuneCounting.IF_AGGREGATE_AT_LEAST:
        lines.append(f"fine-tune counting: if aggregate >= {ft.fraction:g} of base")
    else:
        lines.append(f"fine-tune counting: {ft.mode.value}")
    lines.append(f"synthetic data counted: {'yes' if policy.count_synthetic_data else 'no'}")
    r = policy.reuse_adjustment
    if r.kind is ReuseAdjustmentKind.MULTIPLY_STUDENT_COMPUTE:
        lines.append(f"reuse adjustment: multiply student compute x{r.factor:g}")
    elif r.kind is ReuseAdjustmentKind.LOWER_THRESHOLD:
        lines.append(f"reuse adjustment: lower threshold /{r.factor:g}")
    e = policy.expansion_adjustment
    if e.kind is ExpansionAdjustmentKind.INFLATE_BY_MAX_SAVINGS:
        lines.append(f"expansion adjustment: inflate by max savings {e.savings_fraction:g}")
    elif e.kind is ExpansionAdjustmentKind.LOWER_THRESHOLD:
        lines.append(f"expansion adjustment: lower threshold /{e.factor:g}")
    if policy.inference_adjustment:
        lines.append("inference adjustment: training-equivalent OOMs added")
    return lines


def _cmd_rulesets(args) -> int:
    registry = builtin_registry()
    if args.format == "json":
        doc = registry_to_jsonable(registry)
        doc["defaults"] = defaults_to_jsonable()
        print(json.dumps(doc, indent=2))
        return EXIT_OK
    cfg = DEFAULT_CONFIG
    print("shared constants:")
    print(f"  loss-compute exponent: {cfg.loss_compute_exponent:g}")
    print(
        f"  detectable loss improvement: {cfg.detectable_loss_improvement:g} "
        f"(loss ratio {1.0 - cfg.detectable_loss_improvement:g})"
    )
    print(f"  min detectable fine-tune fraction: {min_detectable_finetune_fraction(cfg):.6f}")
    print(f"  compute-optimal inference coefficient: {cfg.inference_optimal_coefficient:g}")
    print(f"  general anchors: {_anchors_text(cfg.general_anchors)}")
    print(f"  math/coding anchors: {_anchors_text(cfg.math_coding_anchors)}")
    print(
        "  reuse multipliers: distill "
        f"{DISTILL_MULTIPLIER:g}, kickstart {KICKSTART_MULTIPLIER:g}, "
        f"reincarnate match {REINCARNATE_MATCH_MULTIPLIER:g} / surpass "
        f"{REINCARNATE_SURPASS_MULTIPLIER:g}"
    )
    for rid in sorted(registry):
        rs = registry[rid]
        print("")
        print(f"{rs.id}  [{rs.jurisdiction.value}]")
        if rs.description:
            print(f"  {rs.description}")
        print(f"  threshold: {rs.threshold.compact()} FLOP")
        if rs.cost_threshold is not None:
            print(f"  cost threshold: {rs.cost_threshold.compact()}")
        for line in _format_policy(rs.counting):
            print(f"  {line}")
        if rs.teacher_propagation:
            print("  teacher propagation: on")
        if rs.ambiguity_flagging:
            print("  ambiguity flagging: on")
        if rs.sb1047_classification:
            print("  classification: SB 1047 covered-model rules")
        if rs.notification_rule is not None:
            print(f"  notification window: {rs.notification_rule.window_days} days")
        for cite in rs.citations:
            print(f"  citation: {cite}")
    return EXIT_OK


def _anchors_text(anchors) -> str:
    return ", ".join(f"({x:g}, {y:g})" for x, y in anchors)


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    host = os.environ.get("CTL_BIND", "127.0.0.1")
    uvicorn.run(create_app(), host=host, port=args.port, log_level="info")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
