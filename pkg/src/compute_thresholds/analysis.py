"""Sweeps and threshold-crossing searches over scenarios.

Both operate by rebuilding the scenario with the sweep target set to a trial
value and re-running the full evaluation, so they exercise exactly the same
code path as a one-off evaluate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .amounts import ComputeAmount
from .lineage import Lineage, LineageError
from .rulesets import CoverageStatus, Ruleset, evaluate
from .scenario import Scenario, SweepSpec, resolve_rulesets


class AnalysisError(ValueError):
    code = "AnalysisError"


class SweepTargetUnresolved(AnalysisError):
    """The sweep target path does not select exactly one settable field."""

    code = "SweepTargetUnresolved"


class NoCrossing(AnalysisError):
    """Coverage status is the same at both ends of the bracket."""

    code = "NoCrossing"


class NonMonotone(AnalysisError):
    """Covered at the low end but not at the high end; bisection assumes
    coverage is monotone in the swept value."""

    code = "NonMonotone"


@dataclass(frozen=True)
class SweepRow:
    value: ComputeAmount
    ruleset_id: str
    status: CoverageStatus
    effective: ComputeAmount


def set_sweep_target(scenario: Scenario, value: ComputeAmount) -> Scenario:
    """Return a copy of the scenario with the swept field set to value."""
    spec = _require_sweep(scenario)
    parts = spec.target.split(".")
    if len(parts) == 3 and parts[0] == "events" and parts[2] == "flop":
        return replace(scenario, lineage=_with_event_compute(scenario.lineage, parts[1], value))
    if (
        len(parts) == 4
        and parts[0] == "models"
        and parts[2] == "inference"
        and parts[3] == "per_request_flop"
    ):
        return replace(scenario, lineage=_with_inference_compute(scenario.lineage, parts[1], value))
    raise SweepTargetUnresolved(
        f"cannot resolve sweep target {spec.target!r}; expected "
        "events.<child_id>.flop or models.<model_id>.inference.per_request_flop"
    )


def _require_sweep(scenario: Scenario) -> SweepSpec:
    if scenario.sweep is None:
        raise SweepTargetUnresolved("scenario has no sweep block")
    return scenario.sweep


def _with_event_compute(lineage: Lineage, child_id: str, value: ComputeAmount) -> Lineage:
    try:
        ev = lineage.creating_event(child_id)
    except LineageError:
        raise SweepTargetUnresolved(f"no event creates node {child_id!r}") from None
    try:
        patched = replace(ev, compute=value)
    except Exception as exc:
        raise SweepTargetUnresolved(
            f"event for {child_id!r} cannot take compute {value.compact()}: {exc}"
        ) from None
    events = tuple(patched if e is ev else e for e in lineage.events)
    return Lineage(lineage.nodes, events)


def _with_inference_compute(lineage: Lineage, model_id: str, value: ComputeAmount) -> Lineage:
    if not lineage.has_node(model_id):
        raise SweepTargetUnresolved(f"unknown model id {model_id!r}")
    node = lineage.node(model_id)
    if node.inference is None:
        raise SweepTargetUnresolved(f"model {model_id!r} has no inference profile")
    try:
        profile = replace(node.inference, per_request_compute=value)
    except Exception as exc:
        raise SweepTargetUnresolved(
            f"inference profile of {model_id!r} cannot take {value.compact()}: {exc}"
        ) from None
    nodes = tuple(replace(node, inference=profile) if n is node else n for n in lineage.nodes)
    return Lineage(nodes, lineage.events)


def sweep(scenario: Scenario, registry=None) -> list:
    """Evaluate every selected rule set at each grid point.

    Rows come back grid-point-major, rule sets in id order within a point,
    so the output is deterministic for a given scenario.
    """
    spec = _require_sweep(scenario)
    rulesets = resolve_rulesets(scenario, registry)
    # resolve once up front so a bad target fails before any evaluation
    set_sweep_target(scenario, spec.from_value)
    grid = np.linspace(spec.from_value.log10_flop, spec.to_value.log10_flop, spec.steps)
    rows = []
    for x in grid:
        value = ComputeAmount.from_log10(float(x))
        scen = set_sweep_target(scenario, value)
        for rid in sorted(rulesets):
            verdict = evaluate(scen.lineage, scen.subject, rulesets[rid], cfg=scen.scaling)
            rows.append(
                SweepRow(
                    value=value,
                    ruleset_id=rid,
                    status=verdict.status,
                    effective=verdict.breakdown.effective,
                )
            )
    return rows


def _covered_at(scenario: Scenario, value: ComputeAmount, ruleset: Ruleset) -> bool:
    scen = set_sweep_target(scenario, value)
    verdict = evaluate(scen.lineage, scen.subject, ruleset, cfg=scen.scaling)
    return verdict.status is CoverageStatus.COVERED


def find_crossing(
    scenario: Scenario,
    ruleset: Ruleset,
    tolerance_ooms: float = 1e-3,
) -> ComputeAmount:
    """Bisect for the smallest swept value whose verdict is Covered.

    Uses the scenario's sweep block for the target and the bracket; steps is
    ignored.  Ambiguous counts as not covered.  Raises NoCrossing when both
    endpoints agree and NonMonotone when coverage decreases over the bracket.
    The result is a covered value within tolerance_ooms (in log10 FLOP) of
    the true boundary.
    """
    if not (tolerance_ooms > 0) or not math.isfinite(tolerance_ooms):
        raise AnalysisError(f"tolerance_ooms must be a positive number, got {tolerance_ooms!r}")
    spec = _require_sweep(scenario)
    lo, hi = spec.from_value.log10_flop, spec.to_value.log10_flop
    covered_lo = _covered_at(scenario, spec.from_value, ruleset)
    covered_hi = _covered_at(scenario, spec.to_value, ruleset)
    if covered_lo and not covered_hi:
        raise NonMonotone(
            f"{ruleset.id}: covered at {spec.from_value.compact()} but not at "
            f"{spec.to_value.compact()}"
        )
    if covered_lo == covered_hi:
        state = "covered" if covered_lo else "not covered"
        raise NoCrossing(
            f"{ruleset.id}: {state} across the whole bracket "
            f"[{spec.from_value.compact()}, {spec.to_value.compact()}]"
        )
    while hi - lo > tolerance_ooms:
        mid = 0.5 * (lo + hi)
        if _covered_at(scenario, ComputeAmount.from_log10(mid), ruleset):
            hi = mid
        else:
            lo = mid
    return ComputeAmount.from_log10(hi)
