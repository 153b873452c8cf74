"""Verdict reports: a fixed-width text table for terminals and a lossless
JSON form shared by the CLI and the HTTP service.

The JSON codec is a strict round trip: verdicts_from_jsonable(
verdict_map_to_jsonable(v)) reconstructs structurally equal Verdict
objects, amounts included (they travel as lossless strings).  Output is
byte-deterministic: key order is fixed, rule sets sort by id.
"""
from __future__ import annotations

import json
from typing import Mapping

from .amounts import ComputeAmount
from .lineage import EventKind
from .rulesets import (
    Classification,
    ClassificationCategory,
    CoverageStatus,
    DerivativeKind,
    Obligation,
    Verdict,
)
from .accounting import ComputeBreakdown, ReuseEventRecord
from .scaling import OomValue

_STATUS_LABEL = {
    CoverageStatus.COVERED: "Covered",
    CoverageStatus.NOT_COVERED: "NotCovered",
    CoverageStatus.AMBIGUOUS: "Ambiguous",
}


class ReportError(ValueError):
    code = "ReportError"


def render_report(verdicts: Mapping[str, Verdict], fmt: str = "text") -> str:
    if fmt == "text":
        return render_text_report(verdicts)
    if fmt == "json":
        return json.dumps(verdict_map_to_jsonable(verdicts), indent=2) + "\n"
    raise ReportError(f"unknown report format {fmt!r}; expected text or json")


# -- text -------------------------------------------------------------------------


def render_text_report(verdicts: Mapping[str, Verdict]) -> str:
    rows = [verdicts[rid] for rid in sorted(verdicts)]
    header = ("ruleset", "status", "effective", "threshold", "triggered rules")
    table = [header]
    for v in rows:
        table.append(
            (
                v.ruleset_id,
                _STATUS_LABEL[v.status],
                v.breakdown.effective.scientific(),
                v.comparison_threshold.scientific(),
                ", ".join(v.triggered_rules) or "-",
            )
        )
    widths = [max(len(r[i]) for r in table) for i in range(len(header))]
    lines = []
    if rows:
        lines.append(f"subject: {rows[0].subject}")
        lines.append("")
    for r in table:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip())
    for v in rows:
        detail = _detail_lines(v)
        if detail:
            lines.append("")
            lines.extend(detail)
    return "\n".join(lines) + "\n"


def _detail_lines(v: Verdict) -> list:
    lines = [f"{v.ruleset_id}:"]
    if v.classification is not None:
        c = v.classification.category.value
        if v.classification.derivative_kind is not None:
            c += f" ({v.classification.derivative_kind.value})"
        lines.append(f"  classification: {c}")
    if v.comparison_compute != v.breakdown.effective:
        lines.append(f"  compared compute: {v.comparison_compute.scientific()}")
    for ob in v.obligations:
        deadline = f" within {ob.deadline_days} days" if ob.deadline_days is not None else ""
        lines.append(f"  obligation: {ob.kind}{deadline}: {ob.description}")
    for cite in v.citations:
        lines.append(f"  citation: {cite}")
    # verdict notes already start from the breakdown's, so print one list
    for note in v.notes:
        lines.append(f"  note: {note}")
    return lines if len(lines) > 1 else []


# -- json -------------------------------------------------------------------------


def verdict_map_to_jsonable(verdicts: Mapping[str, Verdict]) -> dict:
    return {"verdicts": {rid: verdict_to_jsonable(verdicts[rid]) for rid in sorted(verdicts)}}


def verdict_to_jsonable(v: Verdict) -> dict:
    return {
        "ruleset_id": v.ruleset_id,
        "subject": v.subject,
        "status": v.status.value,
        "threshold": v.threshold.render(),
        "comparison_threshold": v.comparison_threshold.render(),
        "comparison_compute": v.comparison_compute.render(),
        "classification": _classification_to_jsonable(v.classification),
        "triggered_rules": list(v.triggered_rules),
        "obligations": [
            {"kind": ob.kind, "description": ob.description, "deadline_days": ob.deadline_days}
            for ob in v.obligations
        ],
        "citations": list(v.citations),
        "notes": list(v.notes),
        "breakdown": breakdown_to_jsonable(v.breakdown),
    }


def _classification_to_jsonable(c):
    if c is None:
        return None
    return {
        "category": c.category.value,
        "derivative_kind": c.derivative_kind.value if c.derivative_kind is not None else None,
    }


def breakdown_to_jsonable(b: ComputeBreakdown) -> dict:
    return {
        "subject": b.subject,
        "pretrain": b.pretrain.render(),
        "base_kind": b.base_kind.value,
        "finetune_total": b.finetune_total.render(),
        "finetune_counted": b.finetune_counted,
        "synthetic_data": b.synthetic_data.render(),
        "synthetic_data_counted": b.synthetic_data_counted,
        "expansion": b.expansion.render(),
        "expansion_present": b.expansion_present,
        "reuse_events": [
            {
                "event_child_id": r.event_child_id,
                "kind": r.kind.value,
                "teacher_ids": list(r.teacher_ids),
                "multiplier": r.multiplier,
            }
            for r in b.reuse_events
        ],
        "inference_equivalent_ooms": b.inference_equivalent_ooms.ooms,
        "cumulative": b.cumulative.render(),
        "effective": b.effective.render(),
        "notes": list(b.notes),
    }


# -- json parse (round trip) --------------------------------------------------------


def parse_report(text: str) -> dict:
    doc = json.loads(text)
    return verdicts_from_jsonable(doc)


def verdicts_from_jsonable(doc: dict) -> dict:
    return {rid: verdict_from_jsonable(v) for rid, v in doc["verdicts"].items()}


def verdict_from_jsonable(d: dict) -> Verdict:
    classification = None
    if d["classification"] is not None:
        ck = d["classification"]["derivative_kind"]
        classification = Classification(
            category=ClassificationCategory(d["classification"]["category"]),
            derivative_kind=DerivativeKind(ck) if ck is not None else None,
        )
    return Verdict(
        ruleset_id=d["ruleset_id"],
        subject=d["subject"],
        status=CoverageStatus(d["status"]),
        threshold=ComputeAmount.parse(d["threshold"]),
        comparison_threshold=ComputeAmount.parse(d["comparison_threshold"]),
        comparison_compute=ComputeAmount.parse(d["comparison_compute"]),
        breakdown=breakdown_from_jsonable(d["breakdown"]),
        classification=classification,
        triggered_rules=tuple(d["triggered_rules"]),
        obligations=tuple(
            Obligation(
                kind=ob["kind"],
                description=ob["description"],
                deadline_days=ob["deadline_days"],
            )
            for ob in d["obligations"]
        ),
        citations=tuple(d["citations"]),
        notes=tuple(d["notes"]),
    )


def breakdown_from_jsonable(d: dict) -> ComputeBreakdown:
    return ComputeBreakdown(
        subject=d["subject"],
        pretrain=ComputeAmount.parse(d["pretrain"]),
        base_kind=EventKind(d["base_kind"]),
        finetune_total=ComputeAmount.parse(d["finetune_total"]),
        finetune_counted=d["finetune_counted"],
        synthetic_data=ComputeAmount.parse(d["synthetic_data"]),
        synthetic_data_counted=d["synthetic_data_counted"],
        expansion=ComputeAmount.parse(d["expansion"]),
        expansion_present=d["expansion_present"],
        reuse_events=tuple(
            ReuseEventRecord(
                event_child_id=r["event_child_id"],
                kind=EventKind(r["kind"]),
                teacher_ids=tuple(r["teacher_ids"]),
                multiplier=r["multiplier"],
            )
            for r in d["reuse_events"]
        ),
        inference_equivalent_ooms=OomValue(d["inference_equivalent_ooms"]),
        cumulative=ComputeAmount.parse(d["cumulative"]),
        effective=ComputeAmount.parse(d["effective"]),
        notes=tuple(d["notes"]),
    )
