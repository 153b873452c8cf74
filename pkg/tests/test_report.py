"""Report rendering: a readable text table and a lossless JSON form."""
import json
import random

import pytest

from compute_thresholds.report import (
    ReportError,
    parse_report,
    render_report,
    verdict_from_jsonable,
    verdict_map_to_jsonable,
    verdict_to_jsonable,
)
from compute_thresholds.rulesets import builtin_registry, evaluate, evaluate_all
from compute_thresholds.scenario import parse_scenario, resolve_rulesets

from conftest import GOLDEN_SCENARIOS, golden_text, random_lineage, random_subject

REGISTRY = builtin_registry()


def golden_verdicts(name="sb1047-frontier.json"):
    s = parse_scenario(golden_text(name))
    resolved = resolve_rulesets(s)
    return evaluate_all(s.lineage, s.subject, resolved, cfg=s.scaling)


class TestTextReport:
    def test_header_and_table(self):
        text = render_report(golden_verdicts(), "text")
        lines = text.splitlines()
        assert lines[0] == "subject: vulcan-tuned"
        assert lines[1] == ""
        assert lines[2].startswith("ruleset")
        assert "status" in lines[2] and "effective" in lines[2]
        table_ids = [l.split()[0] for l in lines[3:6]]
        assert table_ids == ["eo14110-literal", "eu-aiact-literal", "sb1047-vetoed"]

    def test_status_labels(self):
        text = render_report(golden_verdicts(), "text")
        assert "Covered" in text
        # no raw enum names leak through
        assert "COVERED" not in text
        assert "CoverageStatus" not in text

    def test_amounts_in_scientific_notation(self):
        text = render_report(golden_verdicts(), "text")
        assert "1.00e+26" in text  # eo14110 threshold column

    def test_detail_blocks_carry_citations_and_notes(self):
        text = render_report(golden_verdicts(), "text")
        assert "citation: " in text
        assert "22602" in text  # sb1047 citation text
        assert "note: " in text

    def test_notes_are_not_duplicated(self):
        verdicts = golden_verdicts()
        text = render_report(verdicts, "text")
        for v in verdicts.values():
            for note in v.notes:
                assert text.count(f"note: {note}") == 1

    def test_empty_map_renders_header_only(self):
        text = render_report({}, "text")
        assert text.startswith("ruleset")
        assert text.endswith("\n")
        assert "subject" not in text

    def test_default_format_is_text(self):
        verdicts = golden_verdicts()
        assert render_report(verdicts) == render_report(verdicts, "text")

    def test_unknown_format(self):
        with pytest.raises(ReportError):
            render_report(golden_verdicts(), "yaml")
        assert issubclass(ReportError, ValueError)


class TestJsonReport:
    def test_top_level_shape(self):
        doc = json.loads(render_report(golden_verdicts(), "json"))
        assert set(doc) == {"verdicts"}
        assert sorted(doc["verdicts"]) == [
            "eo14110-literal", "eu-aiact-literal", "sb1047-vetoed",
        ]
        one = doc["verdicts"]["eo14110-literal"]
        assert one["subject"] == "vulcan-tuned"
        assert one["status"] in {"covered", "not_covered", "ambiguous"}
        assert isinstance(one["breakdown"]["effective"], str)

    @pytest.mark.parametrize("name", GOLDEN_SCENARIOS)
    def test_round_trip_on_goldens(self, name):
        verdicts = golden_verdicts(name)
        text = render_report(verdicts, "json")
        assert parse_report(text) == verdicts

    def test_round_trip_is_lossless_per_verdict(self):
        for v in golden_verdicts().values():
            assert verdict_from_jsonable(verdict_to_jsonable(v)) == v

    def test_byte_determinism(self):
        a = render_report(golden_verdicts(), "json")
        b = render_report(golden_verdicts(), "json")
        assert a == b

    def test_amounts_round_trip_losslessly(self):
        verdicts = golden_verdicts()
        doc = verdict_map_to_jsonable(verdicts)
        parsed = parse_report(json.dumps(doc))
        for rid, v in verdicts.items():
            assert parsed[rid].breakdown.effective == v.breakdown.effective
            assert parsed[rid].threshold == v.threshold
            assert parsed[rid].comparison_compute == v.comparison_compute


def test_random_verdicts_round_trip():
    rng = random.Random(404)
    rulesets = list(REGISTRY.values())
    for _ in range(120):
        lin = random_lineage(rng, n_events=rng.randint(1, 8))
        subject = random_subject(rng, lin)
        rs = rng.choice(rulesets)
        v = evaluate(lin, subject, rs)
        assert verdict_from_jsonable(verdict_to_jsonable(v)) == v
        text = render_report({rs.id: v}, "text")
        assert text.splitlines()[0] == f"subject: {subject}"
