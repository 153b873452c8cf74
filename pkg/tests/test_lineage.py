"""Lineage graph invariants: event arity, acyclicity, one creation event
per node, append-only value semantics."""
import random

import pytest

from compute_thresholds.amounts import ComputeAmount, MoneyAmount
from compute_thresholds.lineage import (
    CapabilityDomain,
    ChildAlreadyCreated,
    CycleDetected,
    DerivationEvent,
    DuplicateId,
    EventKind,
    InferenceProfile,
    KindFieldMismatch,
    Lineage,
    ModelNode,
    UnknownId,
    add_event,
    add_node,
    ancestors,
    reuse_teachers,
    validate,
)

from conftest import random_lineage


def amt(s: str) -> ComputeAmount:
    return ComputeAmount.parse(s)


def pretrain(child: str, flop: str = "1e24", **kw) -> DerivationEvent:
    return DerivationEvent(
        kind=EventKind.PRETRAIN, parent_ids=(), child_id=child, compute=amt(flop), **kw
    )


def simple_lineage() -> Lineage:
    nodes = [ModelNode(id="base"), ModelNode(id="ft")]
    events = [
        pretrain("base", "1e26"),
        DerivationEvent(
            kind=EventKind.FINETUNE,
            parent_ids=("base",),
            child_id="ft",
            compute=amt("1e24"),
        ),
    ]
    return Lineage(nodes, events)


class TestEventFields:
    def test_pretrain_takes_no_parents(self):
        with pytest.raises(KindFieldMismatch):
            DerivationEvent(
                kind=EventKind.PRETRAIN,
                parent_ids=("x",),
                child_id="y",
                compute=amt("1e24"),
            )

    def test_pretrain_requires_positive_compute(self):
        with pytest.raises(KindFieldMismatch):
            pretrain("x", "0")

    def test_single_parent_kinds_take_exactly_one(self):
        for kind in (
            EventKind.FINETUNE,
            EventKind.SYNTHETIC_DATA_GEN,
            EventKind.EXPAND,
            EventKind.COPY,
            EventKind.COMBINE_SOFTWARE,
        ):
            compute = (
                ComputeAmount.zero()
                if kind in (EventKind.COPY, EventKind.COMBINE_SOFTWARE)
                else amt("1e23")
            )
            with pytest.raises(KindFieldMismatch):
                DerivationEvent(kind=kind, parent_ids=(), child_id="y", compute=compute)
            with pytest.raises(KindFieldMismatch):
                DerivationEvent(
                    kind=kind, parent_ids=("a", "b"), child_id="y", compute=compute
                )

    def test_reuse_kinds_take_one_or_more_teachers(self):
        for kind in (EventKind.DISTILL, EventKind.KICKSTART, EventKind.REINCARNATE):
            with pytest.raises(KindFieldMismatch):
                DerivationEvent(kind=kind, parent_ids=(), child_id="y", compute=amt("1e23"))
            ev = DerivationEvent(
                kind=kind,
                parent_ids=("a", "b"),
                child_id="y",
                compute=amt("1e23"),
                surpass_teacher=(True if kind is EventKind.REINCARNATE else None),
            )
            assert ev.parent_ids == ("a", "b")

    def test_copy_and_combine_require_zero_compute(self):
        with pytest.raises(KindFieldMismatch):
            DerivationEvent(
                kind=EventKind.COPY, parent_ids=("a",), child_id="y", compute=amt("1e20")
            )
        ev = DerivationEvent(
            kind=EventKind.COPY, parent_ids=("a",), child_id="y", compute=ComputeAmount.zero()
        )
        assert ev.compute.is_zero

    def test_expand_savings_fraction_bounds(self):
        for bad in (-0.1, 1.0, 1.5):
            with pytest.raises(KindFieldMismatch):
                DerivationEvent(
                    kind=EventKind.EXPAND,
                    parent_ids=("a",),
                    child_id="y",
                    compute=amt("1e23"),
                    expand_savings_fraction=bad,
                )
        with pytest.raises(KindFieldMismatch):
            DerivationEvent(
                kind=EventKind.FINETUNE,
                parent_ids=("a",),
                child_id="y",
                compute=amt("1e23"),
                expand_savings_fraction=0.5,
            )

    def test_surpass_only_on_reincarnate(self):
        with pytest.raises(KindFieldMismatch):
            DerivationEvent(
                kind=EventKind.DISTILL,
                parent_ids=("a",),
                child_id="y",
                compute=amt("1e23"),
                surpass_teacher=True,
            )

    def test_self_loop_rejected_at_construction(self):
        with pytest.raises(CycleDetected):
            DerivationEvent(
                kind=EventKind.FINETUNE,
                parent_ids=("y",),
                child_id="y",
                compute=amt("1e23"),
            )


class TestGraph:
    def test_duplicate_node_ids_rejected(self):
        with pytest.raises(DuplicateId):
            Lineage([ModelNode(id="a"), ModelNode(id="a")], [])

    def test_add_event_unknown_ids(self):
        lin = simple_lineage()
        with pytest.raises(UnknownId):
            add_event(
                lin,
                DerivationEvent(
                    kind=EventKind.FINETUNE,
                    parent_ids=("ghost",),
                    child_id="ft",
                    compute=amt("1e22"),
                ),
            )

    def test_add_event_child_already_created(self):
        lin = simple_lineage()
        with pytest.raises(ChildAlreadyCreated):
            add_event(lin, pretrain("ft"))

    def test_add_event_is_append_only(self):
        lin = simple_lineage()
        lin2 = add_node(lin, ModelNode(id="ft2"))
        lin3 = add_event(
            lin2,
            DerivationEvent(
                kind=EventKind.FINETUNE,
                parent_ids=("ft",),
                child_id="ft2",
                compute=amt("1e22"),
            ),
        )
        assert len(lin.events) == 2  # original untouched
        assert len(lin3.events) == 3
        assert lin3 != lin

    def test_cycle_rejected_on_add(self):
        # base -> ft exists; deriving base from ft would close a loop
        nodes = [ModelNode(id="base"), ModelNode(id="ft")]
        lin = Lineage(nodes, [])
        lin = add_event(lin, pretrain("base"))
        lin = add_event(
            lin,
            DerivationEvent(
                kind=EventKind.FINETUNE,
                parent_ids=("base",),
                child_id="ft",
                compute=amt("1e22"),
            ),
        )
        with pytest.raises((CycleDetected, ChildAlreadyCreated)):
            add_event(
                lin,
                DerivationEvent(
                    kind=EventKind.DISTILL,
                    parent_ids=("ft",),
                    child_id="base",
                    compute=amt("1e22"),
                ),
            )

    def test_ancestors(self):
        lin = simple_lineage()
        assert ancestors(lin, "ft") == frozenset({"base"})
        assert ancestors(lin, "base") == frozenset()

    def test_reuse_teachers_walks_ancestry(self):
        nodes = [ModelNode(id="t"), ModelNode(id="s"), ModelNode(id="s2")]
        events = [
            pretrain("t", "1e26"),
            DerivationEvent(
                kind=EventKind.DISTILL, parent_ids=("t",), child_id="s", compute=amt("1e24")
            ),
            DerivationEvent(
                kind=EventKind.FINETUNE, parent_ids=("s",), child_id="s2", compute=amt("1e22")
            ),
        ]
        lin = Lineage(nodes, events)
        assert ("t", EventKind.DISTILL) in reuse_teachers(lin, "s2")

    def test_value_semantics(self):
        a = simple_lineage()
        b = simple_lineage()
        assert a == b
        assert hash(a) == hash(b)

    def test_inference_profile_validation(self):
        with pytest.raises(Exception):
            InferenceProfile(per_request_compute=ComputeAmount.zero())
        p = InferenceProfile(
            per_request_compute=amt("1e14"),
            capability_domain=CapabilityDomain.MATH_CODING,
        )
        assert p.capability_domain is CapabilityDomain.MATH_CODING


class TestValidate:
    def test_clean_lineage_validates_empty(self):
        assert validate(simple_lineage()) == []

    def test_missing_creation_event_flagged(self):
        lin = Lineage([ModelNode(id="orphan")], [])
        violations = validate(lin)
        assert any(v.rule == "MissingCreationEvent" for v in violations)

    def test_unknown_parent_flagged(self):
        lin = Lineage(
            [ModelNode(id="x")],
            [
                pretrain("x"),
            ],
        )
        # hand-build an event referencing a ghost without add_event's checks
        bad = DerivationEvent(
            kind=EventKind.FINETUNE,
            parent_ids=("ghost",),
            child_id="x2",
            compute=amt("1e20"),
        )
        lin2 = Lineage(lin.nodes, list(lin.events) + [bad])
        violations = validate(lin2)
        assert any(v.rule == "UnknownId" for v in violations)

    def test_double_creation_flagged(self):
        lin = Lineage(
            [ModelNode(id="x")],
            [pretrain("x"), pretrain("x", "2e24")],
        )
        violations = validate(lin)
        assert any(v.rule == "ChildAlreadyCreated" for v in violations)

    def test_cycle_flagged(self):
        # a <- b and b <- a, hand-built
        ev_ab = DerivationEvent(
            kind=EventKind.FINETUNE, parent_ids=("a",), child_id="b", compute=amt("1e20")
        )
        ev_ba = DerivationEvent(
            kind=EventKind.FINETUNE, parent_ids=("b",), child_id="a", compute=amt("1e20")
        )
        lin = Lineage([ModelNode(id="a"), ModelNode(id="b")], [ev_ab, ev_ba])
        violations = validate(lin)
        assert any(v.rule == "CycleDetected" for v in violations)

    def test_random_lineages_always_validate(self):
        rng = random.Random(99)
        for _ in range(200):
            lin = random_lineage(rng, n_events=rng.randint(1, 12))
            assert validate(lin) == []
