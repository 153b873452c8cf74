"""Shared fixtures: deterministic hypothesis profile, golden scenario
loading, and seeded random lineage/scenario builders used by the fuzz and
acceptance tests."""
from __future__ import annotations

import random
from pathlib import Path

from hypothesis import HealthCheck, settings

from compute_thresholds.amounts import ComputeAmount, MoneyAmount
from compute_thresholds.lineage import (
    DerivationEvent,
    EventKind,
    Lineage,
    ModelNode,
)

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"

GOLDEN_SCENARIOS = (
    "inference-deployment.json",
    "finetune-threshold.json",
    "distill-frontier.json",
    "expansion-dispute.json",
    "sb1047-frontier.json",
)


def golden_text(name: str) -> str:
    return (SCENARIO_DIR / name).read_text(encoding="utf-8")


def random_amount(rng: random.Random, lo: float = 20.0, hi: float = 27.5) -> ComputeAmount:
    return ComputeAmount.from_log10(rng.uniform(lo, hi))


def random_cost(rng: random.Random):
    if rng.random() < 0.4:
        return None
    return MoneyAmount(10.0 ** rng.uniform(5.5, 8.9))


_KIND_WEIGHTS = (
    (EventKind.PRETRAIN, 5),
    (EventKind.FINETUNE, 6),
    (EventKind.SYNTHETIC_DATA_GEN, 2),
    (EventKind.DISTILL, 3),
    (EventKind.KICKSTART, 1),
    (EventKind.REINCARNATE, 1),
    (EventKind.EXPAND, 3),
    (EventKind.COPY, 2),
    (EventKind.COMBINE_SOFTWARE, 1),
)
_KIND_POOL = [k for k, w in _KIND_WEIGHTS for _ in range(w)]


def random_lineage(
    rng: random.Random,
    n_events: int = 8,
    max_expand_fraction: float = 0.9,
    amount_range=(20.0, 27.5),
) -> Lineage:
    """A small random but always-valid lineage: the first event is a
    pretrain, later events pick parents among existing nodes, every node
    has exactly one creation event."""
    lo, hi = amount_range
    nodes = [ModelNode(id="m0")]
    events = [
        DerivationEvent(
            kind=EventKind.PRETRAIN,
            parent_ids=(),
            child_id="m0",
            compute=random_amount(rng, lo, hi),
            cost=random_cost(rng),
        )
    ]
    ids = ["m0"]
    for i in range(1, n_events):
        nid = f"m{i}"
        kind = rng.choice(_KIND_POOL)
        if kind is EventKind.PRETRAIN:
            parents = ()
        elif kind in (EventKind.DISTILL, EventKind.KICKSTART, EventKind.REINCARNATE):
            k = 1 if len(ids) == 1 or rng.random() < 0.7 else 2
            parents = tuple(rng.sample(ids, k))
        else:
            parents = (rng.choice(ids),)
        zero = kind in (EventKind.COPY, EventKind.COMBINE_SOFTWARE)
        events.append(
            DerivationEvent(
                kind=kind,
                parent_ids=parents,
                child_id=nid,
                compute=ComputeAmount.zero() if zero else random_amount(rng, lo, hi),
                cost=None if zero else random_cost(rng),
                expand_savings_fraction=(
                    rng.uniform(0.0, max_expand_fraction)
                    if kind is EventKind.EXPAND and rng.random() < 0.6
                    else None
                ),
                surpass_teacher=(
                    rng.random() < 0.5 if kind is EventKind.REINCARNATE else None
                ),
            )
        )
        nodes.append(ModelNode(id=nid, deployed=rng.random() < 0.8))
        ids.append(nid)
    return Lineage(nodes, events)


def random_subject(rng: random.Random, lineage: Lineage) -> str:
    return rng.choice([n.id for n in lineage.nodes])
