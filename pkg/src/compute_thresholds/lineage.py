"""Model provenance: nodes for trained models, typed events for how each
came to exist.

The graph is append-only and acyclic.  Every node is created by exactly one
event; an event names its child and zero or more parents.  Event kinds carry
their own field rules (arity, whether compute must be zero or positive,
which optional fields apply), checked both eagerly in add_event and in bulk
by validate().

Lineage values are immutable: add_node/add_event return new Lineage objects,
and equality is structural, independent of insertion order.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional

from .amounts import AmountError, ComputeAmount, MoneyAmount


class LineageError(ValueError):
    """Base for lineage construction and validation errors."""


class DuplicateId(LineageError):
    pass


class UnknownId(LineageError):
    pass


class CycleDetected(LineageError):
    pass


class KindFieldMismatch(LineageError):
    pass


class ChildAlreadyCreated(LineageError):
    pass


class EventKind(enum.Enum):
    PRETRAIN = "pretrain"
    FINETUNE = "finetune"
    SYNTHETIC_DATA_GEN = "synthetic_data_gen"
    DISTILL = "distill"
    KICKSTART = "kickstart"
    REINCARNATE = "reincarnate"
    EXPAND = "expand"
    COPY = "copy"
    COMBINE_SOFTWARE = "combine_software"


# Reuse kinds bottom out a student's counting chain: the child starts from a
# teacher's capabilities and only the student-side compute accrues.
REUSE_KINDS = frozenset({EventKind.DISTILL, EventKind.KICKSTART, EventKind.REINCARNATE})

# Kinds that consume no training compute at all.
ZERO_COMPUTE_KINDS = frozenset({EventKind.COPY, EventKind.COMBINE_SOFTWARE})

# Chain kinds extend an existing model's weights and take exactly one parent.
CHAIN_KINDS = frozenset(
    {
        EventKind.FINETUNE,
        EventKind.SYNTHETIC_DATA_GEN,
        EventKind.EXPAND,
        EventKind.COPY,
        EventKind.COMBINE_SOFTWARE,
    }
)


class CapabilityDomain(enum.Enum):
    GENERAL = "general"
    MATH_CODING = "math_coding"


@dataclass(frozen=True)
class InferenceProfile:
    """Deployed inference budget for one model: compute per request, and the
    capability domain whose anchor table converts excess inference into
    training-equivalent OOMs."""

    per_request_compute: ComputeAmount
    capability_domain: CapabilityDomain = CapabilityDomain.GENERAL

    def __post_init__(self) -> None:
        if self.per_request_compute.is_zero:
            raise AmountError("inference per-request compute must be positive")


@dataclass(frozen=True)
class ModelNode:
    id: str
    name: str = ""
    deployed: bool = True
    capability_domain: CapabilityDomain = CapabilityDomain.GENERAL
    inference: Optional[InferenceProfile] = None

    def __post_init__(self) -> None:
        if not self.id or not isinstance(self.id, str):
            raise LineageError(f"node id must be a non-empty string: {self.id!r}")


@dataclass(frozen=True)
class DerivationEvent:
    """One training/derivation action producing child_id from parent_ids.

    compute is the compute spent by this event alone (the student side, for
    reuse kinds).  cost is optional dollars for cost-conditioned rules.
    planned marks an announced-but-not-yet-run event; planned compute is
    excluded from realized totals but drives advance-notification duties.
    """

    kind: EventKind
    parent_ids: tuple
    child_id: str
    compute: ComputeAmount
    cost: Optional[MoneyAmount] = None
    expand_savings_fraction: Optional[float] = None
    surpass_teacher: Optional[bool] = None
    planned: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "parent_ids", tuple(self.parent_ids))
        check_event_fields(self)

    def sort_key(self):
        return (self.child_id, self.kind.value, self.compute.log10_flop, self.parent_ids)


def check_event_fields(ev: DerivationEvent) -> None:
    """Kind-specific field rules; raises KindFieldMismatch."""
    k = ev.kind
    n = len(ev.parent_ids)
    if k is EventKind.PRETRAIN:
        if n != 0:
            raise KindFieldMismatch(f"{k.value} takes no parents, got {n}")
        if ev.compute.is_zero:
            raise KindFieldMismatch("pretrain compute must be positive")
    elif k in CHAIN_KINDS:
        if n != 1:
            raise KindFieldMismatch(f"{k.value} takes exactly one parent, got {n}")
    elif k in REUSE_KINDS:
        if n < 1:
            raise KindFieldMismatch(f"{k.value} takes at least one teacher, got {n}")
    if k in ZERO_COMPUTE_KINDS and not ev.compute.is_zero:
        raise KindFieldMismatch(f"{k.value} must carry zero compute")
    if ev.expand_savings_fraction is not None:
        if k is not EventKind.EXPAND:
            raise KindFieldMismatch("expand_savings_fraction only applies to expand")
        f = ev.expand_savings_fraction
        if not (0.0 <= f < 1.0):
            raise KindFieldMismatch(f"expand_savings_fraction must be in [0, 1): {f!r}")
    if ev.surpass_teacher is not None and k is not EventKind.REINCARNATE:
        raise KindFieldMismatch("surpass_teacher only applies to reincarnate")
    if ev.child_id in ev.parent_ids:
        raise CycleDetected(f"event creates {ev.child_id} from itself")


@dataclass(frozen=True)
class Violation:
    """One validation finding: which rule, which node/event, what happened."""

    rule: str
    subject: str
    message: str


class Lineage:
    """Immutable node/event collection with precomputed lookup indexes."""

    __slots__ = ("_nodes", "_events", "_creating", "_key")

    def __init__(self, nodes: Iterable[ModelNode] = (), events: Iterable[DerivationEvent] = ()):
        by_id = {}
        for node in nodes:
            if node.id in by_id:
                raise DuplicateId(f"node id {node.id!r} given twice")
            by_id[node.id] = node
        evs = tuple(sorted(events, key=DerivationEvent.sort_key))
        creating = {}
        for ev in evs:
            creating.setdefault(ev.child_id, []).append(ev)
        self._nodes = by_id
        self._events = evs
        self._creating = creating
        self._key = (tuple(sorted(by_id.values(), key=lambda n: n.id)), evs)

    # -- accessors ---------------------------------------------------------

    @property
    def nodes(self) -> tuple:
        return self._key[0]

    @property
    def events(self) -> tuple:
        return self._events

    def node(self, node_id: str) -> ModelNode:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise UnknownId(f"no node with id {node_id!r}") from None

    def has_node(self, node_id: str) -> bool:
        return node_id in self._nodes

    def node_ids(self) -> tuple:
        return tuple(sorted(self._nodes))

    def creating_events(self, node_id: str) -> tuple:
        """All events naming node_id as child (a valid lineage has one)."""
        return tuple(self._creating.get(node_id, ()))

    def creating_event(self, node_id: str) -> DerivationEvent:
        evs = self.creating_events(node_id)
        if not evs:
            raise LineageError(f"node {node_id!r} has no creation event")
        return evs[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Lineage):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"Lineage({len(self._nodes)} nodes, {len(self._events)} events)"


def add_node(lineage: Lineage, node: ModelNode) -> Lineage:
    """New lineage with node added; DuplicateId if the id is taken."""
    if lineage.has_node(node.id):
        raise DuplicateId(f"node id {node.id!r} already present")
    return Lineage(lineage.nodes + (node,), lineage.events)


def add_event(lineage: Lineage, event: DerivationEvent) -> Lineage:
    """New lineage with event appended.

    Check order: unknown ids, then kind/field rules, then cycles, then
    double creation.  A self-loop (child among its own parents) is a cycle,
    even if the child already has a creation event.
    """
    for nid in (event.child_id,) + event.parent_ids:
        if not lineage.has_node(nid):
            raise UnknownId(f"event references unknown id {nid!r}")
    check_event_fields(event)  # raises KindFieldMismatch / CycleDetected
    for pid in event.parent_ids:
        if event.child_id == pid or event.child_id in ancestors(lineage, pid):
            raise CycleDetected(
                f"edge {pid!r} -> {event.child_id!r} would close a cycle"
            )
    if lineage.creating_events(event.child_id):
        raise ChildAlreadyCreated(f"node {event.child_id!r} already has a creation event")
    return Lineage(lineage.nodes, lineage.events + (event,))


def ancestors(lineage: Lineage, node_id: str) -> frozenset:
    """Ids of every node reachable through creation events (excludes node_id)."""
    lineage.node(node_id)  # UnknownId if absent
    seen = set()
    stack = [node_id]
    while stack:
        current = stack.pop()
        for ev in lineage.creating_events(current):
            for pid in ev.parent_ids:
                if pid not in seen:
                    seen.add(pid)
                    stack.append(pid)
    return frozenset(seen)


def reuse_teachers(lineage: Lineage, node_id: str) -> frozenset:
    """(teacher_id, kind) pairs over every reuse event that fed node_id,
    directly or through any ancestor."""
    pairs = set()
    for nid in {node_id} | set(ancestors(lineage, node_id)):
        for ev in lineage.creating_events(nid):
            if ev.kind in REUSE_KINDS:
                for pid in ev.parent_ids:
                    pairs.add((pid, ev.kind))
    return frozenset(pairs)


def validate(lineage: Lineage) -> list:
    """All structural violations, sorted by subject then rule. Empty == valid."""
    out = []
    known = set(lineage.node_ids())
    for ev in lineage.events:
        label = f"event({ev.kind.value} -> {ev.child_id})"
        for nid in (ev.child_id,) + ev.parent_ids:
            if nid not in known:
                out.append(Violation("UnknownId", label, f"references unknown id {nid!r}"))
        try:
            check_event_fields(ev)
        except CycleDetected as exc:
            out.append(Violation("CycleDetected", label, str(exc)))
        except KindFieldMismatch as exc:
            out.append(Violation("KindFieldMismatch", label, str(exc)))
    for nid in lineage.node_ids():
        n = len(lineage.creating_events(nid))
        if n == 0:
            out.append(
                Violation("MissingCreationEvent", nid, "node has no creation event")
            )
        elif n > 1:
            out.append(
                Violation("ChildAlreadyCreated", nid, f"node has {n} creation events")
            )
    out.extend(_cycle_violations(lineage, known))
    out.sort(key=lambda v: (v.subject, v.rule, v.message))
    return out


def _cycle_violations(lineage: Lineage, known: set) -> list:
    # Kahn's algorithm over parent -> child edges; leftovers sit on cycles.
    indeg = {nid: 0 for nid in known}
    children = {nid: [] for nid in known}
    for ev in lineage.events:
        if ev.child_id not in known:
            continue
        for pid in ev.parent_ids:
            if pid in known and pid != ev.child_id:
                indeg[ev.child_id] += 1
                children[pid].append(ev.child_id)
    queue = [nid for nid, d in indeg.items() if d == 0]
    while queue:
        nid = queue.pop()
        for child in children[nid]:
            indeg[child] -= 1
            if indeg[child] == 0:
                queue.append(child)
    stuck = sorted(nid for nid, d in indeg.items() if d > 0)
    if not stuck:
        return []
    return [
        Violation(
            "CycleDetected",
            ",".join(stuck),
            f"derivation edges form a cycle through {', '.join(stuck)}",
        )
    ]
