"""Compute accounting: turn a lineage plus a counting policy into the
number that gets compared against a regulatory threshold.

Two layers:

- cumulative_training_compute sums the subject's own weights chain
  (pretrain or reuse base, then fine-tunes, synthetic-data generation,
  expansions) under the policy's inclusion rules.  Teacher-side compute is
  never summed into a student: a reuse event (distill/kickstart/
  reincarnate) bottoms out the chain and contributes only its student-side
  compute.  Each event counts once, as a set, regardless of traversal
  order.

- effective_compute applies the policy's circumvention adjustments on top:
  multiplying the reuse base back up by the compute the reuse saved
  (compounding once per reuse event along the ancestry), inflating away
  expansion savings, and crediting above-optimal inference with
  training-equivalent OOMs.  Threshold-lowering adjustment variants leave
  the breakdown untouched; rule sets apply those on the threshold side.

With every adjustment switched off the two layers agree exactly, by
construction: both totals come out of the same summation code path.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from .amounts import ComputeAmount, ZERO
from .lineage import (
    REUSE_KINDS,
    DerivationEvent,
    EventKind,
    Lineage,
    ancestors,
)
from .scaling import (
    DEFAULT_CONFIG,
    OomValue,
    ScalingConfig,
    compute_optimal_inference,
    excess_inference_ooms,
    training_equivalent_ooms,
)


class AccountingError(ValueError):
    pass


class NoPretrainRoot(AccountingError):
    """The subject's weights chain never reaches a usable base creation
    event (or its base compute is zero where a denominator is needed)."""


class KindError(AccountingError):
    """Asked for a reuse multiplier of a non-reuse event kind."""


# -- policy types --------------------------------------------------------------


class FinetuneCounting(enum.Enum):
    NEVER = "never"
    ALWAYS = "always"
    IF_AGGREGATE_AT_LEAST = "if_aggregate_at_least"


@dataclass(frozen=True)
class FinetuneRule:
    mode: FinetuneCounting
    fraction: Optional[float] = None

    def __post_init__(self) -> None:
        if self.mode is FinetuneCounting.IF_AGGREGATE_AT_LEAST:
            f = self.fraction
            if f is None or math.isnan(f) or not (0.0 < f < 1.0):
                raise AccountingError(
                    f"aggregate fine-tune rule needs a fraction in (0, 1): {f!r}"
                )
        elif self.fraction is not None:
            raise AccountingError(f"{self.mode.value} takes no fraction")

    @classmethod
    def never(cls) -> "FinetuneRule":
        return cls(FinetuneCounting.NEVER)

    @classmethod
    def always(cls) -> "FinetuneRule":
        return cls(FinetuneCounting.ALWAYS)

    @classmethod
    def if_aggregate_at_least(cls, fraction: float) -> "FinetuneRule":
        return cls(FinetuneCounting.IF_AGGREGATE_AT_LEAST, fraction)


class ReuseAdjustmentKind(enum.Enum):
    NONE = "none"
    MULTIPLY_STUDENT_COMPUTE = "multiply_student_compute"
    LOWER_THRESHOLD = "lower_threshold"


@dataclass(frozen=True)
class ReuseAdjustment:
    kind: ReuseAdjustmentKind = ReuseAdjustmentKind.NONE
    factor: Optional[float] = None

    def __post_init__(self) -> None:
        if self.kind is ReuseAdjustmentKind.NONE:
            if self.factor is not None:
                raise AccountingError("no-adjustment reuse rule takes no factor")
        else:
            f = self.factor
            if f is None or math.isnan(f) or f < 1.0 or math.isinf(f):
                raise AccountingError(f"reuse factor must be >= 1: {f!r}")

    @classmethod
    def none(cls) -> "ReuseAdjustment":
        return cls()

    @classmethod
    def multiply_student_compute(cls, factor: float) -> "ReuseAdjustment":
        return cls(ReuseAdjustmentKind.MULTIPLY_STUDENT_COMPUTE, factor)

    @classmethod
    def lower_threshold(cls, factor: float) -> "ReuseAdjustment":
        return cls(ReuseAdjustmentKind.LOWER_THRESHOLD, factor)


class ExpansionAdjustmentKind(enum.Enum):
    NONE = "none"
    INFLATE_BY_MAX_SAVINGS = "inflate_by_max_savings"
    LOWER_THRESHOLD = "lower_threshold"


@dataclass(frozen=True)
class ExpansionAdjustment:
    kind: ExpansionAdjustmentKind = ExpansionAdjustmentKind.NONE
    savings_fraction: Optional[float] = None
    factor: Optional[float] = None

    def __post_init__(self) -> None:
        if self.kind is ExpansionAdjustmentKind.INFLATE_BY_MAX_SAVINGS:
            s = self.savings_fraction
            if s is None or math.isnan(s) or not (0.0 <= s < 1.0):
                raise AccountingError(f"savings fraction must be in [0, 1): {s!r}")
            if self.factor is not None:
                raise AccountingError("inflate rule takes savings_fraction, not factor")
        elif self.kind is ExpansionAdjustmentKind.LOWER_THRESHOLD:
            f = self.factor
            if f is None or math.isnan(f) or f < 1.0 or math.isinf(f):
                raise AccountingError(f"expansion threshold factor must be >= 1: {f!r}")
            if self.savings_fraction is not None:
                raise AccountingError(
                    "lower-threshold rule takes factor, not savings_fraction"
                )
        else:
            if self.savings_fraction is not None or self.factor is not None:
                raise AccountingError("no-adjustment expansion rule takes no parameters")

    @classmethod
    def none(cls) -> "ExpansionAdjustment":
        return cls()

    @classmethod
    def inflate_by_max_savings(cls, savings_fraction: float) -> "ExpansionAdjustment":
        return cls(
            ExpansionAdjustmentKind.INFLATE_BY_MAX_SAVINGS,
            savings_fraction=savings_fraction,
        )

    @classmethod
    def lower_threshold(cls, factor: float) -> "ExpansionAdjustment":
        return cls(ExpansionAdjustmentKind.LOWER_THRESHOLD, factor=factor)


@dataclass(frozen=True)
class CountingPolicy:
    """Which compute counts, and which circumvention adjustments apply."""

    count_finetune: FinetuneRule = FinetuneRule.always()
    count_synthetic_data: bool = True
    reuse_adjustment: ReuseAdjustment = ReuseAdjustment.none()
    expansion_adjustment: ExpansionAdjustment = ExpansionAdjustment.none()
    inference_adjustment: bool = False


# Default reuse multipliers: measured compute saved by starting from an
# existing model instead of from scratch.  Reincarnation defaults are the
# midpoints of the published 10-15x (matching) and 2-5x (surpassing) ranges.
DISTILL_MULTIPLIER = 10.0
KICKSTART_MULTIPLIER = 9.58
REINCARNATE_MATCH_MULTIPLIER = 12.5
REINCARNATE_SURPASS_MULTIPLIER = 3.5


def reuse_multiplier(
    kind: EventKind,
    surpass_teacher: bool = False,
    policy: Optional[CountingPolicy] = None,
) -> float:
    """Compute-saved factor for one reuse event.

    A policy with an explicit reuse factor applies it uniformly to every
    reuse kind; otherwise the per-kind defaults apply.
    """
    if kind not in REUSE_KINDS:
        raise KindError(f"{kind.value} is not a reuse kind")
    if policy is not None and policy.reuse_adjustment.kind is not ReuseAdjustmentKind.NONE:
        return float(policy.reuse_adjustment.factor)
    if kind is EventKind.DISTILL:
        return DISTILL_MULTIPLIER
    if kind is EventKind.KICKSTART:
        return KICKSTART_MULTIPLIER
    if surpass_teacher:
        return REINCARNATE_SURPASS_MULTIPLIER
    return REINCARNATE_MATCH_MULTIPLIER


# -- breakdowns ----------------------------------------------------------------


@dataclass(frozen=True)
class ReuseEventRecord:
    """One reuse event on the subject's ancestry: which teachers fed it and
    the multiplier the policy applied to the student base (1.0 when the
    policy applies none; the lower-threshold dual records its factor here
    too, acting on the threshold side)."""

    event_child_id: str
    kind: EventKind
    teacher_ids: tuple
    multiplier: float


@dataclass(frozen=True)
class ComputeBreakdown:
    """Itemized accounting result.

    pretrain holds the base creation compute at the bottom of the subject's
    weights chain: a pretraining run, or the student-side compute of the
    reuse event the chain bottoms out at (base_kind says which).  effective
    includes every adjustment the policy switched on; with all adjustments
    off it equals cumulative exactly.
    """

    subject: str
    pretrain: ComputeAmount
    base_kind: EventKind
    finetune_total: ComputeAmount
    finetune_counted: bool
    synthetic_data: ComputeAmount
    synthetic_data_counted: bool
    expansion: ComputeAmount
    expansion_present: bool
    reuse_events: tuple
    inference_equivalent_ooms: OomValue
    cumulative: ComputeAmount
    effective: ComputeAmount
    notes: tuple

    @property
    def counted_finetune(self) -> ComputeAmount:
        return self.finetune_total if self.finetune_counted else ZERO

    @property
    def counted_synthetic_data(self) -> ComputeAmount:
        return self.synthetic_data if self.synthetic_data_counted else ZERO


def _chain_to_base(lineage: Lineage, node_id: str) -> list:
    """Creation events from the base outward to node_id (inclusive).

    Follows the single-parent chain kinds; stops at pretrain or any reuse
    kind.  Raises NoPretrainRoot when the chain dead-ends on a node with no
    creation event.
    """
    chain = []
    current = node_id
    guard = 0
    limit = len(lineage.events) + 1
    while True:
        guard += 1
        if guard > limit:
            raise NoPretrainRoot(f"weights chain of {node_id!r} does not terminate")
        evs = lineage.creating_events(current)
        if not evs:
            raise NoPretrainRoot(f"node {current!r} has no creation event")
        ev = evs[0]
        chain.append(ev)
        if ev.kind is EventKind.PRETRAIN or ev.kind in REUSE_KINDS:
            chain.reverse()
            return chain
        current = ev.parent_ids[0]


def _event_compute(ev: DerivationEvent, include_planned: bool) -> ComputeAmount:
    if ev.planned and not include_planned:
        return ZERO
    return ev.compute


def aggregate_finetune_fraction(
    lineage: Lineage, node_id: str, include_planned: bool = True
) -> float:
    """Total chain fine-tune compute as a linear fraction of the base
    creation compute.  0.0 for a bare pretrain; for reuse-derived models
    the denominator is the student-side creation compute."""
    lineage.node(node_id)
    chain = _chain_to_base(lineage, node_id)
    base = _event_compute(chain[0], include_planned)
    ft = ZERO
    for ev in chain[1:]:
        if ev.kind is EventKind.FINETUNE:
            ft = ft + _event_compute(ev, include_planned)
    if base.is_zero:
        if ft.is_zero:
            return 0.0
        raise NoPretrainRoot(
            f"base creation compute of {node_id!r} is zero; fraction undefined"
        )
    return ft.ratio_to(base)


def finetune_reporting_events(
    lineage: Lineage,
    node_id: str,
    fraction_threshold: float,
    include_planned: bool = True,
) -> list:
    """Walk the chain outward and flag the fine-tune event at which the
    running aggregate fraction first reaches the threshold.

    Returns [(event_child_id, fraction_at_that_point)]; empty when the
    aggregate never gets there.  One report per chain: later fine-tunes
    fold into the already-reported aggregate.
    """
    if not (fraction_threshold > 0.0):
        raise AccountingError(
            f"fraction threshold must be positive: {fraction_threshold!r}"
        )
    lineage.node(node_id)
    chain = _chain_to_base(lineage, node_id)
    base = _event_compute(chain[0], include_planned)
    if base.is_zero:
        return []
    running = ZERO
    for ev in chain[1:]:
        if ev.kind is not EventKind.FINETUNE:
            continue
        running = running + _event_compute(ev, include_planned)
        fraction = running.ratio_to(base)
        if fraction >= fraction_threshold:
            return [(ev.child_id, fraction)]
    return []


def cumulative_training_compute(
    lineage: Lineage,
    node_id: str,
    policy: CountingPolicy,
    include_planned: bool = True,
) -> ComputeBreakdown:
    """Sum the subject's weights chain under the policy's inclusion rules,
    with no circumvention adjustments applied."""
    return _breakdown(
        lineage, node_id, policy, DEFAULT_CONFIG, include_planned, adjusted=False
    )


def effective_compute(
    lineage: Lineage,
    node_id: str,
    policy: CountingPolicy,
    cfg: ScalingConfig = DEFAULT_CONFIG,
    include_planned: bool = True,
) -> ComputeBreakdown:
    """Cumulative total plus the policy's reuse/expansion/inference
    adjustments."""
    return _breakdown(lineage, node_id, policy, cfg, include_planned, adjusted=True)


def _breakdown(
    lineage: Lineage,
    node_id: str,
    policy: CountingPolicy,
    cfg: ScalingConfig,
    include_planned: bool,
    adjusted: bool,
) -> ComputeBreakdown:
    node = lineage.node(node_id)
    chain = _chain_to_base(lineage, node_id)
    notes = []

    base_ev = chain[0]
    base = _event_compute(base_ev, include_planned)
    ft = ZERO
    synth = ZERO
    expansion = ZERO
    expand_fractions = []
    expansion_present = False
    for ev in chain[1:]:
        amt = _event_compute(ev, include_planned)
        if ev.kind is EventKind.FINETUNE:
            ft = ft + amt
        elif ev.kind is EventKind.SYNTHETIC_DATA_GEN:
            synth = synth + amt
        elif ev.kind is EventKind.EXPAND:
            expansion = expansion + amt
            expansion_present = True
            if ev.expand_savings_fraction is not None:
                expand_fractions.append(ev.expand_savings_fraction)

    if base_ev.kind in REUSE_KINDS:
        notes.append(
            f"base is student-side compute of a {base_ev.kind.value} event; "
            "teacher training runs are not summed"
        )
    if not include_planned and any(ev.planned for ev in chain):
        notes.append("planned events excluded from totals")

    # fine-tune inclusion
    rule = policy.count_finetune
    if rule.mode is FinetuneCounting.ALWAYS:
        ft_counted = True
    elif rule.mode is FinetuneCounting.NEVER:
        ft_counted = False
        if not ft.is_zero:
            notes.append("fine-tune compute excluded by policy")
    else:
        if ft.is_zero:
            ft_counted = False
        elif base.is_zero:
            ft_counted = True
            notes.append("zero base compute; aggregate fine-tune counts unconditionally")
        else:
            fraction = ft.ratio_to(base)
            if fraction >= rule.fraction:
                ft_counted = True
                notes.append(
                    f"aggregate fine-tune at {fraction:.3g} of base reaches the "
                    f"{rule.fraction:.3g} counting threshold"
                )
            else:
                ft_counted = False
                notes.append(
                    f"aggregate fine-tune at {fraction:.3g} of base stays below the "
                    f"{rule.fraction:.3g} counting threshold; excluded"
                )
    synth_counted = policy.count_synthetic_data
    if not synth_counted and not synth.is_zero:
        notes.append("synthetic-data generation compute excluded by policy")

    reuse_events = _reuse_event_records(lineage, node_id, policy)

    counted_ft = ft if ft_counted else ZERO
    counted_synth = synth if synth_counted else ZERO

    cumulative = base + counted_ft + counted_synth + expansion

    effective_base = base
    inference_ooms = OomValue(0.0)
    if adjusted:
        radj = policy.reuse_adjustment
        if radj.kind is ReuseAdjustmentKind.MULTIPLY_STUDENT_COMPUTE and reuse_events:
            factor = 1.0
            for record in reuse_events:
                factor *= record.multiplier
            effective_base = base.scaled(factor)
            notes.append(
                f"reuse adjustment multiplies the {base.compact()} student base by "
                f"{factor:g} across {len(reuse_events)} reuse event(s)"
            )
    effective = effective_base + counted_ft + counted_synth + expansion

    if adjusted:
        eadj = policy.expansion_adjustment
        if (
            eadj.kind is ExpansionAdjustmentKind.INFLATE_BY_MAX_SAVINGS
            and expansion_present
        ):
            # "max savings" is the policy-level estimate; using it alone keeps
            # this encoding exactly dual to dividing the threshold by 1/(1-s).
            s = eadj.savings_fraction
            if s > 0.0:
                effective = effective.scaled(1.0 / (1.0 - s))
                notes.append(
                    f"expansion adjustment inflates the total by 1/(1-{s:g}) "
                    "to undo assumed expansion savings"
                )
            claimed = max(expand_fractions, default=0.0)
            if claimed > s:
                notes.append(
                    f"an expansion event claims {claimed:g} savings, above the "
                    f"policy's assumed {s:g}; the policy-level estimate governs"
                )
        if (
            policy.inference_adjustment
            and node.inference is not None
            and not cumulative.is_zero
        ):
            # Compute-optimal inference reads off the physical training run,
            # not the inflated equivalents.
            optimal = compute_optimal_inference(cumulative, cfg)
            excess = excess_inference_ooms(node.inference.per_request_compute, optimal)
            if excess.ooms > 0.0:
                inference_ooms = training_equivalent_ooms(
                    excess, node.inference.capability_domain, cfg
                )
                effective = effective.shifted_ooms(inference_ooms.ooms)
                notes.append(
                    f"inference {excess.ooms:.3g} OOMs above optimal credits "
                    f"{inference_ooms.ooms:.3g} training-equivalent OOMs"
                )

    return ComputeBreakdown(
        subject=node_id,
        pretrain=base,
        base_kind=base_ev.kind,
        finetune_total=ft,
        finetune_counted=ft_counted,
        synthetic_data=synth,
        synthetic_data_counted=synth_counted,
        expansion=expansion,
        expansion_present=expansion_present,
        reuse_events=reuse_events,
        inference_equivalent_ooms=inference_ooms,
        cumulative=cumulative,
        effective=effective if adjusted else cumulative,
        notes=tuple(notes),
    )


def _reuse_event_records(
    lineage: Lineage, node_id: str, policy: CountingPolicy
) -> tuple:
    none_adjustment = policy.reuse_adjustment.kind is ReuseAdjustmentKind.NONE
    records = []
    for nid in sorted({node_id} | set(ancestors(lineage, node_id))):
        for ev in lineage.creating_events(nid):
            if ev.kind in REUSE_KINDS:
                records.append(
                    ReuseEventRecord(
                        event_child_id=ev.child_id,
                        kind=ev.kind,
                        teacher_ids=tuple(sorted(ev.parent_ids)),
                        multiplier=1.0
                        if none_adjustment
                        else reuse_multiplier(ev.kind, bool(ev.surpass_teacher), policy),
                    )
                )
    records.sort(key=lambda r: r.event_child_id)
    return tuple(records)
