"""Jurisdiction rule engines: apply a threshold rule set to a lineage and
produce a verdict with itemized accounting, triggered rules, citations, and
obligations.

Covered rule families:

- EO 14110 Sec. 4.2(b): reporting duty above 1e26 FLOP, strict "greater
  than".  The literal reading is silent on fine-tuning and continued
  training of expanded models, so the literal rule set carries an ambiguity
  probe: when counting the questionable compute would change the outcome,
  the verdict is Ambiguous rather than a coin-flip.

- EU AI Act Art. 51(2): systemic-risk presumption above 1e25 FLOP
  cumulative (pre-training, synthetic data generation, fine-tuning per
  Recital 111), with the Art. 52 two-week notification obligation,
  including the "known that it will be met" prong for planned training.

- Vetoed California SB 1047 Sec. 22602: covered models (>1e26 FLOP and
  >$100M, or fine-tuned from a covered model with >=3e25 FLOP and >$10M)
  and the four covered-model-derivative categories.

- Patch rule sets closing the gaps the literal texts leave: aggregate
  fine-tune counting at 15%, reuse multipliers with teacher propagation,
  expansion savings inflation, and inference-compute equivalence.  Reuse
  and expansion patches ship in both encodings (threshold-lowering and
  compute-inflation); the two are exact duals and always agree.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Mapping, Optional

from .amounts import ComputeAmount, MoneyAmount, ZERO
from .lineage import (
    REUSE_KINDS,
    EventKind,
    Lineage,
    LineageError,
    reuse_teachers,
)
from .accounting import (
    ComputeBreakdown,
    CountingPolicy,
    ExpansionAdjustment,
    ExpansionAdjustmentKind,
    FinetuneRule,
    ReuseAdjustment,
    ReuseAdjustmentKind,
    cumulative_training_compute,
    effective_compute,
)
from .scaling import DEFAULT_CONFIG, ScalingConfig

_LN10 = math.log(10.0)


class RulesetError(ValueError):
    pass


class RecursionDepthExceeded(RulesetError):
    """Teacher-propagation recursion outran the node count (impossible in a
    valid DAG; defensive)."""


class Jurisdiction(enum.Enum):
    US_FEDERAL = "us-federal"
    EU = "eu"
    CA_STATE = "ca-state"


class CoverageStatus(enum.Enum):
    COVERED = "covered"
    NOT_COVERED = "not_covered"
    AMBIGUOUS = "ambiguous"


class ClassificationCategory(enum.Enum):
    COVERED_MODEL = "covered_model"
    COVERED_MODEL_DERIVATIVE = "covered_model_derivative"
    NEITHER = "neither"


class DerivativeKind(enum.Enum):
    UNMODIFIED = "unmodified"
    NON_FINETUNE_MODS = "non_finetune_mods"
    SMALL_FINETUNE = "small_finetune"
    COMBINED_SOFTWARE = "combined_software"


@dataclass(frozen=True)
class Classification:
    category: ClassificationCategory
    derivative_kind: Optional[DerivativeKind] = None

    def __post_init__(self) -> None:
        is_derivative = self.category is ClassificationCategory.COVERED_MODEL_DERIVATIVE
        if is_derivative and self.derivative_kind is None:
            raise RulesetError("derivative classification needs a kind")
        if not is_derivative and self.derivative_kind is not None:
            raise RulesetError(f"{self.category.value} takes no derivative kind")


@dataclass(frozen=True)
class NotificationRule:
    window_days: int

    def __post_init__(self) -> None:
        if not isinstance(self.window_days, int) or self.window_days <= 0:
            raise RulesetError(f"notification window must be a positive int: {self.window_days!r}")


@dataclass(frozen=True)
class Obligation:
    kind: str
    description: str = ""
    deadline_days: Optional[int] = None


@dataclass(frozen=True)
class Ruleset:
    id: str
    jurisdiction: Jurisdiction
    threshold: ComputeAmount
    counting: CountingPolicy
    cost_threshold: Optional[MoneyAmount] = None
    teacher_propagation: bool = False
    notification_rule: Optional[NotificationRule] = None
    ambiguity_flagging: bool = False
    sb1047_classification: bool = False
    description: str = ""
    citations: tuple = ()

    def __post_init__(self) -> None:
        if not self.id:
            raise RulesetError("ruleset id must be non-empty")
        if self.threshold.is_zero:
            raise RulesetError("ruleset threshold must be positive")
        object.__setattr__(self, "citations", tuple(self.citations))


@dataclass(frozen=True)
class Verdict:
    ruleset_id: str
    subject: str
    status: CoverageStatus
    threshold: ComputeAmount
    comparison_threshold: ComputeAmount
    comparison_compute: ComputeAmount
    breakdown: ComputeBreakdown
    classification: Optional[Classification] = None
    triggered_rules: tuple = ()
    obligations: tuple = ()
    citations: tuple = ()
    notes: tuple = ()

    def __post_init__(self) -> None:
        if self.status is CoverageStatus.COVERED and not self.triggered_rules:
            raise RulesetError("covered verdicts must name at least one triggered rule")
        if self.status is CoverageStatus.AMBIGUOUS and not self.notes:
            raise RulesetError("ambiguous verdicts must carry an explanatory note")


# -- statutory constants --------------------------------------------------------

EO14110_THRESHOLD = ComputeAmount.parse("1e26")
EU_AIACT_THRESHOLD = ComputeAmount.parse("1e25")
EU_NOTIFICATION_DAYS = 14
SB1047_COMPUTE_THRESHOLD = ComputeAmount.parse("1e26")
SB1047_COST_THRESHOLD = MoneyAmount(100_000_000.0)
SB1047_FINETUNE_COMPUTE_THRESHOLD = ComputeAmount.parse("3e25")
SB1047_FINETUNE_COST_THRESHOLD = MoneyAmount(10_000_000.0)
AGGREGATE_FINETUNE_FRACTION = 0.15
REUSE_PATCH_FACTOR = 10.0
EXPANSION_MODERATE_FACTOR = 2.0  # 50% savings assumed
EXPANSION_CONSERVATIVE_FACTOR = 5.0  # 80% savings; nominal floor 2e25 / 2e24
EXPANSION_MODERATE_SAVINGS = 0.5
EXPANSION_CONSERVATIVE_SAVINGS = 0.8

_EO_CITE = (
    'EO 14110 Sec. 4.2(b): "any model that was trained using a quantity of '
    'computing power greater than 10^26 integer or floating-point operations" '
    "must comply with the Sec. 4.2(a) reporting requirements"
)
_AIACT_51_CITE = (
    "EU AI Act Art. 51(2): presumed high-impact capabilities \"when the "
    "cumulative amount of computation used for its training measured in "
    'floating point operations is greater than 10^25"'
)
_AIACT_R111_CITE = (
    "EU AI Act Recital 111: cumulative training compute spans activities "
    '"intended to enhance the capabilities of the model prior to deployment, '
    'such as pre-training, synthetic data generation and fine-tuning"'
)
_AIACT_52_CITE = (
    "EU AI Act Art. 52(1): the provider \"shall notify the Commission without "
    'delay and in any event within two weeks" (14 days) after the requirement '
    "is met or known that it will be met"
)
_SB1047_COVERED_CITE = (
    "SB 1047 (vetoed) Sec. 22602: covered model limb (i) - \"trained using a "
    "quantity of computing power greater than 10^26 integer or floating-point "
    'operations, the cost of which exceeds one hundred million dollars '
    '($100,000,000)"'
)
_SB1047_FT_CITE = (
    "SB 1047 (vetoed) Sec. 22602: covered model limb (ii) - \"created by "
    "fine-tuning a covered model using a quantity of computing power equal to "
    'or greater than three times 10^25 integer or floating-point operations" '
    "(3e25), at a cost exceeding ten million dollars ($10,000,000)"
)
_SB1047_DERIVATIVE_CITE = (
    "SB 1047 (vetoed) Sec. 22602: covered model derivative - an unmodified "
    "copy, a copy \"subjected to post-training modifications unrelated to "
    'fine-tuning", a copy fine-tuned with "a quantity of computing power not '
    'exceeding three times 10^25" (3e25), or a copy "combined with other software"'
)
_FT15_CITE = (
    "patch: count aggregate fine-tuning toward the threshold once it reaches "
    "15% of the original training compute (the minimum reliably detectable "
    "capability change, ~14.4%, rounded up)"
)
_REUSE_CITE = (
    "patch: model reuse (distillation ~10x, kickstarting 9.58x, reincarnation "
    "10-15x matching / 2-5x surpassing) saves up to ~10x compute; the "
    "threshold is lowered by the savings factor when reuse is present"
    " - 1e26 -> 1e25 (US), 1e25 -> 1e24 (EU) - or equivalently the student "
    "compute is inflated by 10x"
)
_TEACHER_CITE = (
    "patch: coverage propagates from covered teacher models to students, "
    "whether the teacher is launched or kept incognito"
)
_EXPANSION_CITE = (
    "patch: model expansion saves 20-76% of compute (~50% in the central "
    "case); thresholds drop to 5e25 (moderate) / 2e25 (conservative) in the "
    "US and 5e24 / 2e24 in the EU when expansion is present, or equivalently "
    "the total is inflated by 1/(1-savings)"
)
_INFERENCE_CITE = (
    "patch: inference run above the compute-optimal point (roughly "
    "0.1*sqrt(training), i.e. ~1e11 FLOP/request at 1e24) converts to "
    "training-equivalent compute: 2-3 extra OOMs of inference ~ 2 OOMs of "
    "training; 5-6 extra OOMs ~ 3-4 OOMs on math/coding tasks"
)

_US_LITERAL_COUNTING = CountingPolicy(
    count_finetune=FinetuneRule.never(),
    count_synthetic_data=False,
)
_EU_LITERAL_COUNTING = CountingPolicy(
    count_finetune=FinetuneRule.always(),
    count_synthetic_data=True,
)
_EU_NOTIFY = NotificationRule(EU_NOTIFICATION_DAYS)


def builtin_rulesets() -> tuple:
    """Every built-in rule set, in registry (id) order."""
    us = Jurisdiction.US_FEDERAL
    eu = Jurisdiction.EU

    def expansion_pair(prefix, jur, threshold, counting, factor, savings, label, notify):
        lower = Ruleset(
            id=f"{prefix}-expansion-{label}",
            jurisdiction=jur,
            threshold=threshold,
            counting=replace(
                counting,
                expansion_adjustment=ExpansionAdjustment.lower_threshold(factor),
            ),
            notification_rule=notify,
            description=(
                f"{label.capitalize()} expansion patch, threshold-lowering encoding: "
                f"threshold {threshold.compact()} drops to "
                f"{threshold.scaled(1.0 / factor).compact()} when expansion is present."
            ),
            citations=(_EXPANSION_CITE, _EO_CITE if jur is us else _AIACT_51_CITE),
        )
        inflate = Ruleset(
            id=f"{prefix}-expansion-{label}-inflate",
            jurisdiction=jur,
            threshold=threshold,
            counting=replace(
                counting,
                expansion_adjustment=ExpansionAdjustment.inflate_by_max_savings(savings),
            ),
            notification_rule=notify,
            description=(
                f"{label.capitalize()} expansion patch, compute-inflation encoding: "
                f"totals divide by (1-{savings:g}) when expansion is present. "
                f"Exact dual of {prefix}-expansion-{label}."
            ),
            citations=(_EXPANSION_CITE, _EO_CITE if jur is us else _AIACT_51_CITE),
        )
        return [lower, inflate]

    def reuse_pair(prefix, jur, threshold, counting, notify):
        lowered = threshold.scaled(1.0 / REUSE_PATCH_FACTOR)
        lower = Ruleset(
            id=f"{prefix}-reuse-patch",
            jurisdiction=jur,
            threshold=threshold,
            counting=replace(
                counting,
                reuse_adjustment=ReuseAdjustment.lower_threshold(REUSE_PATCH_FACTOR),
            ),
            teacher_propagation=True,
            notification_rule=notify,
            description=(
                f"Reuse patch, threshold-lowering encoding: threshold "
                f"{threshold.compact()} treated as {lowered.compact()} when "
                "distillation/kickstarting/reincarnation is present (decided via "
                "the exact compute-inflation dual), plus teacher propagation."
            ),
            citations=(_REUSE_CITE, _TEACHER_CITE, _EO_CITE if jur is us else _AIACT_51_CITE),
        )
        inflate = Ruleset(
            id=f"{prefix}-reuse-patch-inflate",
            jurisdiction=jur,
            threshold=threshold,
            counting=replace(
                counting,
                reuse_adjustment=ReuseAdjustment.multiply_student_compute(REUSE_PATCH_FACTOR),
            ),
            teacher_propagation=True,
            notification_rule=notify,
            description=(
                "Reuse patch, compute-inflation encoding: student-side creation "
                f"compute multiplied by {REUSE_PATCH_FACTOR:g} per reuse event, "
                f"plus teacher propagation. Exact dual of {prefix}-reuse-patch."
            ),
            citations=(_REUSE_CITE, _TEACHER_CITE, _EO_CITE if jur is us else _AIACT_51_CITE),
        )
        return [lower, inflate]

    out = [
        Ruleset(
            id="eo14110-literal",
            jurisdiction=us,
            threshold=EO14110_THRESHOLD,
            counting=_US_LITERAL_COUNTING,
            ambiguity_flagging=True,
            description=(
                "EO 14110 Sec. 4.2(b) read literally: pretraining-run compute "
                "against 1e26, strict greater-than. Returns Ambiguous when the "
                "text's silence on fine-tuning or expanded-model continuation "
                "would change the outcome."
            ),
            citations=(_EO_CITE,),
        ),
        Ruleset(
            id="eo14110-ft15",
            jurisdiction=us,
            threshold=EO14110_THRESHOLD,
            counting=replace(
                _US_LITERAL_COUNTING,
                count_finetune=FinetuneRule.if_aggregate_at_least(AGGREGATE_FINETUNE_FRACTION),
            ),
            description=(
                "EO 14110 threshold with the aggregate fine-tune patch: "
                "fine-tuning counts toward 1e26 once it reaches 15% of the "
                "original training compute, in one instance or in aggregate."
            ),
            citations=(_EO_CITE, _FT15_CITE),
        ),
        Ruleset(
            id="eu-aiact-literal",
            jurisdiction=eu,
            threshold=EU_AIACT_THRESHOLD,
            counting=_EU_LITERAL_COUNTING,
            notification_rule=_EU_NOTIFY,
            description=(
                "EU AI Act Art. 51(2) read literally: cumulative compute "
                "(pre-training + synthetic data generation + fine-tuning) "
                "against 1e25, strict greater-than; Art. 52 notification "
                "within 14 days, including for planned crossings."
            ),
            citations=(_AIACT_51_CITE, _AIACT_R111_CITE, _AIACT_52_CITE),
        ),
    ]
    out += reuse_pair("us", us, EO14110_THRESHOLD, _US_LITERAL_COUNTING, None)
    out += reuse_pair("eu", eu, EU_AIACT_THRESHOLD, _EU_LITERAL_COUNTING, _EU_NOTIFY)
    out += expansion_pair(
        "us", us, EO14110_THRESHOLD, _US_LITERAL_COUNTING,
        EXPANSION_MODERATE_FACTOR, EXPANSION_MODERATE_SAVINGS, "moderate", None,
    )
    out += expansion_pair(
        "us", us, EO14110_THRESHOLD, _US_LITERAL_COUNTING,
        EXPANSION_CONSERVATIVE_FACTOR, EXPANSION_CONSERVATIVE_SAVINGS, "conservative", None,
    )
    out += expansion_pair(
        "eu", eu, EU_AIACT_THRESHOLD, _EU_LITERAL_COUNTING,
        EXPANSION_MODERATE_FACTOR, EXPANSION_MODERATE_SAVINGS, "moderate", _EU_NOTIFY,
    )
    out += expansion_pair(
        "eu", eu, EU_AIACT_THRESHOLD, _EU_LITERAL_COUNTING,
        EXPANSION_CONSERVATIVE_FACTOR, EXPANSION_CONSERVATIVE_SAVINGS, "conservative", _EU_NOTIFY,
    )
    out += [
        Ruleset(
            id="us-inference-patch",
            jurisdiction=us,
            threshold=EO14110_THRESHOLD,
            counting=replace(_US_LITERAL_COUNTING, inference_adjustment=True),
            description=(
                "EO 14110 threshold with the inference patch: deployed "
                "above-optimal inference converts to training-equivalent OOMs "
                "before the 1e26 comparison."
            ),
            citations=(_EO_CITE, _INFERENCE_CITE),
        ),
        Ruleset(
            id="eu-inference-patch",
            jurisdiction=eu,
            threshold=EU_AIACT_THRESHOLD,
            counting=replace(_EU_LITERAL_COUNTING, inference_adjustment=True),
            notification_rule=_EU_NOTIFY,
            description=(
                "AI Act threshold with the inference patch: deployed "
                "above-optimal inference converts to training-equivalent OOMs "
                "before the 1e25 comparison."
            ),
            citations=(_AIACT_51_CITE, _INFERENCE_CITE, _AIACT_52_CITE),
        ),
        Ruleset(
            id="sb1047-vetoed",
            jurisdiction=Jurisdiction.CA_STATE,
            threshold=SB1047_COMPUTE_THRESHOLD,
            cost_threshold=SB1047_COST_THRESHOLD,
            counting=CountingPolicy(),
            sb1047_classification=True,
            description=(
                "Vetoed SB 1047 Sec. 22602 classification: covered model "
                "(>1e26 FLOP and >$100M, or fine-tuned from a covered model "
                "with >=3e25 FLOP and >$10M), covered model derivative "
                "(unmodified copy / non-fine-tune modifications / fine-tune "
                "not exceeding 3e25 / combined with other software), or neither."
            ),
            citations=(_SB1047_COVERED_CITE, _SB1047_FT_CITE, _SB1047_DERIVATIVE_CITE),
        ),
        Ruleset(
            id="us-recommended",
            jurisdiction=us,
            threshold=EO14110_THRESHOLD,
            counting=CountingPolicy(
                count_finetune=FinetuneRule.if_aggregate_at_least(AGGREGATE_FINETUNE_FRACTION),
                count_synthetic_data=True,
                reuse_adjustment=ReuseAdjustment.multiply_student_compute(REUSE_PATCH_FACTOR),
                expansion_adjustment=ExpansionAdjustment.inflate_by_max_savings(
                    EXPANSION_MODERATE_SAVINGS
                ),
                inference_adjustment=True,
            ),
            teacher_propagation=True,
            description=(
                "Composite US rule set enabling every patch: 15% aggregate "
                "fine-tune counting, 10x reuse inflation with teacher "
                "propagation, moderate expansion inflation, and the inference "
                "adjustment, all against the EO 14110 1e26 threshold."
            ),
            citations=(_EO_CITE, _FT15_CITE, _REUSE_CITE, _TEACHER_CITE, _EXPANSION_CITE, _INFERENCE_CITE),
        ),
        Ruleset(
            id="eu-recommended",
            jurisdiction=eu,
            threshold=EU_AIACT_THRESHOLD,
            counting=CountingPolicy(
                count_finetune=FinetuneRule.if_aggregate_at_least(AGGREGATE_FINETUNE_FRACTION),
                count_synthetic_data=True,
                reuse_adjustment=ReuseAdjustment.multiply_student_compute(REUSE_PATCH_FACTOR),
                expansion_adjustment=ExpansionAdjustment.inflate_by_max_savings(
                    EXPANSION_MODERATE_SAVINGS
                ),
                inference_adjustment=True,
            ),
            teacher_propagation=True,
            notification_rule=_EU_NOTIFY,
            description=(
                "Composite EU rule set enabling every patch against the AI Act "
                "1e25 threshold, with the Art. 52 notification duty."
            ),
            citations=(
                _AIACT_51_CITE, _AIACT_R111_CITE, _AIACT_52_CITE,
                _FT15_CITE, _REUSE_CITE, _TEACHER_CITE, _EXPANSION_CITE, _INFERENCE_CITE,
            ),
        ),
    ]
    out.sort(key=lambda r: r.id)
    return tuple(out)


def builtin_registry() -> dict:
    """id -> Ruleset for every built-in, in id order."""
    return {r.id: r for r in builtin_rulesets()}


# -- evaluation -----------------------------------------------------------------


def _log_minus(a: ComputeAmount, b: ComputeAmount) -> ComputeAmount:
    """max(a - b, 0) in the log domain."""
    if b.is_zero:
        return a
    if b.log10_flop >= a.log10_flop:
        return ZERO
    x = 10.0 ** (b.log10_flop - a.log10_flop)
    return ComputeAmount(a.log10_flop + math.log1p(-x) / _LN10)


def evaluate(
    lineage: Lineage,
    node_id: str,
    ruleset: Ruleset,
    cfg: ScalingConfig = DEFAULT_CONFIG,
) -> Verdict:
    """Apply one rule set to one subject."""
    lineage.node(node_id)  # UnknownId if absent
    if ruleset.sb1047_classification:
        return sb1047_classify(lineage, node_id, ruleset=ruleset)
    return _evaluate_compute_rule(lineage, node_id, ruleset, cfg, frozenset())


def evaluate_all(
    lineage: Lineage,
    node_id: str,
    registry: Optional[Mapping] = None,
    cfg: ScalingConfig = DEFAULT_CONFIG,
) -> dict:
    """ruleset id -> Verdict over the registry (built-ins by default),
    in stable id order."""
    if registry is None:
        registry = builtin_registry()
    return {rid: evaluate(lineage, node_id, registry[rid], cfg) for rid in sorted(registry)}


def _evaluate_compute_rule(
    lineage: Lineage,
    node_id: str,
    ruleset: Ruleset,
    cfg: ScalingConfig,
    visiting: frozenset,
) -> Verdict:
    if len(visiting) > len(lineage.nodes):
        raise RecursionDepthExceeded(
            f"teacher propagation visited more nodes than exist evaluating {node_id!r}"
        )
    policy = ruleset.counting
    realized = effective_compute(lineage, node_id, policy, cfg, include_planned=False)
    notes = list(realized.notes)
    triggered = []

    # The amount actually compared. Threshold-lowering for reuse is decided
    # through its exact dual: inflate the student base and compare against
    # the unlowered threshold (a flat threshold division is not equivalent
    # once fine-tune/synthetic/expansion compute sits in the total).
    comparison_compute = realized.effective
    radj = policy.reuse_adjustment
    if radj.kind is ReuseAdjustmentKind.LOWER_THRESHOLD and realized.reuse_events:
        dual_policy = replace(
            policy, reuse_adjustment=ReuseAdjustment.multiply_student_compute(radj.factor)
        )
        dual = effective_compute(lineage, node_id, dual_policy, cfg, include_planned=False)
        comparison_compute = dual.effective
        nominal = ruleset.threshold.scaled(1.0 / radj.factor)
        notes.append(
            f"reuse present: threshold treated as lowered {ruleset.threshold.compact()} "
            f"-> {nominal.compact()} per reuse event; decided by comparing the "
            "reuse-inflated total against the unlowered threshold (exact dual)"
        )

    comparison_threshold = ruleset.threshold
    eadj = policy.expansion_adjustment
    if (
        eadj.kind is ExpansionAdjustmentKind.LOWER_THRESHOLD
        and realized.expansion_present
    ):
        comparison_threshold = ruleset.threshold.scaled(1.0 / eadj.factor)
        notes.append(
            f"expansion present: threshold lowered {ruleset.threshold.compact()} "
            f"-> {comparison_threshold.compact()}"
        )

    covered = comparison_compute > comparison_threshold  # strict ">" per statute

    if covered:
        triggered.append("training-compute-threshold")
        if realized.reuse_events and radj.kind is not ReuseAdjustmentKind.NONE:
            triggered.append(
                "reuse-lowered-threshold"
                if radj.kind is ReuseAdjustmentKind.LOWER_THRESHOLD
                else "reuse-compute-inflation"
            )
        if realized.expansion_present and eadj.kind is not ExpansionAdjustmentKind.NONE:
            triggered.append(
                "expansion-lowered-threshold"
                if eadj.kind is ExpansionAdjustmentKind.LOWER_THRESHOLD
                else "expansion-compute-inflation"
            )
        if realized.inference_equivalent_ooms.ooms > 0.0:
            triggered.append("inference-training-equivalence")
        if realized.finetune_counted and not realized.finetune_total.is_zero:
            triggered.append("finetune-counting")

    status = CoverageStatus.COVERED if covered else CoverageStatus.NOT_COVERED

    # Ambiguity probe: how far could a court plausibly move the total?
    # Floor drops expansion compute (the literal text arguably reaches only
    # the original training run); ceiling adds back fine-tuning the policy
    # excluded (the text arguably reaches all training). A verdict that
    # survives both readings stands; otherwise it is Ambiguous.
    if ruleset.ambiguity_flagging:
        floor = _log_minus(comparison_compute, realized.expansion)
        ceiling = comparison_compute
        swing = []
        if not realized.finetune_counted and not realized.finetune_total.is_zero:
            ceiling = ceiling + realized.finetune_total
            swing.append("uncounted fine-tune compute")
        if realized.expansion_present and not realized.expansion.is_zero:
            swing.append("continued training of an expanded model")
        floor_covered = floor > comparison_threshold
        ceiling_covered = ceiling > comparison_threshold
        if floor_covered:
            if not covered:  # unreachable: floor <= effective
                status = CoverageStatus.COVERED
                triggered.append("training-compute-threshold")
        elif ceiling_covered:
            status = CoverageStatus.AMBIGUOUS
            triggered = ["literal-text-ambiguity"]
            notes.append(
                "ambiguous under the literal text: counting "
                + " and ".join(swing or ["excluded compute"])
                + f" moves the total across the {comparison_threshold.compact()} "
                "threshold, and the text is silent on whether it counts"
            )
        else:
            status = CoverageStatus.NOT_COVERED
            triggered = []

    # Teacher propagation: a covered teacher covers its students, deployed
    # or incognito.
    if ruleset.teacher_propagation and status is not CoverageStatus.COVERED:
        # key needed: ids can repeat across kinds and EventKind is unordered
        teachers = sorted(reuse_teachers(lineage, node_id), key=lambda p: (p[0], p[1].value))
        for teacher_id, kind in teachers:
            if teacher_id in visiting or teacher_id == node_id:
                continue
            teacher_verdict = _evaluate_compute_rule(
                lineage, teacher_id, ruleset, cfg, visiting | {node_id}
            )
            if teacher_verdict.status is CoverageStatus.COVERED:
                status = CoverageStatus.COVERED
                triggered.append("teacher-propagation")
                teacher_deployed = lineage.node(teacher_id).deployed
                notes.append(
                    f"teacher {teacher_id!r} ({kind.value}) is itself covered; "
                    "coverage propagates to the student"
                    + ("" if teacher_deployed else " (teacher is incognito/undeployed)")
                )
                break

    obligations = _obligations(lineage, node_id, ruleset, cfg, status, comparison_threshold, notes)

    return Verdict(
        ruleset_id=ruleset.id,
        subject=node_id,
        status=status,
        threshold=ruleset.threshold,
        comparison_threshold=comparison_threshold,
        comparison_compute=comparison_compute,
        breakdown=realized,
        classification=None,
        triggered_rules=tuple(triggered),
        obligations=obligations,
        citations=ruleset.citations,
        notes=tuple(notes),
    )


def _obligations(
    lineage: Lineage,
    node_id: str,
    ruleset: Ruleset,
    cfg: ScalingConfig,
    status: CoverageStatus,
    comparison_threshold: ComputeAmount,
    notes: list,
) -> tuple:
    out = []
    if status is CoverageStatus.COVERED:
        if ruleset.jurisdiction is Jurisdiction.US_FEDERAL:
            out.append(
                Obligation(
                    kind="report-to-commerce",
                    description=(
                        "report training run, model, and red-team safety results "
                        "under EO 14110 Sec. 4.2(a)"
                    ),
                )
            )
        if ruleset.notification_rule is not None:
            out.append(
                Obligation(
                    kind="notify-commission",
                    description=(
                        "notify the European Commission that the model meets the "
                        "systemic-risk presumption (AI Act Art. 52)"
                    ),
                    deadline_days=ruleset.notification_rule.window_days,
                )
            )
            out.append(
                Obligation(
                    kind="systemic-risk-duties",
                    description=(
                        "model evaluation, adversarial testing, incident reporting, "
                        "and cybersecurity duties for systemic-risk models"
                    ),
                )
            )
    elif ruleset.notification_rule is not None:
        # Art. 52 "known that it will be met" prong: planned events count.
        policy = ruleset.counting
        planned = effective_compute(lineage, node_id, policy, cfg, include_planned=True)
        planned_compute = planned.effective
        radj = policy.reuse_adjustment
        if radj.kind is ReuseAdjustmentKind.LOWER_THRESHOLD and planned.reuse_events:
            dual_policy = replace(
                policy,
                reuse_adjustment=ReuseAdjustment.multiply_student_compute(radj.factor),
            )
            planned_compute = effective_compute(
                lineage, node_id, dual_policy, cfg, include_planned=True
            ).effective
        if planned_compute > comparison_threshold:
            window = ruleset.notification_rule.window_days
            out.append(
                Obligation(
                    kind="advance-notification",
                    description=(
                        "planned training is known to cross the threshold; notify "
                        "the Commission within the window even before the run completes"
                    ),
                    deadline_days=window,
                )
            )
            notes.append(
                "planned events push the total over the threshold; Art. 52 "
                "notification is due on knowledge, not on completion"
            )
    return tuple(out)


# -- SB 1047 classification ------------------------------------------------------


def _exceeds(amount: Optional[MoneyAmount], threshold: MoneyAmount) -> bool:
    return amount is not None and amount.usd > threshold.usd


def sb1047_classify(
    lineage: Lineage,
    node_id: str,
    ruleset: Optional[Ruleset] = None,
) -> Verdict:
    """Classify a node under vetoed SB 1047 Sec. 22602.

    Covered model: pretrained with >1e26 FLOP at a cost >$100M, or created
    by fine-tuning a covered model with >=3e25 FLOP at a cost >$10M.
    Covered model derivative: an unmodified copy (Copy chains preserve the
    parent's classification), a copy with non-fine-tune post-training
    modifications, a copy fine-tuned below 3e25, or a copy combined with
    other software.  Everything else - in particular any modification of a
    non-covered starting model - is neither.
    """
    lineage.node(node_id)
    if ruleset is None:
        ruleset = builtin_registry()["sb1047-vetoed"]
    notes: list = []
    classification = _sb1047_category(lineage, node_id, {}, notes)

    breakdown = cumulative_training_compute(lineage, node_id, CountingPolicy())
    category = classification.category
    if category is ClassificationCategory.COVERED_MODEL:
        status = CoverageStatus.COVERED
        triggered = ("sb1047-covered-model",)
    elif category is ClassificationCategory.COVERED_MODEL_DERIVATIVE:
        # Derivatives are a distinct statutory category: the original
        # developer's duties follow the model, but the derivative itself is
        # not a covered model.  Keeping the status NotCovered also keeps
        # coverage monotone in compute (a cheap fine-tune crossing 3e25
        # falls out of the bill entirely; see the statutory-gap note).
        status = CoverageStatus.NOT_COVERED
        triggered = ("sb1047-covered-model-derivative",)
        notes.append(
            f"covered model derivative ({classification.derivative_kind.value}); "
            "derivative duties follow the original covered model's developer"
        )
    else:
        status = CoverageStatus.NOT_COVERED
        triggered = ()

    obligations = ()
    if category is ClassificationCategory.COVERED_MODEL:
        obligations = (
            Obligation(
                kind="safety-and-security-protocol",
                description=(
                    "implement a safety and security protocol with full shutdown "
                    "capability before training a covered model"
                ),
            ),
        )

    return Verdict(
        ruleset_id=ruleset.id,
        subject=node_id,
        status=status,
        threshold=ruleset.threshold,
        comparison_threshold=ruleset.threshold,
        comparison_compute=breakdown.cumulative,
        breakdown=breakdown,
        classification=classification,
        triggered_rules=triggered,
        obligations=obligations,
        citations=ruleset.citations,
        notes=tuple(notes),
    )


def _sb1047_category(
    lineage: Lineage, node_id: str, memo: dict, notes: list
) -> Classification:
    if node_id in memo:
        result = memo[node_id]
        if result is None:
            raise LineageError(f"classification cycle through {node_id!r}")
        return result
    memo[node_id] = None  # visiting marker
    evs = lineage.creating_events(node_id)
    if not evs:
        raise LineageError(f"node {node_id!r} has no creation event to classify")
    ev = evs[0]
    result = _classify_event(lineage, ev, memo, notes)
    memo[node_id] = result
    return result


_NEITHER = Classification(ClassificationCategory.NEITHER)


def _classify_event(lineage, ev, memo: dict, notes: list) -> Classification:
    kind = ev.kind
    if kind is EventKind.PRETRAIN:
        big = ev.compute > SB1047_COMPUTE_THRESHOLD  # strict ">"
        costly = _exceeds(ev.cost, SB1047_COST_THRESHOLD)
        if big and costly:
            return Classification(ClassificationCategory.COVERED_MODEL)
        return _NEITHER

    parents = [
        _sb1047_category(lineage, pid, memo, notes) for pid in ev.parent_ids
    ]

    if kind is EventKind.COPY:
        # Copying preserves what the thing is: a covered model copies to an
        # unmodified-copy derivative; a derivative copies to itself.
        parent = parents[0]
        if parent.category is ClassificationCategory.COVERED_MODEL:
            return Classification(
                ClassificationCategory.COVERED_MODEL_DERIVATIVE,
                DerivativeKind.UNMODIFIED,
            )
        if parent.category is ClassificationCategory.COVERED_MODEL_DERIVATIVE:
            return parent
        return _NEITHER

    # Every other limb requires the starting model to be a covered model
    # itself; modifications of non-covered models (and of derivatives, the
    # bill's own gap) classify as neither.
    covered_parent = any(
        p.category is ClassificationCategory.COVERED_MODEL for p in parents
    )
    if not covered_parent:
        return _NEITHER

    if kind is EventKind.FINETUNE:
        big_ft = ev.compute >= SB1047_FINETUNE_COMPUTE_THRESHOLD  # "equal to or greater"
        costly_ft = _exceeds(ev.cost, SB1047_FINETUNE_COST_THRESHOLD)
        if big_ft and costly_ft:
            return Classification(ClassificationCategory.COVERED_MODEL)
        if big_ft:
            notes.append(
                f"fine-tune {ev.child_id!r}: compute reaches 3e25 but cost does "
                "not exceed $10M; the covered-model limb fails and the "
                "derivative limb is written for fine-tunes not exceeding 3e25 - "
                "classified neither (statutory gap)"
            )
            return _NEITHER
        if costly_ft:
            notes.append(
                f"fine-tune {ev.child_id!r}: below 3e25 but costing over $10M; "
                "the bill's derivative limb oddly includes a cost condition - "
                "classified as a small-fine-tune derivative, cost noted"
            )
        return Classification(
            ClassificationCategory.COVERED_MODEL_DERIVATIVE,
            DerivativeKind.SMALL_FINETUNE,
        )
    if kind in REUSE_KINDS or kind is EventKind.EXPAND:
        return Classification(
            ClassificationCategory.COVERED_MODEL_DERIVATIVE,
            DerivativeKind.NON_FINETUNE_MODS,
        )
    if kind is EventKind.COMBINE_SOFTWARE:
        return Classification(
            ClassificationCategory.COVERED_MODEL_DERIVATIVE,
            DerivativeKind.COMBINED_SOFTWARE,
        )
    # Synthetic-data generation: the bill's derivative limbs never mention
    # it, and its covered limbs are pretraining and fine-tuning only.
    notes.append(
        f"{kind.value} event {ev.child_id!r} on a covered model matches none "
        "of the bill's limbs; classified neither"
    )
    return _NEITHER
