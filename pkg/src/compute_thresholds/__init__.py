"""Compute-threshold accounting for AI governance rules.

Exact log-domain compute arithmetic, model lineage graphs, counting-policy
calculators, and rule set engines for the US, EU, and California compute
thresholds, plus scenario file IO, sweeps, and crossing searches.
"""

from .amounts import AmountError, ComputeAmount, MoneyAmount, ZERO, total
from .lineage import (
    CapabilityDomain,
    ChildAlreadyCreated,
    CycleDetected,
    DerivationEvent,
    DuplicateId,
    EventKind,
    InferenceProfile,
    KindFieldMismatch,
    Lineage,
    LineageError,
    ModelNode,
    UnknownId,
    Violation,
    add_event,
    add_node,
    ancestors,
    reuse_teachers,
    validate,
)
from .scaling import (
    ANCHOR_PRESETS,
    DEFAULT_CONFIG,
    DomainError,
    OomValue,
    ScalingConfig,
    compute_multiplier_for_loss_ratio,
    compute_optimal_inference,
    excess_inference_ooms,
    inference_adjusted_compute,
    loss_ratio_for_multiplier,
    min_detectable_finetune_fraction,
    training_equivalent_ooms,
)
from .accounting import (
    AccountingError,
    ComputeBreakdown,
    CountingPolicy,
    ExpansionAdjustment,
    ExpansionAdjustmentKind,
    FinetuneCounting,
    FinetuneRule,
    NoPretrainRoot,
    ReuseAdjustment,
    ReuseAdjustmentKind,
    ReuseEventRecord,
    aggregate_finetune_fraction,
    cumulative_training_compute,
    effective_compute,
    finetune_reporting_events,
    reuse_multiplier,
)
from .rulesets import (
    Classification,
    ClassificationCategory,
    CoverageStatus,
    DerivativeKind,
    Jurisdiction,
    NotificationRule,
    Obligation,
    Ruleset,
    RulesetError,
    Verdict,
    builtin_registry,
    builtin_rulesets,
    evaluate,
    evaluate_all,
    sb1047_classify,
)
from .scenario import (
    Scenario,
    ScenarioError,
    ScenarioSyntaxError,
    ScenarioValidationError,
    SchemaError,
    SweepSpec,
    parse_scenario,
    render_scenario,
    resolve_rulesets,
)
from .report import render_report, verdict_from_jsonable, verdict_to_jsonable
from .analysis import (
    AnalysisError,
    NoCrossing,
    NonMonotone,
    SweepRow,
    SweepTargetUnresolved,
    find_crossing,
    set_sweep_target,
    sweep,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
