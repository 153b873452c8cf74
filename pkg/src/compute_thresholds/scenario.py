"""Scenario files: the JSON format shared by the CLI, the HTTP service, and
the explorer UI.

Top-level keys:

- "models": list of {id, name?, deployed?, capability_domain?, inference?}
  where inference is {per_request_flop, domain?} (domain defaults to the
  model's capability_domain).
- "events": list of {kind, parents, child, flop, cost_usd?,
  expand_savings_fraction?, surpass_teacher?, planned?}.
- "subject": id of the node the verdicts are about.
- "scaling": optional overrides of the scaling constants (a partial object
  over the defaults; anchor tables accept inline [[x, y], ...] lists or a
  named preset string).
- "rulesets": optional list of built-in rule set ids and/or inline custom
  rule set objects; empty or absent means every built-in.
- "sweep": optional {target, from, to, steps, scale?} block for sweeps and
  crossing searches.

Compute values travel as decimal-scientific strings ("9.9e25") and are
stored exactly in the log domain; rendering is the lossless inverse.
Unknown keys anywhere are rejected: scenario files are compliance inputs,
and a typo that silently drops a field must not change a verdict.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from typing import Optional, Union

from .amounts import AmountError, ComputeAmount, MoneyAmount
from .lineage import (
    CapabilityDomain,
    DerivationEvent,
    EventKind,
    InferenceProfile,
    Lineage,
    LineageError,
    ModelNode,
    validate,
)
from .scaling import ANCHOR_PRESETS, DEFAULT_CONFIG, DomainError, ScalingConfig
from .accounting import (
    AccountingError,
    CountingPolicy,
    ExpansionAdjustment,
    ExpansionAdjustmentKind,
    FinetuneCounting,
    FinetuneRule,
    ReuseAdjustment,
    ReuseAdjustmentKind,
)
from .rulesets import (
    Jurisdiction,
    NotificationRule,
    Ruleset,
    RulesetError,
    builtin_registry,
)


class ScenarioError(ValueError):
    """Base for scenario parse/validation failures."""

    code = "ScenarioError"


class ScenarioSyntaxError(ScenarioError):
    code = "SyntaxError"

    def __init__(self, message: str, line: Optional[int] = None, col: Optional[int] = None):
        where = f" (line {line}, column {col})" if line is not None else ""
        super().__init__(f"{message}{where}")
        self.line = line
        self.col = col


class SchemaError(ScenarioError):
    code = "SchemaError"

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class ScenarioValidationError(ScenarioError):
    code = "ValidationError"

    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__(
            "; ".join(f"{v.rule}[{v.subject}]: {v.message}" for v in self.violations)
        )


@dataclass(frozen=True)
class SweepSpec:
    """One numeric field swept over a log-spaced range.

    target selects the field: "events.<child_id>.flop" or
    "models.<model_id>.inference.per_request_flop".
    """

    target: str
    from_value: ComputeAmount
    to_value: ComputeAmount
    steps: int
    scale: str = "log10"

    def __post_init__(self) -> None:
        if not self.target or not isinstance(self.target, str):
            raise SchemaError("sweep.target", "must be a non-empty string")
        if self.scale != "log10":
            raise SchemaError("sweep.scale", f"only log10 sweeps are supported, got {self.scale!r}")
        if not isinstance(self.steps, int) or isinstance(self.steps, bool) or self.steps < 2:
            raise SchemaError("sweep.steps", f"must be an integer >= 2, got {self.steps!r}")
        if self.from_value.is_zero or self.to_value.is_zero:
            raise SchemaError("sweep", "log-spaced endpoints must be positive")
        if not (self.from_value < self.to_value):
            raise SchemaError("sweep", "requires from < to")


RulesetRef = Union[str, Ruleset]


@dataclass(frozen=True)
class Scenario:
    lineage: Lineage
    subject: str
    scaling: ScalingConfig = DEFAULT_CONFIG
    ruleset_selection: tuple = ()
    sweep: Optional[SweepSpec] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "ruleset_selection", tuple(self.ruleset_selection))
        if not self.lineage.has_node(self.subject):
            raise SchemaError("subject", f"unknown node id {self.subject!r}")


def resolve_rulesets(scenario: Scenario, registry=None) -> dict:
    """Resolve the scenario's rule set selection to {id: Ruleset}, in id
    order.  Empty selection selects the whole registry."""
    if registry is None:
        registry = builtin_registry()
    if not scenario.ruleset_selection:
        chosen = dict(registry)
    else:
        chosen = {}
        for ref in scenario.ruleset_selection:
            if isinstance(ref, str):
                if ref not in registry:
                    raise SchemaError("rulesets", f"unknown rule set id {ref!r}")
                rs = registry[ref]
            else:
                rs = ref
            if rs.id in chosen:
                raise SchemaError("rulesets", f"rule set id {rs.id!r} selected twice")
            chosen[rs.id] = rs
    return {rid: chosen[rid] for rid in sorted(chosen)}


# -- schema helpers --------------------------------------------------------------


def _expect(obj, field: str, types, type_name: str):
    if not isinstance(obj, types) or isinstance(obj, bool) and bool not in _as_tuple(types):
        raise SchemaError(field, f"expected {type_name}, got {type(obj).__name__}")
    return obj


def _as_tuple(types):
    return types if isinstance(types, tuple) else (types,)


def _check_keys(obj: dict, field: str, allowed: set, required: set) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise SchemaError(field, f"unknown key(s): {', '.join(sorted(unknown))}")
    missing = required - set(obj)
    if missing:
        raise SchemaError(field, f"missing required key(s): {', '.join(sorted(missing))}")


def _amount(value, field: str) -> ComputeAmount:
    try:
        if isinstance(value, str):
            return ComputeAmount.parse(value)
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return ComputeAmount.from_flop(float(value))
    except AmountError as exc:
        raise SchemaError(field, str(exc)) from None
    raise SchemaError(field, f"expected a FLOP amount string or number, got {value!r}")


def _money(value, field: str) -> MoneyAmount:
    try:
        return MoneyAmount.parse(value)
    except AmountError as exc:
        raise SchemaError(field, str(exc)) from None


def _enum(cls, value, field: str):
    try:
        return cls(value)
    except ValueError:
        valid = ", ".join(m.value for m in cls)
        raise SchemaError(field, f"expected one of {valid}, got {value!r}") from None


# -- parsing ---------------------------------------------------------------------


def parse_scenario(text: str) -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise SchemaError("$", "scenario must be a JSON object")
    _check_keys(
        doc, "$",
        allowed={"models", "events", "subject", "scaling", "rulesets", "sweep"},
        required={"models", "events", "subject"},
    )

    nodes = [
        _parse_model(m, f"models[{i}]")
        for i, m in enumerate(_expect(doc["models"], "models", list, "a list"))
    ]
    events = [
        _parse_event(e, f"events[{i}]")
        for i, e in enumerate(_expect(doc["events"], "events", list, "a list"))
    ]
    try:
        lineage = Lineage(nodes, events)
    except LineageError as exc:
        raise SchemaError("models", str(exc)) from None
    violations = validate(lineage)
    if violations:
        raise ScenarioValidationError(violations)

    subject = _expect(doc["subject"], "subject", str, "a node id string")
    scaling = _parse_scaling(doc.get("scaling"), "scaling")
    selection = _parse_ruleset_selection(doc.get("rulesets"), "rulesets")
    sweep = _parse_sweep(doc.get("sweep"), "sweep")
    return Scenario(
        lineage=lineage,
        subject=subject,
        scaling=scaling,
        ruleset_selection=selection,
        sweep=sweep,
    )


def _parse_model(obj, field: str) -> ModelNode:
    _expect(obj, field, dict, "an object")
    _check_keys(
        obj, field,
        allowed={"id", "name", "deployed", "capability_domain", "inference"},
        required={"id"},
    )
    domain = _enum(
        CapabilityDomain, obj.get("capability_domain", "general"), f"{field}.capability_domain"
    )
    inference = None
    if obj.get("inference") is not None:
        inf = _expect(obj["inference"], f"{field}.inference", dict, "an object")
        _check_keys(
            inf, f"{field}.inference",
            allowed={"per_request_flop", "domain"},
            required={"per_request_flop"},
        )
        inf_domain = (
            _enum(CapabilityDomain, inf["domain"], f"{field}.inference.domain")
            if "domain" in inf
            else domain
        )
        try:
            inference = InferenceProfile(
                per_request_compute=_amount(inf["per_request_flop"], f"{field}.inference.per_request_flop"),
                capability_domain=inf_domain,
            )
        except AmountError as exc:
            raise SchemaError(f"{field}.inference", str(exc)) from None
    try:
        return ModelNode(
            id=_expect(obj["id"], f"{field}.id", str, "a string"),
            name=_expect(obj.get("name", ""), f"{field}.name", str, "a string"),
            deployed=_expect(obj.get("deployed", True), f"{field}.deployed", bool, "a boolean"),
            capability_domain=domain,
            inference=inference,
        )
    except LineageError as exc:
        raise SchemaError(field, str(exc)) from None


def _parse_event(obj, field: str) -> DerivationEvent:
    _expect(obj, field, dict, "an object")
    _check_keys(
        obj, field,
        allowed={
            "kind", "parents", "child", "flop", "cost_usd",
            "expand_savings_fraction", "surpass_teacher", "planned",
        },
        required={"kind", "parents", "child", "flop"},
    )
    kind = _enum(EventKind, obj["kind"], f"{field}.kind")
    parents = _expect(obj["parents"], f"{field}.parents", list, "a list of ids")
    for i, p in enumerate(parents):
        _expect(p, f"{field}.parents[{i}]", str, "a node id string")
    cost = None
    if obj.get("cost_usd") is not None:
        cost = _money(obj["cost_usd"], f"{field}.cost_usd")
    savings = obj.get("expand_savings_fraction")
    if savings is not None:
        savings = float(
            _expect(savings, f"{field}.expand_savings_fraction", (int, float), "a number")
        )
    surpass = obj.get("surpass_teacher")
    if surpass is not None:
        surpass = _expect(surpass, f"{field}.surpass_teacher", bool, "a boolean")
    try:
        return DerivationEvent(
            kind=kind,
            parent_ids=tuple(parents),
            child_id=_expect(obj["child"], f"{field}.child", str, "a node id string"),
            compute=_amount(obj["flop"], f"{field}.flop"),
            cost=cost,
            expand_savings_fraction=savings,
            surpass_teacher=surpass,
            planned=_expect(obj.get("planned", False), f"{field}.planned", bool, "a boolean"),
        )
    except LineageError as exc:
        raise SchemaError(field, str(exc)) from None


def _parse_anchor_table(value, field: str):
    if isinstance(value, str):
        if value not in ANCHOR_PRESETS:
            raise SchemaError(field, f"unknown anchor preset {value!r}; have {', '.join(sorted(ANCHOR_PRESETS))}")
        return ANCHOR_PRESETS[value]
    table = _expect(value, field, list, "an anchor list or preset name")
    out = []
    for i, pair in enumerate(table):
        pair = _expect(pair, f"{field}[{i}]", list, "an [x, y] pair")
        if len(pair) != 2 or any(
            not isinstance(v, (int, float)) or isinstance(v, bool) for v in pair
        ):
            raise SchemaError(f"{field}[{i}]", f"expected an [x, y] number pair, got {pair!r}")
        out.append((float(pair[0]), float(pair[1])))
    return tuple(out)


_SCALING_KEYS = {
    "loss_compute_exponent",
    "detectable_loss_improvement",
    "inference_optimal_coefficient",
    "general_anchors",
    "math_coding_anchors",
}


def _parse_scaling(obj, field: str) -> ScalingConfig:
    if obj is None:
        return DEFAULT_CONFIG
    _expect(obj, field, dict, "an object")
    _check_keys(obj, field, allowed=_SCALING_KEYS, required=set())
    kwargs = {}
    for key in ("loss_compute_exponent", "detectable_loss_improvement", "inference_optimal_coefficient"):
        if key in obj:
            kwargs[key] = float(
                _expect(obj[key], f"{field}.{key}", (int, float), "a number")
            )
    for key in ("general_anchors", "math_coding_anchors"):
        if key in obj:
            kwargs[key] = _parse_anchor_table(obj[key], f"{field}.{key}")
    try:
        return replace(DEFAULT_CONFIG, **kwargs)
    except DomainError as exc:
        raise SchemaError(field, str(exc)) from None


def _parse_sweep(obj, field: str) -> Optional[SweepSpec]:
    if obj is None:
        return None
    _expect(obj, field, dict, "an object")
    _check_keys(
        obj, field,
        allowed={"target", "from", "to", "steps", "scale"},
        required={"target", "from", "to", "steps"},
    )
    steps = obj["steps"]
    if not isinstance(steps, int) or isinstance(steps, bool):
        raise SchemaError(f"{field}.steps", f"expected an integer, got {steps!r}")
    return SweepSpec(
        target=_expect(obj["target"], f"{field}.target", str, "a string"),
        from_value=_amount(obj["from"], f"{field}.from"),
        to_value=_amount(obj["to"], f"{field}.to"),
        steps=steps,
        scale=_expect(obj.get("scale", "log10"), f"{field}.scale", str, "a string"),
    )


# -- rule set codec ----------------------------------------------------------------


def _parse_ruleset_selection(obj, field: str) -> tuple:
    if obj is None:
        return ()
    _expect(obj, field, list, "a list of ids or rule set objects")
    out = []
    for i, ref in enumerate(obj):
        if isinstance(ref, str):
            out.append(ref)
        elif isinstance(ref, dict):
            out.append(parse_ruleset(ref, f"{field}[{i}]"))
        else:
            raise SchemaError(
                f"{field}[{i}]", f"expected a rule set id or object, got {type(ref).__name__}"
            )
    return tuple(out)


def parse_ruleset(obj: dict, field: str = "ruleset") -> Ruleset:
    _expect(obj, field, dict, "an object")
    _check_keys(
        obj, field,
        allowed={
            "id", "jurisdiction", "threshold", "cost_threshold", "counting",
            "teacher_propagation", "notification_days", "ambiguity_flagging",
            "sb1047_classification", "description", "citations",
        },
        required={"id", "jurisdiction", "threshold"},
    )
    notification = None
    if obj.get("notification_days") is not None:
        days = obj["notification_days"]
        if not isinstance(days, int) or isinstance(days, bool):
            raise SchemaError(f"{field}.notification_days", f"expected an integer, got {days!r}")
        notification = NotificationRule(days)
    citations = _expect(obj.get("citations", []), f"{field}.citations", list, "a list")
    for i, c in enumerate(citations):
        _expect(c, f"{field}.citations[{i}]", str, "a string")
    try:
        return Ruleset(
            id=_expect(obj["id"], f"{field}.id", str, "a string"),
            jurisdiction=_enum(Jurisdiction, obj["jurisdiction"], f"{field}.jurisdiction"),
            threshold=_amount(obj["threshold"], f"{field}.threshold"),
            cost_threshold=(
                _money(obj["cost_threshold"], f"{field}.cost_threshold")
                if obj.get("cost_threshold") is not None
                else None
            ),
            counting=parse_counting_policy(obj.get("counting"), f"{field}.counting"),
            teacher_propagation=_expect(
                obj.get("teacher_propagation", False), f"{field}.teacher_propagation", bool, "a boolean"
            ),
            notification_rule=notification,
            ambiguity_flagging=_expect(
                obj.get("ambiguity_flagging", False), f"{field}.ambiguity_flagging", bool, "a boolean"
            ),
            sb1047_classification=_expect(
                obj.get("sb1047_classification", False), f"{field}.sb1047_classification", bool, "a boolean"
            ),
            description=_expect(obj.get("description", ""), f"{field}.description", str, "a string"),
            citations=tuple(citations),
        )
    except (RulesetError, AccountingError) as exc:
        raise SchemaError(field, str(exc)) from None


def parse_counting_policy(obj, field: str = "counting") -> CountingPolicy:
    if obj is None:
        return CountingPolicy()
    _expect(obj, field, dict, "an object")
    _check_keys(
        obj, field,
        allowed={
            "count_finetune", "count_synthetic_data", "reuse_adjustment",
            "expansion_adjustment", "inference_adjustment",
        },
        required=set(),
    )
    try:
        ft = _parse_finetune_rule(obj.get("count_finetune"), f"{field}.count_finetune")
        reuse = _parse_reuse_adjustment(obj.get("reuse_adjustment"), f"{field}.reuse_adjustment")
        expand = _parse_expansion_adjustment(
            obj.get("expansion_adjustment"), f"{field}.expansion_adjustment"
        )
        return CountingPolicy(
            count_finetune=ft,
            count_synthetic_data=_expect(
                obj.get("count_synthetic_data", True),
                f"{field}.count_synthetic_data", bool, "a boolean",
            ),
            reuse_adjustment=reuse,
            expansion_adjustment=expand,
            inference_adjustment=_expect(
                obj.get("inference_adjustment", False),
                f"{field}.inference_adjustment", bool, "a boolean",
            ),
        )
    except AccountingError as exc:
        raise SchemaError(field, str(exc)) from None


def _parse_finetune_rule(obj, field: str) -> FinetuneRule:
    if obj is None:
        return FinetuneRule.always()
    if isinstance(obj, str):
        mode = _enum(FinetuneCounting, obj, field)
        if mode is FinetuneCounting.IF_AGGREGATE_AT_LEAST:
            raise SchemaError(field, "if_aggregate_at_least needs an object with a fraction")
        return FinetuneRule(mode)
    _expect(obj, field, dict, "a mode string or object")
    _check_keys(obj, field, allowed={"mode", "fraction"}, required={"mode"})
    mode = _enum(FinetuneCounting, obj["mode"], f"{field}.mode")
    fraction = obj.get("fraction")
    if fraction is not None:
        fraction = float(_expect(fraction, f"{field}.fraction", (int, float), "a number"))
    return FinetuneRule(mode, fraction)


def _parse_reuse_adjustment(obj, field: str) -> ReuseAdjustment:
    if obj is None:
        return ReuseAdjustment.none()
    if isinstance(obj, str):
        kind = _enum(ReuseAdjustmentKind, obj, field)
        if kind is not ReuseAdjustmentKind.NONE:
            raise SchemaError(field, f"{kind.value} needs an object with a factor")
        return ReuseAdjustment.none()
    _expect(obj, field, dict, "a kind string or object")
    _check_keys(obj, field, allowed={"kind", "factor"}, required={"kind"})
    kind = _enum(ReuseAdjustmentKind, obj["kind"], f"{field}.kind")
    factor = obj.get("factor")
    if factor is not None:
        factor = float(_expect(factor, f"{field}.factor", (int, float), "a number"))
    return ReuseAdjustment(kind, factor)


def _parse_expansion_adjustment(obj, field: str) -> ExpansionAdjustment:
    if obj is None:
        return ExpansionAdjustment.none()
    if isinstance(obj, str):
        kind = _enum(ExpansionAdjustmentKind, obj, field)
        if kind is not ExpansionAdjustmentKind.NONE:
            raise SchemaError(field, f"{kind.value} needs an object with parameters")
        return ExpansionAdjustment.none()
    _expect(obj, field, dict, "a kind string or object")
    _check_keys(obj, field, allowed={"kind", "savings_fraction", "factor"}, required={"kind"})
    kind = _enum(ExpansionAdjustmentKind, obj["kind"], f"{field}.kind")
    savings = obj.get("savings_fraction")
    if savings is not None:
        savings = float(_expect(savings, f"{field}.savings_fraction", (int, float), "a number"))
    factor = obj.get("factor")
    if factor is not None:
        factor = float(_expect(factor, f"{field}.factor", (int, float), "a number"))
    return ExpansionAdjustment(kind, savings_fraction=savings, factor=factor)


# -- rendering ---------------------------------------------------------------------


def render_scenario(scenario: Scenario) -> str:
    """Canonical, deterministic, lossless inverse of parse_scenario."""
    return json.dumps(scenario_to_jsonable(scenario), indent=2) + "\n"


def scenario_to_jsonable(scenario: Scenario) -> dict:
    doc = {
        "models": [_model_to_jsonable(n) for n in scenario.lineage.nodes],
        "events": [_event_to_jsonable(e) for e in scenario.lineage.events],
        "subject": scenario.subject,
    }
    if scenario.scaling != DEFAULT_CONFIG:
        doc["scaling"] = scaling_to_jsonable(scenario.scaling)
    if scenario.ruleset_selection:
        doc["rulesets"] = [
            ref if isinstance(ref, str) else ruleset_to_jsonable(ref)
            for ref in scenario.ruleset_selection
        ]
    if scenario.sweep is not None:
        doc["sweep"] = {
            "target": scenario.sweep.target,
            "from": scenario.sweep.from_value.render(),
            "to": scenario.sweep.to_value.render(),
            "steps": scenario.sweep.steps,
            "scale": scenario.sweep.scale,
        }
    return doc


def _model_to_jsonable(node: ModelNode) -> dict:
    out = {"id": node.id}
    if node.name:
        out["name"] = node.name
    if not node.deployed:
        out["deployed"] = False
    if node.capability_domain is not CapabilityDomain.GENERAL:
        out["capability_domain"] = node.capability_domain.value
    if node.inference is not None:
        out["inference"] = {
            "per_request_flop": node.inference.per_request_compute.render(),
            "domain": node.inference.capability_domain.value,
        }
    return out


def _event_to_jsonable(ev: DerivationEvent) -> dict:
    out = {
        "kind": ev.kind.value,
        "parents": list(ev.parent_ids),
        "child": ev.child_id,
        "flop": ev.compute.render(),
    }
    if ev.cost is not None:
        out["cost_usd"] = ev.cost.usd
    if ev.expand_savings_fraction is not None:
        out["expand_savings_fraction"] = ev.expand_savings_fraction
    if ev.surpass_teacher is not None:
        out["surpass_teacher"] = ev.surpass_teacher
    if ev.planned:
        out["planned"] = True
    return out


def scaling_to_jsonable(cfg: ScalingConfig) -> dict:
    return {
        "loss_compute_exponent": cfg.loss_compute_exponent,
        "detectable_loss_improvement": cfg.detectable_loss_improvement,
        "inference_optimal_coefficient": cfg.inference_optimal_coefficient,
        "general_anchors": [[x, y] for x, y in cfg.general_anchors],
        "math_coding_anchors": [[x, y] for x, y in cfg.math_coding_anchors],
    }


def counting_policy_to_jsonable(policy: CountingPolicy) -> dict:
    ft = policy.count_finetune
    if ft.mode is FinetuneCounting.IF_AGGREGATE_AT_LEAST:
        ft_json = {"mode": ft.mode.value, "fraction": ft.fraction}
    else:
        ft_json = ft.mode.value
    reuse = policy.reuse_adjustment
    reuse_json = (
        reuse.kind.value
        if reuse.kind is ReuseAdjustmentKind.NONE
        else {"kind": reuse.kind.value, "factor": reuse.factor}
    )
    expand = policy.expansion_adjustment
    if expand.kind is ExpansionAdjustmentKind.NONE:
        expand_json = expand.kind.value
    elif expand.kind is ExpansionAdjustmentKind.INFLATE_BY_MAX_SAVINGS:
        expand_json = {"kind": expand.kind.value, "savings_fraction": expand.savings_fraction}
    else:
        expand_json = {"kind": expand.kind.value, "factor": expand.factor}
    return {
        "count_finetune": ft_json,
        "count_synthetic_data": policy.count_synthetic_data,
        "reuse_adjustment": reuse_json,
        "expansion_adjustment": expand_json,
        "inference_adjustment": policy.inference_adjustment,
    }


def registry_to_jsonable(registry=None) -> dict:
    if registry is None:
        registry = builtin_registry()
    return {"rulesets": [ruleset_to_jsonable(registry[rid]) for rid in sorted(registry)]}


def defaults_to_jsonable(cfg: ScalingConfig = DEFAULT_CONFIG) -> dict:
    from .accounting import (
        DISTILL_MULTIPLIER,
        KICKSTART_MULTIPLIER,
        REINCARNATE_MATCH_MULTIPLIER,
        REINCARNATE_SURPASS_MULTIPLIER,
    )
    from .rulesets import AGGREGATE_FINETUNE_FRACTION
    from .scaling import ANCHOR_PRESETS, min_detectable_finetune_fraction

    out = scaling_to_jsonable(cfg)
    out["anchor_presets"] = {
        name: [[x, y] for x, y in table] for name, table in sorted(ANCHOR_PRESETS.items())
    }
    out["detectable_loss_ratio"] = 1.0 - cfg.detectable_loss_improvement
    out["min_detectable_finetune_fraction"] = min_detectable_finetune_fraction(cfg)
    out["aggregate_finetune_fraction"] = AGGREGATE_FINETUNE_FRACTION
    out["reuse_multipliers"] = {
        "distill": DISTILL_MULTIPLIER,
        "kickstart": KICKSTART_MULTIPLIER,
        "reincarnate_match": REINCARNATE_MATCH_MULTIPLIER,
        "reincarnate_surpass": REINCARNATE_SURPASS_MULTIPLIER,
    }
    return out


def ruleset_to_jsonable(rs: Ruleset) -> dict:
    out = {
        "id": rs.id,
        "jurisdiction": rs.jurisdiction.value,
        "threshold": rs.threshold.render(),
        "counting": counting_policy_to_jsonable(rs.counting),
        "teacher_propagation": rs.teacher_propagation,
        "ambiguity_flagging": rs.ambiguity_flagging,
        "sb1047_classification": rs.sb1047_classification,
    }
    if rs.cost_threshold is not None:
        out["cost_threshold"] = rs.cost_threshold.usd
    if rs.notification_rule is not None:
        out["notification_days"] = rs.notification_rule.window_days
    if rs.description:
        out["description"] = rs.description
    if rs.citations:
        out["citations"] = list(rs.citations)
    return out
