/**
 * Wire types: the scenario document and the /api response bodies.
 *
 * These mirror the server's JSON shapes exactly. The client treats FLOP
 * amounts as opaque decimal strings; all arithmetic stays server-side.
 */

export type EventKindName =
  | "pretrain"
  | "finetune"
  | "synthetic_data_gen"
  | "distill"
  | "kickstart"
  | "reincarnate"
  | "expand"
  | "copy"
  | "combine_software";

export const EVENT_KINDS: readonly EventKindName[] = [
  "pretrain",
  "finetune",
  "synthetic_data_gen",
  "distill",
  "kickstart",
  "reincarnate",
  "expand",
  "copy",
  "combine_software",
];

export type CapabilityDomainName = "general" | "math_coding";

export interface InferenceDoc {
  per_request_flop: string | number;
  domain?: CapabilityDomainName;
}

export interface ModelDoc {
  id: string;
  name?: string;
  deployed?: boolean;
  capability_domain?: CapabilityDomainName;
  inference?: InferenceDoc | null;
}

export interface EventDoc {
  kind: EventKindName;
  parents: string[];
  child: string;
  flop: string | number;
  cost_usd?: string | number | null;
  expand_savings_fraction?: number | null;
  surpass_teacher?: boolean | null;
  planned?: boolean;
}

export interface SweepDoc {
  target: string;
  from: string | number;
  to: string | number;
  steps: number;
  scale?: string;
}

/** Scaling overrides; anchors are a preset name or [x, y] pairs. */
export interface ScalingDoc {
  loss_compute_exponent?: number;
  detectable_loss_improvement?: number;
  inference_optimal_coefficient?: number;
  general_anchors?: string | number[][];
  math_coding_anchors?: string | number[][];
}

/** Inline rule sets are carried opaquely; the editor never rewrites them. */
export type RulesetRef = string | Record<string, unknown>;

export interface ScenarioDoc {
  models: ModelDoc[];
  events: EventDoc[];
  subject: string;
  scaling?: ScalingDoc;
  rulesets?: RulesetRef[];
  sweep?: SweepDoc;
}

// -- responses -----------------------------------------------------------

export type StatusName = "covered" | "not_covered" | "ambiguous";

export interface ObligationDoc {
  kind: string;
  description: string;
  deadline_days: number | null;
}

export interface ClassificationDoc {
  category: string;
  derivative_kind: string | null;
}

export interface BreakdownDoc {
  subject: string;
  pretrain: string;
  base_kind: string;
  finetune_total: string;
  finetune_counted: boolean;
  synthetic_data: string;
  synthetic_data_counted: boolean;
  expansion: string;
  expansion_present: boolean;
  reuse_events: {
    event_child_id: string;
    kind: string;
    teacher_ids: string[];
    multiplier: number;
  }[];
  inference_equivalent_ooms: number;
  cumulative: string;
  effective: string;
  notes: string[];
}

export interface VerdictDoc {
  ruleset_id: string;
  subject: string;
  status: StatusName;
  threshold: string;
  comparison_threshold: string;
  comparison_compute: string;
  classification: ClassificationDoc | null;
  triggered_rules: string[];
  obligations: ObligationDoc[];
  citations: string[];
  notes: string[];
  breakdown: BreakdownDoc;
}

export interface EvaluateResponse {
  verdicts: Record<string, VerdictDoc>;
}

export interface SweepRowDoc {
  value: string;
  ruleset_id: string;
  status: StatusName;
  effective: string;
}

export interface SweepResponse {
  target: string;
  rows: SweepRowDoc[];
}

export interface CrossingResponse {
  ruleset_id: string;
  tolerance_ooms: number;
  crossing: string;
  crossing_compact: string;
}

export interface ApiErrorBody {
  error: {
    code: string;
    message?: string;
    field?: string;
  };
}
