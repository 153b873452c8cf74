/**
 * VerdictView: what the panel displays for one rule set.
 *
 * Views are built only from parsed /api/evaluate responses, never computed
 * here; the status chip is the server's status string verbatim.
 */

import type { EvaluateResponse, ObligationDoc, StatusName, VerdictDoc } from "./types.js";

export interface ChipView {
  rulesetId: string;
  status: StatusName;
  /** label text; Ambiguous renders distinctly from NotCovered */
  label: string;
  effective: string;
  threshold: string;
  tooltip: string;
  obligations: ObligationDoc[];
  notes: string[];
  classification: string | null;
  stale: boolean;
}

export const STATUS_LABELS: Record<StatusName, string> = {
  covered: "Covered",
  not_covered: "Not covered",
  ambiguous: "Ambiguous",
};

export function chipViews(response: EvaluateResponse): ChipView[] {
  return Object.keys(response.verdicts)
    .sort()
    .map((rid) => chipView(response.verdicts[rid]!));
}

function chipView(v: VerdictDoc): ChipView {
  return {
    rulesetId: v.ruleset_id,
    status: v.status,
    label: STATUS_LABELS[v.status],
    effective: v.breakdown.effective,
    threshold: v.comparison_threshold,
    tooltip: v.citations.join("\n"),
    obligations: v.obligations,
    notes: v.notes,
    classification: describeClassification(v),
    stale: false,
  };
}

function describeClassification(v: VerdictDoc): string | null {
  const c = v.classification;
  if (!c) return null;
  if (c.derivative_kind) return `${c.category} (${c.derivative_kind})`;
  return c.category;
}

/** Keep the last good verdicts on a failed refresh, but say so. */
export function markStale(chips: ChipView[]): ChipView[] {
  return chips.map((c) => ({ ...c, stale: true }));
}

/** Rule set ids whose status differs between two chip lists. */
export function flippedChips(before: ChipView[], after: ChipView[]): string[] {
  const prior = new Map(before.map((c) => [c.rulesetId, c.status]));
  return after
    .filter((c) => prior.has(c.rulesetId) && prior.get(c.rulesetId) !== c.status)
    .map((c) => c.rulesetId);
}
