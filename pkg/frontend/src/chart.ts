/**
 * Frontier chart data: the /api/sweep rows regrouped for plotting, plus the
 * crossing annotation. No client-side recomputation; every point is a
 * server row echoed verbatim.
 */

import { ApiError } from "./api.js";
import type { CrossingResponse, StatusName, SweepResponse, SweepRowDoc } from "./types.js";
import { log10OfAmount } from "./amount.js";

export interface SeriesPoint {
  value: string;
  effective: string;
  status: StatusName;
  /** plot coordinates only; the strings above stay authoritative */
  x: number;
  y: number;
}

export interface FrontierSeries {
  rulesetId: string;
  points: SeriesPoint[];
  /** first covered row value, when the series flips inside the grid */
  firstCovered: string | null;
}

export function frontierSeries(response: SweepResponse): FrontierSeries[] {
  const byRuleset = new Map<string, SweepRowDoc[]>();
  for (const row of response.rows) {
    const rows = byRuleset.get(row.ruleset_id) ?? [];
    rows.push(row);
    byRuleset.set(row.ruleset_id, rows);
  }
  return [...byRuleset.keys()].sort().map((rid) => {
    const rows = byRuleset.get(rid)!;
    const covered = rows.find((r) => r.status === "covered");
    return {
      rulesetId: rid,
      points: rows.map((r) => ({
        value: r.value,
        effective: r.effective,
        status: r.status,
        x: log10OfAmount(r.value),
        y: log10OfAmount(r.effective),
      })),
      firstCovered: covered ? covered.value : null,
    };
  });
}

export type CrossingAnnotation =
  | { kind: "crossing"; rulesetId: string; value: string; compact: string }
  | { kind: "none"; rulesetId: string; message: string };

/** NoCrossing is an annotation on the chart, not an error state. */
export function crossingAnnotation(
  rulesetId: string,
  outcome: CrossingResponse | ApiError,
): CrossingAnnotation {
  if (outcome instanceof ApiError) {
    if (outcome.code === "NoCrossing") {
      return { kind: "none", rulesetId, message: outcome.message };
    }
    throw outcome;
  }
  return {
    kind: "crossing",
    rulesetId,
    value: outcome.crossing,
    compact: outcome.crossing_compact,
  };
}

/** Status flips along one series, in grid order; monotone rows give <= 1. */
export function statusFlips(series: FrontierSeries): number {
  let flips = 0;
  for (let i = 1; i < series.points.length; i++) {
    if (series.points[i]!.status !== series.points[i - 1]!.status) flips += 1;
  }
  return flips;
}
