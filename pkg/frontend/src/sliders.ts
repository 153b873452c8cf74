/**
 * Log-scale slider positions mapped onto draft compute fields.
 */

import { amountFromLog10, log10OfAmount } from "./amount.js";
import {
  resolveTarget,
  setEventFlop,
  setInferenceFlop,
  type ScenarioDraft,
  type SliderBinding,
} from "./draft.js";

/** The decimal amount at slider position t in [0, 1]. */
export function sliderValue(binding: SliderBinding, t: number): string {
  const clamped = Math.min(1, Math.max(0, t));
  return amountFromLog10(binding.fromLog10 + clamped * (binding.toLog10 - binding.fromLog10));
}

/** Slider position for the draft's current value of the bound field. */
export function sliderPosition(draft: ScenarioDraft, binding: SliderBinding): number {
  const current = log10OfAmount(currentValue(draft, binding));
  if (!Number.isFinite(current)) return 0;
  const t = (current - binding.fromLog10) / (binding.toLog10 - binding.fromLog10);
  return Math.min(1, Math.max(0, t));
}

export function currentValue(draft: ScenarioDraft, binding: SliderBinding): string | number {
  const where = resolveTarget(draft.doc, binding.target);
  if (where.kind === "event") {
    return draft.doc.events.find((e) => e.child === where.id)!.flop;
  }
  return draft.doc.models.find((m) => m.id === where.id)!.inference!.per_request_flop;
}

/** A new draft with the bound field set to the position-t value. */
export function applySlider(draft: ScenarioDraft, binding: SliderBinding, t: number): ScenarioDraft {
  const value = sliderValue(binding, t);
  const where = resolveTarget(draft.doc, binding.target);
  if (where.kind === "event") return setEventFlop(draft, where.id, value);
  return setInferenceFlop(draft, where.id, value);
}
