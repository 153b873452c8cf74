/**
 * Browser bootstrap: wires the editor textarea, slider, and verdict panel
 * to the live evaluator. All logic lives in the imported modules; this file
 * only touches the DOM.
 */

import { ApiClient, fetchTransport } from "./api.js";
import { bindSlider, loadDraft, serializeDraft, type ScenarioDraft } from "./draft.js";
import { LiveEvaluator } from "./scheduler.js";
import { applySlider, sliderPosition, sliderValue } from "./sliders.js";
import { frontierSeries, crossingAnnotation } from "./chart.js";
import { ApiError } from "./api.js";
import { renderAnnotation, renderBanner, renderChips, escapeHtml } from "./render.js";
import type { SweepResponse } from "./types.js";

const STARTER = JSON.stringify(
  {
    models: [{ id: "base" }, { id: "tuned" }],
    events: [
      { kind: "pretrain", parents: [], child: "base", flop: "1e26", cost_usd: 180000000 },
      { kind: "finetune", parents: ["base"], child: "tuned", flop: "1e24" },
    ],
    subject: "tuned",
    rulesets: ["eo14110-literal", "eo14110-ft15", "eu-aiact-literal"],
    sweep: { target: "events.tuned.flop", from: "1e23", to: "1e26", steps: 31 },
  },
  null,
  2,
);

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function main(): void {
  const client = new ApiClient(fetchTransport());
  const evaluator = new LiveEvaluator(client);

  const editor = el<HTMLTextAreaElement>("editor");
  const chipsEl = el<HTMLDivElement>("chips");
  const bannerEl = el<HTMLDivElement>("banner");
  const slider = el<HTMLInputElement>("slider");
  const sliderLabel = el<HTMLSpanElement>("slider-label");
  const chartEl = el<HTMLDivElement>("chart");
  const editorError = el<HTMLDivElement>("editor-error");

  let draft: ScenarioDraft | null = null;

  evaluator.onChange((state) => {
    chipsEl.innerHTML = renderChips(state.chips);
    bannerEl.innerHTML = renderBanner(state.error);
    chipsEl.classList.toggle("pending", state.pending);
  });

  function adopt(next: ScenarioDraft): void {
    draft = next;
    editorError.textContent = "";
    const text = serializeDraft(next);
    if (editor.value !== text) editor.value = text;
    evaluator.submit(text);
    void refreshChart(next);
  }

  function rejectEdit(message: string): void {
    editorError.textContent = message;
  }

  editor.addEventListener("input", () => {
    try {
      adopt(withBinding(loadDraft(editor.value)));
    } catch (exc) {
      rejectEdit((exc as Error).message);
    }
  });

  function withBinding(d: ScenarioDraft): ScenarioDraft {
    const sweep = d.doc.sweep;
    if (!sweep) return d;
    return bindSlider(d, {
      target: sweep.target,
      fromLog10: Math.log10(Number(sweep.from)),
      toLog10: Math.log10(Number(sweep.to)),
    });
  }

  slider.addEventListener("input", () => {
    if (!draft || !draft.bindings.length) return;
    const binding = draft.bindings[0]!;
    const t = Number(slider.value) / 1000;
    sliderLabel.textContent = `${sliderValue(binding, t)} FLOP`;
    try {
      adopt(applySlider(draft, binding, t));
    } catch (exc) {
      rejectEdit((exc as Error).message);
    }
  });

  async function refreshChart(d: ScenarioDraft): Promise<void> {
    if (!d.doc.sweep || !d.bindings.length) {
      chartEl.innerHTML = "";
      return;
    }
    const binding = d.bindings[0]!;
    slider.value = String(Math.round(sliderPosition(d, binding) * 1000));
    try {
      const body = serializeDraft(d);
      const sweepResp: SweepResponse = await client.sweep(body);
      const series = frontierSeries(sweepResp);
      const lines = series.map(
        (s) =>
          `<div class="series">` +
          `<span class="series-id">${escapeHtml(s.rulesetId)}</span> ` +
          s.points.map((p) => `<span class="pt pt-${p.status}" title="${p.value}"></span>`).join("") +
          (s.firstCovered ? ` <span class="series-first">covers from ${escapeHtml(s.firstCovered)}</span>` : "") +
          `</div>`,
      );
      const rid = series.find((s) => s.firstCovered)?.rulesetId;
      let annotation = "";
      if (rid) {
        try {
          annotation = renderAnnotation(crossingAnnotation(rid, await client.crossing(body, rid)));
        } catch (exc) {
          if (exc instanceof ApiError) annotation = renderAnnotation(crossingAnnotation(rid, exc));
          else throw exc;
        }
      }
      chartEl.innerHTML = lines.join("\n") + annotation;
    } catch {
      chartEl.innerHTML = `<div class="annotation">sweep unavailable</div>`;
    }
  }

  editor.value = STARTER;
  editor.dispatchEvent(new Event("input"));
}

document.addEventListener("DOMContentLoaded", main);
