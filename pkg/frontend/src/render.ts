/**
 * HTML fragments for the panel. Pure string builders so the displayed
 * output is assertable without a browser.
 */

import type { ChipView } from "./verdicts.js";
import type { CrossingAnnotation } from "./chart.js";

export function escapeHtml(value: string): string {
  return value
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderChip(chip: ChipView): string {
  const classes = ["chip", `chip-${chip.status}`];
  if (chip.stale) classes.push("chip-stale");
  const title = escapeHtml(chip.tooltip);
  const cls = chip.classification ? ` <span class="chip-class">${escapeHtml(chip.classification)}</span>` : "";
  return (
    `<div class="${classes.join(" ")}" data-ruleset="${escapeHtml(chip.rulesetId)}"` +
    ` data-status="${chip.status}" title="${title}">` +
    `<span class="chip-id">${escapeHtml(chip.rulesetId)}</span>` +
    `<span class="chip-label">${escapeHtml(chip.label)}</span>` +
    `<span class="chip-effective">${escapeHtml(chip.effective)} FLOP</span>` +
    cls +
    renderObligations(chip) +
    `</div>`
  );
}

function renderObligations(chip: ChipView): string {
  if (!chip.obligations.length) return "";
  const items = chip.obligations
    .map((ob) => {
      const deadline = ob.deadline_days != null ? ` (within ${ob.deadline_days} days)` : "";
      return `<li>${escapeHtml(ob.kind)}${deadline}: ${escapeHtml(ob.description)}</li>`;
    })
    .join("");
  return `<ul class="chip-obligations">${items}</ul>`;
}

export function renderChips(chips: ChipView[]): string {
  return chips.map(renderChip).join("\n");
}

export function renderBanner(error: string | null): string {
  if (error === null) return "";
  return `<div class="banner banner-error">${escapeHtml(error)} (showing last good verdicts)</div>`;
}

export function renderAnnotation(a: CrossingAnnotation): string {
  if (a.kind === "none") {
    return `<div class="annotation annotation-flat">no crossing for ${escapeHtml(a.rulesetId)}: ${escapeHtml(a.message)}</div>`;
  }
  return `<div class="annotation annotation-crossing">crossing for ${escapeHtml(a.rulesetId)} at ${escapeHtml(a.compact)} FLOP</div>`;
}
