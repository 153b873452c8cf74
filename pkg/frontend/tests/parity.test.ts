/**
 * CLI/API/UI parity. The evaluate-*.json fixtures are recorded verbatim
 * from `ctl evaluate --format json` (the service returns the identical
 * body). These tests intercept the transport and assert two things: the
 * UI sends exactly the scenario file over the wire, and the chips it
 * displays are exactly the recorded verdicts, field for field.
 */

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { log10OfAmount } from "../src/amount.js";
import { bindSlider, loadDraft, serializeDraft } from "../src/draft.js";
import { applySlider, sliderValue } from "../src/sliders.js";
import { STATUS_LABELS, chipViews, flippedChips, type ChipView } from "../src/verdicts.js";
import { renderChips } from "../src/render.js";
import type { EvaluateResponse, VerdictDoc } from "../src/types.js";
import { GOLDENS, fixture, fixtureText, goldenText, interceptTransport, ok } from "./helpers.js";

/** The chip a verdict should display, built directly from the recording. */
function expectedChip(v: VerdictDoc): ChipView {
  return {
    rulesetId: v.ruleset_id,
    status: v.status,
    label: STATUS_LABELS[v.status],
    effective: v.breakdown.effective,
    threshold: v.comparison_threshold,
    tooltip: v.citations.join("\n"),
    obligations: v.obligations,
    notes: v.notes,
    classification: v.classification
      ? v.classification.derivative_kind
        ? `${v.classification.category} (${v.classification.derivative_kind})`
        : v.classification.category
      : null,
    stale: false,
  };
}

function expectedChips(response: EvaluateResponse): ChipView[] {
  return Object.keys(response.verdicts)
    .sort()
    .map((rid) => expectedChip(response.verdicts[rid]!));
}

describe("golden scenario parity", () => {
  it.each([...GOLDENS])("%s: chips agree exactly with the recorded verdicts", async (stem) => {
    const recorded = fixture<EvaluateResponse>(`evaluate-${stem}.json`);
    const { transport, calls } = interceptTransport(() => ok(recorded));
    const client = new ApiClient(transport);

    const body = serializeDraft(loadDraft(goldenText(stem)));
    const chips = chipViews(await client.evaluate(body));

    // one POST /api/evaluate carrying exactly the scenario file
    expect(calls).toHaveLength(1);
    expect(calls[0]!.path).toBe("/api/evaluate");
    expect(calls[0]!.method).toBe("POST");
    expect(JSON.parse(calls[0]!.body!)).toEqual(JSON.parse(goldenText(stem)));

    // every displayed field comes from the recording, nothing else
    expect(chips).toEqual(expectedChips(recorded));

    // and the rendered panel carries the statuses verbatim
    const html = renderChips(chips);
    for (const chip of chips) {
      expect(html).toContain(`data-ruleset="${chip.rulesetId}"`);
      expect(html).toContain(`data-status="${chip.status}"`);
      expect(html).toContain(`${chip.effective} FLOP`);
    }
  });

  it("displays whatever the server said, even when doctored", async () => {
    // flip one recorded status; the panel must follow the response, proving
    // no verdict is ever recomputed client-side
    const doctored = fixture<EvaluateResponse>("evaluate-finetune-threshold.json");
    doctored.verdicts["eo14110-ft15"]!.status = "covered";
    const { transport } = interceptTransport(() => ok(doctored));
    const client = new ApiClient(transport);

    const chips = chipViews(await client.evaluate(serializeDraft(loadDraft(goldenText("finetune-threshold")))));
    const chip = chips.find((c) => c.rulesetId === "eo14110-ft15")!;
    expect(chip.status).toBe("covered");
    expect(chip.label).toBe("Covered");
  });
});

describe("slider boundary crossings", () => {
  it("crossing the 15% fine-tune boundary flips exactly the eo14110-ft15 chip", async () => {
    const binding = {
      target: "events.atlas-tuned.flop",
      fromLog10: log10OfAmount("1.4e25"),
      toLog10: log10OfAmount("1.6e25"),
    };
    const draft = bindSlider(loadDraft(goldenText("finetune-threshold")), binding);

    // slider endpoints emit the exact recorded boundary values
    expect(sliderValue(binding, 0)).toBe("1.4e25");
    expect(sliderValue(binding, 1)).toBe("1.6e25");

    const pre = applySlider(draft, binding, 0);
    const post = applySlider(draft, binding, 1);
    expect(JSON.parse(serializeDraft(pre))).toEqual(JSON.parse(fixtureText("scenario-ft-pre.json")));
    expect(JSON.parse(serializeDraft(post))).toEqual(JSON.parse(fixtureText("scenario-ft-post.json")));

    // route by the fine-tune compute actually sent over the wire
    const { transport, calls } = interceptTransport((call) => {
      const doc = JSON.parse(call.body!);
      const flop = doc.events.find((e: { child: string }) => e.child === "atlas-tuned").flop;
      if (flop === "1.4e25") return ok(fixture("evaluate-ft-pre.json"));
      if (flop === "1.6e25") return ok(fixture("evaluate-ft-post.json"));
      throw new Error(`unexpected fine-tune compute ${flop}`);
    });
    const client = new ApiClient(transport);

    const before = chipViews(await client.evaluate(serializeDraft(pre)));
    const after = chipViews(await client.evaluate(serializeDraft(post)));
    expect(calls).toHaveLength(2);

    expect(flippedChips(before, after)).toEqual(["eo14110-ft15"]);
    const status = (chips: ChipView[], rid: string) => chips.find((c) => c.rulesetId === rid)!.status;
    expect(status(before, "eo14110-ft15")).toBe("not_covered");
    expect(status(after, "eo14110-ft15")).toBe("covered");
    // the other chips hold: literal reading stays ambiguous, EU stays covered
    expect(status(before, "eo14110-literal")).toBe("ambiguous");
    expect(status(after, "eo14110-literal")).toBe("ambiguous");
    expect(status(before, "eu-aiact-literal")).toBe("covered");
    expect(status(after, "eu-aiact-literal")).toBe("covered");
  });

  it("crossing the 1e25 inference-equivalent boundary flips exactly the eu-inference-patch chip", async () => {
    const binding = {
      target: "models.helios.inference.per_request_flop",
      fromLog10: log10OfAmount("1.5e12"),
      toLog10: log10OfAmount("2e12"),
    };
    const draft = bindSlider(loadDraft(goldenText("inference-deployment")), binding);

    expect(sliderValue(binding, 0)).toBe("1.5e12");
    expect(sliderValue(binding, 1)).toBe("2e12");

    const pre = applySlider(draft, binding, 0);
    const post = applySlider(draft, binding, 1);
    expect(JSON.parse(serializeDraft(pre))).toEqual(JSON.parse(fixtureText("scenario-inference-pre.json")));
    expect(JSON.parse(serializeDraft(post))).toEqual(JSON.parse(fixtureText("scenario-inference-post.json")));

    const { transport } = interceptTransport((call) => {
      const doc = JSON.parse(call.body!);
      const flop = doc.models.find((m: { id: string }) => m.id === "helios").inference.per_request_flop;
      if (flop === "1.5e12") return ok(fixture("evaluate-inference-pre.json"));
      if (flop === "2e12") return ok(fixture("evaluate-inference-post.json"));
      throw new Error(`unexpected per-request compute ${flop}`);
    });
    const client = new ApiClient(transport);

    const before = chipViews(await client.evaluate(serializeDraft(pre)));
    const after = chipViews(await client.evaluate(serializeDraft(post)));

    expect(flippedChips(before, after)).toEqual(["eu-inference-patch"]);
    const status = (chips: ChipView[], rid: string) => chips.find((c) => c.rulesetId === rid)!.status;
    expect(status(before, "eu-inference-patch")).toBe("not_covered");
    expect(status(after, "eu-inference-patch")).toBe("covered");
    for (const rid of ["eo14110-literal", "eu-aiact-literal", "us-inference-patch"]) {
      expect(status(before, rid)).toBe("not_covered");
      expect(status(after, rid)).toBe("not_covered");
    }
  });
});
