/**
 * ScenarioDraft: an editable mirror of the scenario JSON plus UI state.
 *
 * The invariant that matters: a draft serializes to a scenario file the
 * server accepts at all times. Every editing operation validates before it
 * lands and throws DraftError (with a server-style field path) instead of
 * leaving the draft broken. Validation mirrors the server's schema checks;
 * it never computes verdicts.
 */

import {
  EVENT_KINDS,
  type EventDoc,
  type EventKindName,
  type ModelDoc,
  type RulesetRef,
  type ScenarioDoc,
  type SweepDoc,
} from "./types.js";
import { isValidAmount } from "./amount.js";

/** One slider: binds an editable compute field to a log-scale range. */
export interface SliderBinding {
  /** "events.<child>.flop" or "models.<id>.inference.per_request_flop" */
  target: string;
  fromLog10: number;
  toLog10: number;
}

export interface ScenarioDraft {
  doc: ScenarioDoc;
  bindings: SliderBinding[];
}

export class DraftError extends Error {
  readonly field: string;
  constructor(field: string, message: string) {
    super(`${field}: ${message}`);
    this.field = field;
  }
}

const CHAIN_KINDS = new Set<EventKindName>([
  "finetune",
  "synthetic_data_gen",
  "expand",
  "copy",
  "combine_software",
]);
const REUSE_KINDS = new Set<EventKindName>(["distill", "kickstart", "reincarnate"]);
const ZERO_COMPUTE_KINDS = new Set<EventKindName>(["copy", "combine_software"]);
const DOMAINS = new Set(["general", "math_coding"]);

const TOP_KEYS = new Set(["models", "events", "subject", "scaling", "rulesets", "sweep"]);
const MODEL_KEYS = new Set(["id", "name", "deployed", "capability_domain", "inference"]);
const INFERENCE_KEYS = new Set(["per_request_flop", "domain"]);
const EVENT_KEYS = new Set([
  "kind", "parents", "child", "flop",
  "cost_usd", "expand_savings_fraction", "surpass_teacher", "planned",
]);
const SWEEP_KEYS = new Set(["target", "from", "to", "steps", "scale"]);
const SCALING_KEYS = new Set([
  "loss_compute_exponent",
  "detectable_loss_improvement",
  "inference_optimal_coefficient",
  "general_anchors",
  "math_coding_anchors",
]);

// -- validation ----------------------------------------------------------

function fail(field: string, message: string): never {
  throw new DraftError(field, message);
}

function checkKeys(obj: object, field: string, allowed: Set<string>, required: Set<string>): void {
  const keys = Object.keys(obj);
  const unknown = keys.filter((k) => !allowed.has(k)).sort();
  if (unknown.length) fail(field, `unknown key(s): ${unknown.join(", ")}`);
  for (const k of required) {
    if (!(k in obj)) fail(field, `missing required key ${k}`);
  }
}

function isObject(v: unknown): v is Record<string, unknown> {
  return typeof v === "object" && v !== null && !Array.isArray(v);
}

function checkAmount(v: unknown, field: string, allowZero = false): void {
  if (typeof v === "string" || typeof v === "number") {
    if (isValidAmount(v)) return;
    const n = Number(typeof v === "string" ? v.trim() || NaN : v);
    if (allowZero && n === 0) return;
  }
  fail(field, `expected a ${allowZero ? "" : "positive "}FLOP amount, got ${JSON.stringify(v)}`);
}

function checkModel(m: unknown, field: string): void {
  if (!isObject(m)) fail(field, "expected an object");
  checkKeys(m, field, MODEL_KEYS, new Set(["id"]));
  if (typeof m.id !== "string" || !m.id) fail(`${field}.id`, "expected a non-empty string");
  if ("name" in m && typeof m.name !== "string") fail(`${field}.name`, "expected a string");
  if ("deployed" in m && typeof m.deployed !== "boolean") {
    fail(`${field}.deployed`, "expected a boolean");
  }
  if ("capability_domain" in m && !DOMAINS.has(m.capability_domain as string)) {
    fail(`${field}.capability_domain`, `unknown domain ${JSON.stringify(m.capability_domain)}`);
  }
  if (m.inference != null) {
    const inf = m.inference;
    if (!isObject(inf)) fail(`${field}.inference`, "expected an object");
    checkKeys(inf, `${field}.inference`, INFERENCE_KEYS, new Set(["per_request_flop"]));
    checkAmount(inf.per_request_flop, `${field}.inference.per_request_flop`);
    if ("domain" in inf && !DOMAINS.has(inf.domain as string)) {
      fail(`${field}.inference.domain`, `unknown domain ${JSON.stringify(inf.domain)}`);
    }
  }
}

function checkEvent(e: unknown, field: string): void {
  if (!isObject(e)) fail(field, "expected an object");
  checkKeys(e, field, EVENT_KEYS, new Set(["kind", "parents", "child", "flop"]));
  const kind = e.kind as EventKindName;
  if (!EVENT_KINDS.includes(kind)) fail(`${field}.kind`, `unknown kind ${JSON.stringify(e.kind)}`);
  if (!Array.isArray(e.parents)) fail(`${field}.parents`, "expected a list of ids");
  e.parents.forEach((p, i) => {
    if (typeof p !== "string") fail(`${field}.parents[${i}]`, "expected a node id string");
  });
  if (typeof e.child !== "string" || !e.child) fail(`${field}.child`, "expected a node id string");
  // zero event compute is legal in general; kind rules below pin it down
  checkAmount(e.flop, `${field}.flop`, true);
  if (e.cost_usd != null && typeof e.cost_usd !== "number" && typeof e.cost_usd !== "string") {
    fail(`${field}.cost_usd`, "expected a dollar amount");
  }
  if ("planned" in e && typeof e.planned !== "boolean") fail(`${field}.planned`, "expected a boolean");

  // kind-specific rules, same as the server's event checks
  const parents = e.parents as string[];
  if (kind === "pretrain") {
    if (parents.length !== 0) fail(field, `pretrain takes no parents, got ${parents.length}`);
    if (Number(e.flop) === 0) fail(`${field}.flop`, "pretrain compute must be positive");
  } else if (CHAIN_KINDS.has(kind)) {
    if (parents.length !== 1) fail(field, `${kind} takes exactly one parent, got ${parents.length}`);
  } else if (REUSE_KINDS.has(kind)) {
    if (parents.length < 1) fail(field, `${kind} takes at least one teacher, got ${parents.length}`);
  }
  if (ZERO_COMPUTE_KINDS.has(kind) && Number(e.flop) !== 0) {
    fail(`${field}.flop`, `${kind} must carry zero compute`);
  }
  if (e.expand_savings_fraction != null) {
    if (kind !== "expand") fail(field, "expand_savings_fraction only applies to expand");
    const f = e.expand_savings_fraction;
    if (typeof f !== "number" || !(f >= 0 && f < 1)) {
      fail(`${field}.expand_savings_fraction`, `must be in [0, 1): ${JSON.stringify(f)}`);
    }
  }
  if (e.surpass_teacher != null) {
    if (kind !== "reincarnate") fail(field, "surpass_teacher only applies to reincarnate");
    if (typeof e.surpass_teacher !== "boolean") {
      fail(`${field}.surpass_teacher`, "expected a boolean");
    }
  }
  if (parents.includes(e.child)) fail(field, `event creates ${e.child} from itself`);
}

function checkSweep(s: unknown, field: string): void {
  if (!isObject(s)) fail(field, "expected an object");
  checkKeys(s, field, SWEEP_KEYS, new Set(["target", "from", "to", "steps"]));
  if (typeof s.target !== "string" || !s.target) fail(`${field}.target`, "expected a string");
  checkAmount(s.from, `${field}.from`);
  checkAmount(s.to, `${field}.to`);
  if (typeof s.steps !== "number" || !Number.isInteger(s.steps) || s.steps < 2) {
    fail(`${field}.steps`, `must be an integer >= 2, got ${JSON.stringify(s.steps)}`);
  }
  if ("scale" in s && s.scale !== "log10") {
    fail(`${field}.scale`, `only log10 sweeps are supported, got ${JSON.stringify(s.scale)}`);
  }
  if (!(Number(s.from) < Number(s.to))) fail(field, "requires from < to");
}

/**
 * Validate a whole scenario document; throws DraftError on the first
 * problem. Structural checks follow the server: ids must resolve, every
 * model needs exactly one creation event, no cycles.
 */
export function validateDoc(doc: unknown): asserts doc is ScenarioDoc {
  if (!isObject(doc)) fail("$", "scenario must be a JSON object");
  checkKeys(doc, "$", TOP_KEYS, new Set(["models", "events", "subject"]));
  if (!Array.isArray(doc.models)) fail("models", "expected a list");
  if (!Array.isArray(doc.events)) fail("events", "expected a list");
  doc.models.forEach((m, i) => checkModel(m, `models[${i}]`));
  doc.events.forEach((e, i) => checkEvent(e, `events[${i}]`));
  if (typeof doc.subject !== "string") fail("subject", "expected a node id string");

  const models = doc.models as ModelDoc[];
  const events = doc.events as EventDoc[];
  const ids = new Set<string>();
  models.forEach((m, i) => {
    if (ids.has(m.id)) fail(`models[${i}].id`, `node id ${JSON.stringify(m.id)} given twice`);
    ids.add(m.id);
  });
  events.forEach((e, i) => {
    for (const ref of [e.child, ...e.parents]) {
      if (!ids.has(ref)) fail(`events[${i}]`, `references unknown id ${JSON.stringify(ref)}`);
    }
  });
  const created = new Map<string, number>();
  for (const e of events) created.set(e.child, (created.get(e.child) ?? 0) + 1);
  for (const m of models) {
    const n = created.get(m.id) ?? 0;
    if (n === 0) fail("models", `node ${JSON.stringify(m.id)} has no creation event`);
    if (n > 1) fail("events", `node ${JSON.stringify(m.id)} has ${n} creation events`);
  }
  if (!ids.has(doc.subject)) fail("subject", `unknown node id ${JSON.stringify(doc.subject)}`);
  checkAcyclic(events);

  if (doc.scaling != null) {
    if (!isObject(doc.scaling)) fail("scaling", "expected an object");
    checkKeys(doc.scaling, "scaling", SCALING_KEYS, new Set());
  }
  if (doc.rulesets != null) {
    if (!Array.isArray(doc.rulesets)) fail("rulesets", "expected a list");
    doc.rulesets.forEach((r, i) => {
      if (typeof r === "string") return;
      // inline rule sets pass through opaquely; check only the envelope
      if (!isObject(r)) fail(`rulesets[${i}]`, "expected an id string or rule set object");
      for (const key of ["id", "jurisdiction", "threshold"]) {
        if (!(key in r)) fail(`rulesets[${i}]`, `missing required key ${key}`);
      }
    });
  }
  if (doc.sweep != null) checkSweep(doc.sweep, "sweep");
}

function checkAcyclic(events: EventDoc[]): void {
  // Kahn's algorithm over parent -> child edges
  const indeg = new Map<string, number>();
  const children = new Map<string, string[]>();
  for (const e of events) {
    indeg.set(e.child, indeg.get(e.child) ?? 0);
    for (const p of e.parents) {
      indeg.set(p, indeg.get(p) ?? 0);
      indeg.set(e.child, (indeg.get(e.child) ?? 0) + 1);
      (children.get(p) ?? children.set(p, []).get(p)!).push(e.child);
    }
  }
  const queue = [...indeg.keys()].filter((k) => indeg.get(k) === 0);
  let seen = 0;
  while (queue.length) {
    const nid = queue.pop()!;
    seen += 1;
    for (const c of children.get(nid) ?? []) {
      const d = indeg.get(c)! - 1;
      indeg.set(c, d);
      if (d === 0) queue.push(c);
    }
  }
  if (seen !== indeg.size) fail("events", "lineage contains a cycle");
}

// -- load / save ---------------------------------------------------------

/** Parse scenario text into a fresh draft; accepts any file the CLI does. */
export function loadDraft(text: string): ScenarioDraft {
  let doc: unknown;
  try {
    doc = JSON.parse(text);
  } catch (exc) {
    fail("$", `not valid JSON: ${(exc as Error).message}`);
  }
  validateDoc(doc);
  return { doc, bindings: [] };
}

/**
 * Canonical serialization: fixed key order, two-space indent, values kept
 * verbatim. Serializing an unchanged draft is byte-stable.
 */
export function serializeDraft(draft: ScenarioDraft): string {
  const doc = draft.doc;
  const out: Record<string, unknown> = {
    models: doc.models.map(orderModel),
    events: doc.events.map(orderEvent),
    subject: doc.subject,
  };
  if (doc.scaling !== undefined) out.scaling = pickKeys(doc.scaling, SCALING_KEYS);
  if (doc.rulesets !== undefined) out.rulesets = doc.rulesets;
  if (doc.sweep !== undefined) out.sweep = pickKeys(doc.sweep, SWEEP_KEYS);
  return JSON.stringify(out, null, 2) + "\n";
}

function orderModel(m: ModelDoc): Record<string, unknown> {
  const out = pickKeys(m, MODEL_KEYS);
  if (m.inference != null) out.inference = pickKeys(m.inference, INFERENCE_KEYS);
  return out;
}

function orderEvent(e: EventDoc): Record<string, unknown> {
  return pickKeys(e, EVENT_KEYS);
}

function pickKeys(obj: object, order: Set<string>): Record<string, unknown> {
  const src = obj as Record<string, unknown>;
  const out: Record<string, unknown> = {};
  for (const key of order) {
    if (key in src && src[key] !== undefined) out[key] = src[key];
  }
  return out;
}

// -- editing operations --------------------------------------------------

function cloneDoc(doc: ScenarioDoc): ScenarioDoc {
  return JSON.parse(JSON.stringify(doc)) as ScenarioDoc;
}

function commit(draft: ScenarioDraft, doc: ScenarioDoc): ScenarioDraft {
  validateDoc(doc);
  return { doc, bindings: draft.bindings };
}

/**
 * Add a model together with its creating event, atomically; a bare node
 * would leave the draft unserializable.
 */
export function addDerivation(
  draft: ScenarioDraft,
  event: EventDoc,
  model: Omit<ModelDoc, "id"> = {},
): ScenarioDraft {
  const doc = cloneDoc(draft.doc);
  doc.models.push({ id: event.child, ...model });
  doc.events.push({ ...event });
  return commit(draft, doc);
}

/**
 * Remove a model and its creating event. Blocked while other events still
 * reference the node, or while it is the subject.
 */
export function removeModel(draft: ScenarioDraft, id: string): ScenarioDraft {
  const doc = cloneDoc(draft.doc);
  if (!doc.models.some((m) => m.id === id)) fail("models", `references unknown id ${JSON.stringify(id)}`);
  if (doc.subject === id) fail("subject", `cannot remove the subject node ${JSON.stringify(id)}`);
  const referenced = doc.events.some((e) => e.child !== id && (e.parents.includes(id) || false));
  if (referenced) fail("events", `references unknown id ${JSON.stringify(id)}: other events still use this node`);
  doc.models = doc.models.filter((m) => m.id !== id);
  doc.events = doc.events.filter((e) => e.child !== id);
  return commit(draft, doc);
}

export function setSubject(draft: ScenarioDraft, id: string): ScenarioDraft {
  const doc = cloneDoc(draft.doc);
  doc.subject = id;
  return commit(draft, doc);
}

export function setRulesets(draft: ScenarioDraft, refs: RulesetRef[]): ScenarioDraft {
  const doc = cloneDoc(draft.doc);
  if (refs.length === 0) delete doc.rulesets;
  else doc.rulesets = refs;
  return commit(draft, doc);
}

export function setEventFlop(draft: ScenarioDraft, childId: string, flop: string): ScenarioDraft {
  const doc = cloneDoc(draft.doc);
  const i = doc.events.findIndex((e) => e.child === childId);
  if (i < 0) fail("events", `references unknown id ${JSON.stringify(childId)}`);
  doc.events[i] = { ...doc.events[i]!, flop };
  return commit(draft, doc);
}

export function setInferenceFlop(draft: ScenarioDraft, modelId: string, flop: string): ScenarioDraft {
  const doc = cloneDoc(draft.doc);
  const i = doc.models.findIndex((m) => m.id === modelId);
  if (i < 0) fail("models", `references unknown id ${JSON.stringify(modelId)}`);
  const model = doc.models[i]!;
  const inference = { ...(model.inference ?? {}), per_request_flop: flop };
  doc.models[i] = { ...model, inference };
  return commit(draft, doc);
}

export function setSweep(draft: ScenarioDraft, sweep: SweepDoc | null): ScenarioDraft {
  const doc = cloneDoc(draft.doc);
  if (sweep === null) delete doc.sweep;
  else doc.sweep = { ...sweep };
  return commit(draft, doc);
}

/** Attach or replace a slider binding; the target must resolve. */
export function bindSlider(draft: ScenarioDraft, binding: SliderBinding): ScenarioDraft {
  resolveTarget(draft.doc, binding.target);
  if (!(binding.fromLog10 < binding.toLog10)) {
    fail("binding", `requires from < to, got [${binding.fromLog10}, ${binding.toLog10}]`);
  }
  const bindings = draft.bindings.filter((b) => b.target !== binding.target);
  bindings.push(binding);
  return { doc: draft.doc, bindings };
}

/** Split a slider target path and check it points at a real field. */
export function resolveTarget(
  doc: ScenarioDoc,
  target: string,
): { kind: "event" | "inference"; id: string } {
  const parts = target.split(".");
  if (parts.length === 3 && parts[0] === "events" && parts[2] === "flop") {
    const id = parts[1]!;
    if (!doc.events.some((e) => e.child === id)) {
      fail("sweep.target", `no event creates node ${JSON.stringify(id)}`);
    }
    return { kind: "event", id };
  }
  if (
    parts.length === 4 &&
    parts[0] === "models" &&
    parts[2] === "inference" &&
    parts[3] === "per_request_flop"
  ) {
    const id = parts[1]!;
    const m = doc.models.find((mm) => mm.id === id);
    if (!m) fail("sweep.target", `unknown model id ${JSON.stringify(id)}`);
    if (m.inference == null) fail("sweep.target", `model ${JSON.stringify(id)} has no inference profile`);
    return { kind: "inference", id };
  }
  fail(
    "sweep.target",
    `cannot resolve sweep target ${JSON.stringify(target)}; expected ` +
      "events.<child_id>.flop or models.<model_id>.inference.per_request_flop",
  );
}
