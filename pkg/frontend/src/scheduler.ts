/**
 * Debounced live evaluation with stale-response discard.
 *
 * Slider drags arrive as a stream of draft versions. Each change restarts a
 * short debounce window (~150 ms); when it settles, one evaluate request is
 * sent carrying the version number. A response only lands if its version is
 * still the newest, so a slow early response can never overwrite verdicts
 * for a later slider position.
 */

import { ApiClient, ApiError, ConnectivityError } from "./api.js";
import { chipViews, markStale, type ChipView } from "./verdicts.js";

export interface PanelState {
  chips: ChipView[];
  /** true while the panel shows results for an older draft than the latest */
  pending: boolean;
  /** set when the last refresh failed; last good chips stay up, marked stale */
  error: string | null;
}

export interface LiveEvaluatorOptions {
  debounceMs?: number;
  setTimeoutFn?: typeof setTimeout;
  clearTimeoutFn?: typeof clearTimeout;
}

export const DEFAULT_DEBOUNCE_MS = 150;

export class LiveEvaluator {
  private readonly client: ApiClient;
  private readonly debounceMs: number;
  private readonly setT: typeof setTimeout;
  private readonly clearT: typeof clearTimeout;
  private readonly listeners: ((state: PanelState) => void)[] = [];

  private version = 0;
  private applied = 0;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private state: PanelState = { chips: [], pending: false, error: null };

  constructor(client: ApiClient, opts: LiveEvaluatorOptions = {}) {
    this.client = client;
    this.debounceMs = opts.debounceMs ?? DEFAULT_DEBOUNCE_MS;
    this.setT = opts.setTimeoutFn ?? setTimeout;
    this.clearT = opts.clearTimeoutFn ?? clearTimeout;
  }

  onChange(listener: (state: PanelState) => void): void {
    this.listeners.push(listener);
  }

  getState(): PanelState {
    return this.state;
  }

  /** Feed the latest serialized draft; the evaluate fires after settle. */
  submit(scenarioJson: string): void {
    this.version += 1;
    const version = this.version;
    this.setState({ ...this.state, pending: true });
    if (this.timer !== null) this.clearT(this.timer);
    this.timer = this.setT(() => {
      this.timer = null;
      void this.fire(scenarioJson, version);
    }, this.debounceMs);
  }

  private async fire(scenarioJson: string, version: number): Promise<void> {
    try {
      const response = await this.client.evaluate(scenarioJson);
      if (version <= this.applied || version < this.version) return; // superseded
      this.applied = version;
      this.setState({
        chips: chipViews(response),
        pending: version < this.version,
        error: null,
      });
    } catch (exc) {
      if (version < this.version) return; // a newer request will report
      const message =
        exc instanceof ApiError
          ? `${exc.code}${exc.field ? ` at ${exc.field}` : ""}: ${exc.message}`
          : exc instanceof ConnectivityError
            ? `service unreachable: ${exc.message}`
            : String(exc);
      this.setState({
        chips: markStale(this.state.chips),
        pending: false,
        error: message,
      });
    }
  }

  private setState(next: PanelState): void {
    this.state = next;
    for (const fn of this.listeners) fn(next);
  }
}
