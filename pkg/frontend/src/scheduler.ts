/** Debounced detect dispatch with last-write-wins supersession.
 *
 * Slider drags call request() on every tick; one HTTP call goes out per
 * settled value, never more than one is in flight, and a response is applied
 * only if no newer dispatch or reset has happened since it was sent.
 */

import type { ConfigJson, DetectionResponseJson } from "./types.js";

export type SendFn = (config: ConfigJson) => Promise<DetectionResponseJson>;
export type ApplyFn = (result: DetectionResponseJson, config: ConfigJson) => void;
export type FailFn = (error: unknown) => void;

export const DEBOUNCE_MS = 250;

export class DetectScheduler {
  private timer: ReturnType<typeof setTimeout> | null = null;
  private pending: ConfigJson | null = null;
  private inFlight = false;
  private seq = 0;

  constructor(
    private readonly send: SendFn,
    private readonly apply: ApplyFn,
    private readonly fail: FailFn,
    private readonly delayMs: number = DEBOUNCE_MS,
  ) {}

  /** Record the latest desired config and (re)start the debounce window. */
  request(config: ConfigJson): void {
    this.pending = config;
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      this.flush();
    }, this.delayMs);
  }

  /** Drop all queued work and disown any in-flight response (image switch). */
  reset(): void {
    this.seq += 1;
    this.pending = null;
    this.inFlight = false;
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
  }

  private flush(): void {
    if (this.inFlight || this.pending === null) return;
    const config = this.pending;
    this.pending = null;
    this.seq += 1;
    const ticket = this.seq;
    this.inFlight = true;
    this.send(config).then(
      (result) => {
        if (ticket === this.seq) this.apply(result, config);
      },
      (error) => {
        if (ticket === this.seq) this.fail(error);
      },
    ).finally(() => {
      if (ticket !== this.seq) return; // a reset disowned this call
      this.inFlight = false;
      if (this.pending !== null) this.flush();
    });
  }
}
