import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { defaultConfig, setValue } from "../src/config.js";
import { DetectScheduler } from "../src/scheduler.js";
import type { ConfigJson, DetectionResponseJson } from "../src/types.js";

function deferred<T>() {
  let resolve!: (value: T) => void;
  let reject!: (error: unknown) => void;
  const promise = new Promise<T>((res, rej) => {
    resolve = res;
    reject = rej;
  });
  return { promise, resolve, reject };
}

const result = (marker: number) =>
  ({ schema: marker } as unknown as DetectionResponseJson);

const configAt = (variation: number) =>
  setValue(defaultConfig(), "stroke.max_variation", variation);

describe("DetectScheduler", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  function harness() {
    const sends: ConfigJson[] = [];
    const pending: Array<ReturnType<typeof deferred<DetectionResponseJson>>> = [];
    const applied: Array<{ result: DetectionResponseJson; config: ConfigJson }> = [];
    const failures: unknown[] = [];
    const scheduler = new DetectScheduler(
      (config) => {
        sends.push(config);
        const d = deferred<DetectionResponseJson>();
        pending.push(d);
        return d.promise;
      },
      (res, config) => applied.push({ result: res, config }),
      (error) => failures.push(error),
    );
    return { scheduler, sends, pending, applied, failures };
  }

  it("collapses a rapid slider drag into one request with the settled value", async () => {
    const h = harness();
    for (const v of [0.1, 0.2, 0.3, 0.4, 0.5]) {
      h.scheduler.request(configAt(v));
      await vi.advanceTimersByTimeAsync(50);
    }
    expect(h.sends).toHaveLength(0);
    await vi.advanceTimersByTimeAsync(250);
    expect(h.sends).toHaveLength(1);
    expect(h.sends[0].stroke.max_variation).toBe(0.5);
    h.pending[0].resolve(result(1));
    await vi.advanceTimersByTimeAsync(0);
    expect(h.applied).toHaveLength(1);
    expect(h.applied[0].config.stroke.max_variation).toBe(0.5);
  });

  it("keeps at most one call in flight and coalesces changes made meanwhile", async () => {
    const h = harness();
    h.scheduler.request(configAt(0.1));
    await vi.advanceTimersByTimeAsync(250);
    expect(h.sends).toHaveLength(1);

    h.scheduler.request(configAt(0.2));
    h.scheduler.request(configAt(0.3));
    await vi.advanceTimersByTimeAsync(250);
    expect(h.sends).toHaveLength(1); // still waiting on the first call

    h.pending[0].resolve(result(1));
    await vi.advanceTimersByTimeAsync(0);
    expect(h.applied).toHaveLength(1);
    expect(h.sends).toHaveLength(2); // one follow-up, with the latest value
    expect(h.sends[1].stroke.max_variation).toBe(0.3);

    h.pending[1].resolve(result(2));
    await vi.advanceTimersByTimeAsync(0);
    expect(h.applied).toHaveLength(2);
    expect(h.applied[1].config.stroke.max_variation).toBe(0.3);
  });

  it("discards responses that were superseded by a reset", async () => {
    const h = harness();
    h.scheduler.request(configAt(0.1));
    await vi.advanceTimersByTimeAsync(250);
    expect(h.sends).toHaveLength(1);

    h.scheduler.reset(); // e.g. the user switched images
    h.scheduler.request(configAt(0.2));
    await vi.advanceTimersByTimeAsync(250);
    expect(h.sends).toHaveLength(2);

    h.pending[1].resolve(result(2));
    await vi.advanceTimersByTimeAsync(0);
    h.pending[0].resolve(result(1)); // stale call finishing late
    await vi.advanceTimersByTimeAsync(0);

    expect(h.applied).toHaveLength(1);
    expect(h.applied[0].result.schema).toBe(2);
  });

  it("routes rejections to the failure callback and recovers on the next request", async () => {
    const h = harness();
    h.scheduler.request(configAt(0.1));
    await vi.advanceTimersByTimeAsync(250);
    h.pending[0].reject(new Error("boom"));
    await vi.advanceTimersByTimeAsync(0);
    expect(h.failures).toHaveLength(1);
    expect(h.applied).toHaveLength(0);

    h.scheduler.request(configAt(0.2));
    await vi.advanceTimersByTimeAsync(250);
    h.pending[1].resolve(result(7));
    await vi.advanceTimersByTimeAsync(0);
    expect(h.applied).toHaveLength(1);
    expect(h.applied[0].result.schema).toBe(7);
  });
});
