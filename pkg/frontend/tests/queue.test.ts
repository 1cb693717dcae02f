import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ScoreQueue } from "../src/queue.js";

describe("ScoreQueue", () => {
  beforeEach(() => {
    vi.useFakeTimers();
  });
  afterEach(() => {
    vi.useRealTimers();
  });

  it("debounces rapid edits into one batch", async () => {
    const sent: Record<string, number>[] = [];
    const queue = new ScoreQueue(async (scores) => {
      sent.push(scores);
    }, 300);

    queue.enqueue("a.q1", 1);
    vi.advanceTimersByTime(100);
    queue.enqueue("b.q1", 2);
    vi.advanceTimersByTime(100);
    queue.enqueue("a.q1", 3); // newer edit of the same leaf wins
    expect(sent).toEqual([]);

    await vi.advanceTimersByTimeAsync(300);
    expect(sent).toEqual([{ "a.q1": 3, "b.q1": 2 }]);
  });

  it("keeps a single request in flight and coalesces edits made meanwhile", async () => {
    let release: () => void = () => {};
    const sent: Record<string, number>[] = [];
    const queue = new ScoreQueue(async (scores) => {
      sent.push(scores);
      if (sent.length === 1) {
        await new Promise<void>((resolve) => {
          release = resolve;
        });
      }
    }, 300);

    queue.enqueue("a.q1", 1);
    await vi.advanceTimersByTimeAsync(300);
    expect(sent).toEqual([{ "a.q1": 1 }]);
    expect(queue.isInflight()).toBe(true);

    // edits arriving during the flight are queued, not sent
    queue.enqueue("b.q1", 2);
    queue.enqueue("c.q1", 4);
    await vi.advanceTimersByTimeAsync(300);
    expect(sent).toHaveLength(1);

    release();
    await vi.runAllTimersAsync();
    expect(sent).toEqual([{ "a.q1": 1 }, { "b.q1": 2, "c.q1": 4 }]);
    expect(queue.pendingCount()).toBe(0);
  });

  it("restores a failed batch without clobbering newer edits", async () => {
    const errors: unknown[] = [];
    let fail = true;
    const sent: Record<string, number>[] = [];
    const queue = new ScoreQueue(
      async (scores) => {
        if (fail) throw new Error("boom");
        sent.push(scores);
      },
      300,
      (error) => errors.push(error),
    );

    queue.enqueue("a.q1", 1);
    queue.enqueue("b.q1", 0);
    await vi.advanceTimersByTimeAsync(300);
    expect(errors).toHaveLength(1);
    expect(queue.pendingCount()).toBe(2);

    // next edit retries the whole batch; the newer a.q1 value wins
    fail = false;
    queue.enqueue("a.q1", 4);
    await vi.advanceTimersByTimeAsync(300);
    expect(sent).toEqual([{ "a.q1": 4, "b.q1": 0 }]);
    expect(queue.pendingCount()).toBe(0);
  });

  it("flush is a no-op when nothing is pending", async () => {
    const sent: Record<string, number>[] = [];
    const queue = new ScoreQueue(async (scores) => {
      sent.push(scores);
    });
    await queue.flush();
    expect(sent).toEqual([]);
  });
});
