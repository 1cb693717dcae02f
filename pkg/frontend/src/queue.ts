// Batches rapid selector changes into one PUT: edits within the debounce
// window coalesce, at most one request is in flight, and edits made during
// a flight are sent right after it completes. On failure the batch is
// folded back into the pending map (without clobbering newer edits) so
// nothing is lost; retry happens on the next edit or explicit flush.

export type SendScores = (scores: Record<string, number>) => Promise<void>;

export class ScoreQueue {
  private pending: Record<string, number> = {};
  private timer: ReturnType<typeof setTimeout> | null = null;
  private inflight = false;

  constructor(
    private send: SendScores,
    private debounceMs = 300,
    private onError: (error: unknown) => void = () => {},
  ) {}

  enqueue(leafId: string, value: number): void {
    this.pending[leafId] = value;
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.flush();
    }, this.debounceMs);
  }

  pendingCount(): number {
    return Object.keys(this.pending).length;
  }

  isInflight(): boolean {
    return this.inflight;
  }

  async flush(): Promise<void> {
    if (this.inflight || this.pendingCount() === 0) return;
    const batch = this.pending;
    this.pending = {};
    this.inflight = true;
    try {
      await this.send(batch);
    } catch (error) {
      this.pending = { ...batch, ...this.pending };
      this.onError(error);
      return;
    } finally {
      this.inflight = false;
    }
    if (this.pendingCount() > 0) {
      await this.flush();
    }
  }
}
