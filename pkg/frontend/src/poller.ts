/** Interval polling with manual tick support so tests can drive it directly. */

export class Poller {
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private readonly fn: () => Promise<void>,
    private readonly intervalMs: number = 2000,
  ) {}

  start(): void {
    if (this.timer !== null) return;
    void this.tick();
    this.timer = setInterval(() => void this.tick(), this.intervalMs);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  async tick(): Promise<void> {
    await this.fn();
  }
}
