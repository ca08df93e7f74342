/**
 * Versioned snapshot polling with long-poll and reconnect.
 *
 * A dropped connection simply restarts the loop from the last version the
 * client has seen; the versioned state endpoint guarantees convergence to
 * the same snapshot a plain poller would reach.
 */

import { SessionApi, Snapshot } from "./api.js";

export type SnapshotListener = (snapshot: Snapshot) => void;

export class SnapshotPoller {
  private running = false;
  private lastVersion = -1;
  private retryDelayMs = 500;

  constructor(
    private readonly api: SessionApi,
    private readonly sessionId: string,
    private readonly participantId: string | undefined,
    private readonly listener: SnapshotListener,
    private readonly longPollMs: number = 8000,
  ) {}

  get version(): number {
    return this.lastVersion;
  }

  start(): void {
    if (this.running) return;
    this.running = true;
    void this.loop();
  }

  stop(): void {
    this.running = false;
  }

  private async loop(): Promise<void> {
    while (this.running) {
      try {
        const snapshot = await this.api.state(
          this.sessionId,
          this.participantId,
          this.lastVersion >= 0 ? this.lastVersion : undefined,
          this.longPollMs,
        );
        this.retryDelayMs = 500;
        if (snapshot.version !== this.lastVersion) {
          this.lastVersion = snapshot.version;
          this.listener(snapshot);
        }
      } catch {
        // transient failure: back off, then resume from the known version
        await sleep(this.retryDelayMs);
        this.retryDelayMs = Math.min(this.retryDelayMs * 2, 8000);
      }
    }
  }
}

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}
