/**
 * Session screen controller: joins, polls snapshots, and re-renders the
 * right view for the participant's role.
 */

import { ApiError, BetCode, SessionApi, Snapshot } from "./api.js";
import {
  DrawCode,
  ElicitationState,
  emptyElicitation,
  fromRuleCode,
  locked,
  ruleCode,
  withAnswer,
} from "./elicitation.js";
import { SnapshotPoller } from "./poller.js";
import { renderMonitor, showMonitorError } from "./monitor.js";
import { renderSubject } from "./subject.js";

export class SessionScreen {
  private form: ElicitationState = emptyElicitation();
  private snapshot: Snapshot | null = null;
  private poller: SnapshotPoller | null = null;

  constructor(
    private readonly api: SessionApi,
    private readonly container: HTMLElement,
    private readonly sessionId: string,
    private readonly participantId: string,
    private readonly role: "subject" | "monitor",
  ) {}

  start(): void {
    this.poller = new SnapshotPoller(
      this.api,
      this.sessionId,
      this.participantId,
      (snapshot) => this.onSnapshot(snapshot),
    );
    this.poller.start();
  }

  stop(): void {
    this.poller?.stop();
  }

  private onSnapshot(snapshot: Snapshot): void {
    this.snapshot = snapshot;
    // a rule already on record wins over any local, unsubmitted state
    if (snapshot.you?.rule && !this.form.locked) {
      this.form = fromRuleCode(snapshot.you.rule);
    }
    this.render();
  }

  private render(): void {
    if (!this.snapshot) return;
    if (this.role === "monitor") {
      renderMonitor(
        this.container,
        this.snapshot,
        {
          onAdvance: () => this.guard(() => this.api.advancePhase(this.sessionId, this.participantId)),
          onInfoDraw: (color) =>
            this.guard(() => this.api.postInfoDraw(this.sessionId, this.participantId, color)),
          onBettingDraw: (urn, color) =>
            this.guard(() =>
              this.api.postBettingDraw(this.sessionId, this.participantId, urn, color),
            ),
        },
        this.api.exportUrl(this.sessionId),
      );
    } else {
      renderSubject(this.container, this.snapshot, () => this.form, {
        onAnswer: (draw: DrawCode, bet: BetCode) => {
          this.form = withAnswer(this.form, draw, bet);
        },
        onSubmit: () => {
          const code = ruleCode(this.form);
          if (!code) return;
          this.form = locked(this.form);
          this.guard(() => this.api.submitRule(this.sessionId, this.participantId, code));
          this.render();
        },
        onQuestionnaire: (answer) =>
          this.guard(() =>
            this.api.submitQuestionnaire(this.sessionId, this.participantId, answer),
          ),
      });
    }
  }

  private guard(action: () => Promise<unknown>): void {
    action().catch((error: unknown) => {
      const message =
        error instanceof ApiError
          ? `${error.status}: ${error.message}`
          : String(error);
      if (this.role === "monitor") {
        showMonitorError(this.container, message);
      } else {
        const slot = this.container.querySelector<HTMLElement>("#form-error");
        if (slot) slot.textContent = message;
      }
    });
  }
}
