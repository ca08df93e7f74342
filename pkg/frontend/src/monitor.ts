/**
 * Monitor console: phase controls, draw entry as the physical draws
 * happen, a submission roster that never shows anyone's rule, and the
 * CSV export once the session closes.
 */

import { PhaseName, Snapshot } from "./api.js";
import { colorName, escapeHtml, onClick } from "./dom.js";

export interface MonitorHandlers {
  onAdvance(): void;
  onInfoDraw(color: "G" | "Y"): void;
  onBettingDraw(urn: "ambiguous" | "risky", color: string): void;
}

const ADVANCE_LABELS: Record<PhaseName, string> = {
  Setup: "",
  Elicitation: "Start elicitation",
  InformationalDraws: "Start informational draws",
  BetResolution: "Start betting draws",
  Payout: "Reveal outcomes",
  Questionnaire: "Start questionnaire",
  Closed: "Close session",
};

function rosterHtml(snapshot: Snapshot): string {
  const rows = snapshot.participants
    .map((p) => {
      const status =
        p.role === "monitor"
          ? "monitor"
          : p.submitted
            ? "submitted"
            : "waiting";
      const rule =
        snapshot.phase === "Closed" && p.role === "subject"
          ? ` <code>${escapeHtml(p.rule ?? "")}</code>`
          : "";
      return `<li>${escapeHtml(p.participant_id)} — ${status}${rule}</li>`;
    })
    .join("");
  return `<ul class="roster">${rows}</ul>`;
}

function drawControlsHtml(snapshot: Snapshot): string {
  if (snapshot.phase === "InformationalDraws") {
    const done = snapshot.info_draws.length;
    if (done >= 2) {
      return `<p>Informational draws recorded: ${snapshot.info_draws
        .map(colorName)
        .join(", ")}. Advance when ready.</p>`;
    }
    return `<section class="draw-entry">
      <p>Enter informational draw ${done + 1} of 2 (ball from Box B):</p>
      <button class="info-draw" data-color="G" type="button">Green</button>
      <button class="info-draw" data-color="Y" type="button">Yellow</button>
    </section>`;
  }
  if (snapshot.phase === "BetResolution") {
    const ambiguous = snapshot.betting.ambiguous;
    const risky = snapshot.betting.risky;
    const ambiguousPart = ambiguous
      ? `<p>Box B betting draw: ${colorName(ambiguous)}</p>`
      : `<p>Betting draw from Box B (ambiguous):
           <button class="betting-draw" data-urn="ambiguous" data-color="G" type="button">Green</button>
           <button class="betting-draw" data-urn="ambiguous" data-color="Y" type="button">Yellow</button></p>`;
    const riskyPart = risky
      ? `<p>Box A betting draw: ${colorName(risky)}</p>`
      : `<p>Betting draw from Box A (risky):
           <button class="betting-draw" data-urn="risky" data-color="W" type="button">White</button>
           <button class="betting-draw" data-urn="risky" data-color="R" type="button">Red</button></p>`;
    return `<section class="draw-entry">${ambiguousPart}${riskyPart}</section>`;
  }
  return "";
}

export function renderMonitor(
  container: HTMLElement,
  snapshot: Snapshot,
  handlers: MonitorHandlers,
  exportUrl: string,
): void {
  const advance =
    snapshot.next_phase !== null
      ? `<button id="advance" type="button">${ADVANCE_LABELS[snapshot.next_phase]}</button>`
      : "";
  const exportLink =
    snapshot.phase === "Closed"
      ? `<p><a id="export" href="${exportUrl}" download>Download choices CSV</a></p>`
      : "";
  container.innerHTML = `<header>
      <h2>Monitor console</h2>
      <span class="phase-tag">${snapshot.phase}</span>
    </header>
    ${rosterHtml(snapshot)}
    ${drawControlsHtml(snapshot)}
    <p id="monitor-error" class="error" role="alert"></p>
    ${advance}
    ${exportLink}`;

  onClick(container, "#advance", () => handlers.onAdvance());
  onClick(container, ".info-draw", (el) =>
    handlers.onInfoDraw(el.dataset.color as "G" | "Y"),
  );
  onClick(container, ".betting-draw", (el) =>
    handlers.onBettingDraw(
      el.dataset.urn as "ambiguous" | "risky",
      el.dataset.color ?? "",
    ),
  );
}

export function showMonitorError(container: HTMLElement, message: string): void {
  const slot = container.querySelector<HTMLElement>("#monitor-error");
  if (slot) slot.textContent = message;
}
