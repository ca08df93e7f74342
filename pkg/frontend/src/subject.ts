/**
 * Subject screens: the four conditional-bet questions, then a read-only
 * ride through draws, resolution, payout, and the questionnaire.
 *
 * Everything shown comes from the server snapshot; the only client state
 * is the unsubmitted form.
 */

import { BetCode, Snapshot } from "./api.js";
import { colorName, escapeHtml, onClick } from "./dom.js";
import {
  BET_CODES,
  BET_LABELS,
  DRAW_CODES,
  DRAW_QUESTIONS,
  DrawCode,
  ElicitationState,
  canSubmit,
  missingAnswers,
} from "./elicitation.js";

export interface SubjectHandlers {
  onAnswer(draw: DrawCode, bet: BetCode): void;
  onSubmit(): void;
  onQuestionnaire(answer: string): void;
}

const HYPOTHETICAL_OPTIONS = ["White", "Green", "Yellow", "GreenOrYellow"];

function drawList(draws: string[]): string {
  if (draws.length === 0) return "none yet";
  const names = draws.map(colorName);
  return names.length === 1 ? `first ${names[0]}` : `first ${names[0]}, then ${names[1]}`;
}

function formHtml(form: ElicitationState): string {
  const blocks = DRAW_CODES.map((draw) => {
    const options = BET_CODES.map((bet) => {
      const checked = form.answers[draw] === bet ? " checked" : "";
      const disabled = form.locked ? " disabled" : "";
      return `<label class="bet-option">
        <input type="radio" name="bet-${draw}" value="${bet}"${checked}${disabled}>
        ${BET_LABELS[bet]}
      </label>`;
    }).join("\n");
    return `<fieldset class="question" data-draw="${draw}">
      <legend>${escapeHtml(DRAW_QUESTIONS[draw])}</legend>
      ${options}
    </fieldset>`;
  }).join("\n");
  const button = form.locked
    ? ""
    : `<button id="submit-rule" type="button">Submit my four bets</button>
       <p id="form-error" class="error" role="alert"></p>`;
  const lockNote = form.locked
    ? `<p class="locked-note">Your choices are locked in. Waiting for the informational draws.</p>`
    : "";
  return `<section class="elicitation">
    <p>Even though only one of your bets will be implemented, you need to
       answer all four of these questions.</p>
    ${blocks}
    ${button}
    ${lockNote}
  </section>`;
}

function resolutionHtml(snapshot: Snapshot): string {
  const you = snapshot.you;
  if (!you) return "";
  const executed = you.executed_bet
    ? `<p>The informational draws are ${drawList(snapshot.info_draws)}.
        So the bet we will implement is your choice <strong>${colorName(you.executed_bet)}</strong>.</p>`
    : "";
  const betting = `<p>Betting draws — Box B (ambiguous): ${
    snapshot.betting.ambiguous ? colorName(snapshot.betting.ambiguous) : "pending"
  }; Box A (risky): ${
    snapshot.betting.risky ? colorName(snapshot.betting.risky) : "pending"
  }.</p>`;
  let outcome = "";
  if (you.resolution) {
    const r = you.resolution;
    const fee = snapshot.config.show_up_fee;
    const prize = snapshot.config.prize;
    outcome = r.won
      ? `<p class="outcome won">Your bet on ${colorName(r.executed_bet)} <strong>won</strong>.
          Your earnings: $${r.payment} ($${fee} show-up fee + $${prize} prize).</p>`
      : `<p class="outcome lost">Your bet on ${colorName(r.executed_bet)} <strong>lost</strong>.
          Your earnings: $${r.payment} (the show-up fee).</p>`;
  }
  return executed + betting + outcome;
}

function questionnaireHtml(snapshot: Snapshot): string {
  const you = snapshot.you;
  if (!you) return "";
  if (you.hypothetical_answer) {
    return `<p>Thanks — your answer (<strong>${escapeHtml(you.hypothetical_answer)}</strong>) is recorded. Please wait for others.</p>`;
  }
  const options = HYPOTHETICAL_OPTIONS.map(
    (o) => `<option value="${o}">${o === "GreenOrYellow" ? "Green or Yellow" : o}</option>`,
  ).join("");
  return `<section class="questionnaire">
    <label>What choice would you have made if we had instead run the
      experiment without any informational draws?
      <select id="hypothetical">${options}</select>
    </label>
    <button id="submit-questionnaire" type="button">Send answer</button>
  </section>`;
}

function closedHtml(snapshot: Snapshot): string {
  const rows = snapshot.participants
    .filter((p) => p.role === "subject")
    .map(
      (p) =>
        `<tr><td>${escapeHtml(p.participant_id)}</td><td>${escapeHtml(p.rule ?? "-")}</td></tr>`,
    )
    .join("");
  return `<p>The session is closed. All submitted plans:</p>
    <table class="rules"><tr><th>participant</th><th>rule</th></tr>${rows}</table>`;
}

export function renderSubject(
  container: HTMLElement,
  snapshot: Snapshot,
  getForm: () => ElicitationState,
  handlers: SubjectHandlers,
): void {
  // read through a getter: radio changes mutate app state without a
  // re-render, and the submit handler must validate the live state
  const form = getForm();
  const you = snapshot.you;
  let body: string;
  switch (snapshot.phase) {
    case "Setup":
      body = `<p>Welcome! Please wait for the monitor to begin.
        ${snapshot.participants.length} participant(s) connected.</p>`;
      break;
    case "Elicitation":
      body = formHtml(form);
      break;
    case "InformationalDraws":
      body = `<p>The monitor is conducting the informational draws from Box B.</p>
        <p>Draws so far: ${drawList(snapshot.info_draws)}.</p>`;
      break;
    case "BetResolution":
      body = resolutionHtml(snapshot);
      break;
    case "Payout":
      body = resolutionHtml(snapshot);
      break;
    case "Questionnaire":
      body = resolutionHtml(snapshot) + questionnaireHtml(snapshot);
      break;
    case "Closed":
      body = resolutionHtml(snapshot) + closedHtml(snapshot);
      break;
    default:
      body = "";
  }
  container.innerHTML = `<header>
      <h2>Subject ${escapeHtml(you ? you.participant_id : "")}</h2>
      <span class="phase-tag">${snapshot.phase}</span>
    </header>
    ${body}`;

  if (snapshot.phase === "Elicitation" && !form.locked) {
    container
      .querySelectorAll<HTMLInputElement>("input[type=radio]")
      .forEach((input) => {
        input.addEventListener("change", () => {
          const draw = input.name.replace("bet-", "") as DrawCode;
          handlers.onAnswer(draw, input.value as BetCode);
        });
      });
    onClick(container, "#submit-rule", () => {
      const current = getForm();
      if (!canSubmit(current)) {
        const error = container.querySelector<HTMLElement>("#form-error");
        if (error) {
          error.textContent =
            "You need to answer all four of these questions before submitting.";
        }
        container
          .querySelectorAll("fieldset.missing")
          .forEach((f) => f.classList.remove("missing"));
        missingAnswers(current).forEach((draw) => {
          container
            .querySelector(`fieldset[data-draw="${draw}"]`)
            ?.classList.add("missing");
        });
        return;
      }
      handlers.onSubmit();
    });
  }
  if (snapshot.phase === "Questionnaire") {
    onClick(container, "#submit-questionnaire", () => {
      const select = container.querySelector<HTMLSelectElement>("#hypothetical");
      if (select) handlers.onQuestionnaire(select.value);
    });
  }
}
