/**
 * Pure model of the four-conditional-bets form.
 *
 * The subject answers one bet per possible informational-draw pair and may
 * submit only when all four are answered; after submission the plan is
 * locked for the rest of the session.
 */

import { BetCode } from "./api.js";

export type DrawCode = "GG" | "GY" | "YG" | "YY";

export const DRAW_CODES: readonly DrawCode[] = ["GG", "GY", "YG", "YY"];

export const DRAW_QUESTIONS: Record<DrawCode, string> = {
  GG: "If the information draws are Green and Green, which bet do you want to choose?",
  GY: "If the information draws are first Green and then Yellow, which bet do you want to choose?",
  YG: "If the information draws are first Yellow and then Green, which bet do you want to choose?",
  YY: "If the information draws are Yellow and Yellow, which bet do you want to choose?",
};

export const BET_LABELS: Record<BetCode, string> = {
  W: "White",
  G: "Green",
  Y: "Yellow",
};

export const BET_CODES: readonly BetCode[] = ["W", "G", "Y"];

export interface ElicitationState {
  answers: Partial<Record<DrawCode, BetCode>>;
  locked: boolean;
}

export function emptyElicitation(): ElicitationState {
  return { answers: {}, locked: false };
}

export function withAnswer(
  state: ElicitationState,
  draw: DrawCode,
  bet: BetCode,
): ElicitationState {
  if (state.locked) return state;
  return { ...state, answers: { ...state.answers, [draw]: bet } };
}

export function missingAnswers(state: ElicitationState): DrawCode[] {
  return DRAW_CODES.filter((draw) => state.answers[draw] === undefined);
}

export function canSubmit(state: ElicitationState): boolean {
  return !state.locked && missingAnswers(state).length === 0;
}

/** Four-letter rule code in (GG, GY, YG, YY) order, or null if incomplete. */
export function ruleCode(state: ElicitationState): string | null {
  if (missingAnswers(state).length > 0) return null;
  return DRAW_CODES.map((draw) => state.answers[draw]).join("");
}

export function locked(state: ElicitationState): ElicitationState {
  return { ...state, locked: true };
}

/** Rebuild a locked form from an already-submitted rule code. */
export function fromRuleCode(code: string): ElicitationState {
  const answers: Partial<Record<DrawCode, BetCode>> = {};
  DRAW_CODES.forEach((draw, i) => {
    const ch = code[i];
    if (ch === "G" || ch === "Y" || ch === "W") answers[draw] = ch;
  });
  return { answers, locked: true };
}
