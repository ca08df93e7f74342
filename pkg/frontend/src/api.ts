/**
 * Typed client for the session service JSON contract.
 *
 * The UI is a pure consumer of this API: every number it displays comes
 * out of a snapshot, and no payoff logic is duplicated on the client.
 */

export type RoleName = "subject" | "monitor";
export type BetCode = "G" | "Y" | "W";
export type PhaseName =
  | "Setup"
  | "Elicitation"
  | "InformationalDraws"
  | "BetResolution"
  | "Payout"
  | "Questionnaire"
  | "Closed";

export interface SessionConfig {
  prize: number;
  show_up_fee: number;
  risky_white_count: number;
  risky_total: number;
}

export interface ParticipantView {
  participant_id: string;
  role: RoleName;
  submitted: boolean;
  /** Present only once the session is Closed. */
  rule?: string | null;
}

export interface Resolution {
  executed_bet: BetCode;
  won: boolean;
  payment: number;
}

export interface YouView {
  participant_id: string;
  role: RoleName;
  rule: string | null;
  hypothetical_answer: string | null;
  executed_bet: BetCode | null;
  resolution: Resolution | null;
}

export interface Snapshot {
  session_id: string;
  version: number;
  phase: PhaseName;
  mode: string;
  config: SessionConfig;
  info_draws: string[];
  betting: { ambiguous: string | null; risky: string | null };
  participants: ParticipantView[];
  next_phase: PhaseName | null;
  you?: YouView;
}

export interface JoinResult {
  participant_id: string;
  role: RoleName;
  version: number;
}

export interface CreateResult {
  session_id: string;
  join_codes: { subject: string; monitor: string };
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

async function parseError(response: Response): Promise<never> {
  let detail = response.statusText;
  try {
    const body = (await response.json()) as { detail?: unknown };
    if (typeof body.detail === "string") detail = body.detail;
    else if (body.detail) detail = JSON.stringify(body.detail);
  } catch {
    // keep the status text
  }
  throw new ApiError(response.status, detail);
}

export class SessionApi {
  constructor(readonly baseUrl: string = "") {}

  private async post<T>(path: string, body: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) await parseError(response);
    return (await response.json()) as T;
  }

  createSession(opts: {
    mode?: string;
    seed?: number;
    true_omega?: string;
  } = {}): Promise<CreateResult> {
    return this.post("/sessions", opts);
  }

  join(sessionId: string, code: string, name?: string): Promise<JoinResult> {
    return this.post(`/sessions/${sessionId}/join`, { code, name });
  }

  submitRule(sessionId: string, participantId: string, rule: string): Promise<unknown> {
    return this.post(`/sessions/${sessionId}/rule`, {
      participant_id: participantId,
      rule,
    });
  }

  postInfoDraw(sessionId: string, participantId: string, color?: string): Promise<unknown> {
    return this.post(`/sessions/${sessionId}/draws`, {
      participant_id: participantId,
      kind: "info",
      color,
    });
  }

  postBettingDraw(
    sessionId: string,
    participantId: string,
    urn: "ambiguous" | "risky",
    color?: string,
  ): Promise<unknown> {
    return this.post(`/sessions/${sessionId}/draws`, {
      participant_id: participantId,
      kind: "betting",
      urn,
      color,
    });
  }

  advancePhase(sessionId: string, participantId: string): Promise<{ phase: PhaseName }> {
    return this.post(`/sessions/${sessionId}/advance`, {
      participant_id: participantId,
    });
  }

  submitQuestionnaire(
    sessionId: string,
    participantId: string,
    hypotheticalAnswer: string,
  ): Promise<unknown> {
    return this.post(`/sessions/${sessionId}/questionnaire`, {
      participant_id: participantId,
      hypothetical_answer: hypotheticalAnswer,
    });
  }

  async state(
    sessionId: string,
    participantId?: string,
    waitVersion?: number,
    timeoutMs?: number,
  ): Promise<Snapshot> {
    const params = new URLSearchParams();
    if (participantId) params.set("participant_id", participantId);
    if (waitVersion !== undefined) {
      params.set("wait_version", String(waitVersion));
      params.set("timeout_ms", String(timeoutMs ?? 10000));
    }
    const qs = params.toString();
    const response = await fetch(
      `${this.baseUrl}/sessions/${sessionId}/state${qs ? "?" + qs : ""}`,
    );
    if (!response.ok) await parseError(response);
    return (await response.json()) as Snapshot;
  }

  exportUrl(sessionId: string): string {
    return `${this.baseUrl}/sessions/${sessionId}/export.csv`;
  }
}
