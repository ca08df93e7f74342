/** Browser entry: join screen, then the role-appropriate session view. */

import { ApiError, SessionApi } from "./api.js";
import { escapeHtml, onClick } from "./dom.js";
import { SessionScreen } from "./app.js";

function joinScreen(api: SessionApi, root: HTMLElement): void {
  root.innerHTML = `
    <h1>Two-urn betting session</h1>
    <section class="join">
      <label>Session id <input id="session-id" autocomplete="off"></label>
      <label>Join code <input id="join-code" autocomplete="off"></label>
      <label>Name (optional) <input id="name" autocomplete="off"></label>
      <button id="join" type="button">Join session</button>
      <p id="join-error" class="error" role="alert"></p>
    </section>
    <details>
      <summary>Start a new session</summary>
      <button id="create" type="button">Create session</button>
      <pre id="create-result"></pre>
    </details>`;

  const error = root.querySelector<HTMLElement>("#join-error")!;
  onClick(root, "#join", () => {
    const sessionId = root.querySelector<HTMLInputElement>("#session-id")!.value.trim();
    const code = root.querySelector<HTMLInputElement>("#join-code")!.value.trim();
    const name = root.querySelector<HTMLInputElement>("#name")!.value.trim();
    if (!sessionId || !code) {
      error.textContent = "Enter the session id and your join code.";
      return;
    }
    api
      .join(sessionId, code, name || undefined)
      .then((joined) => {
        const screen = new SessionScreen(
          api,
          root,
          sessionId,
          joined.participant_id,
          joined.role,
        );
        screen.start();
      })
      .catch((e: unknown) => {
        error.textContent =
          e instanceof ApiError ? `${e.status}: ${e.message}` : String(e);
      });
  });
  onClick(root, "#create", () => {
    api
      .createSession({})
      .then((created) => {
        const out = root.querySelector<HTMLElement>("#create-result")!;
        out.textContent =
          `session id: ${created.session_id}\n` +
          `subject code: ${created.join_codes.subject}\n` +
          `monitor code: ${created.join_codes.monitor}`;
      })
      .catch((e: unknown) => {
        error.textContent = escapeHtml(String(e));
      });
  });
}

export function bootstrap(): void {
  const root = document.getElementById("app");
  if (!root) return;
  joinScreen(new SessionApi(""), root);
}

bootstrap();
