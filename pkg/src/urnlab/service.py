"""HTTP service exposing live experiment sessions.

One writer per session: every mutating request is serialized through the
session's lock, appends exactly one event to its append-only log (and its
on-disk NDJSON file when a data directory is configured), and bumps the
snapshot version.  Reads never mutate; clients poll the versioned state
endpoint, optionally long-polling by passing the version they already have.

Authentication is join-code based: the create response returns one code per
role, suited to a trusted lab setting.  Subjects never see other
participants' rules until the session closes.
"""

from __future__ import annotations

import os
import random
import secrets
import threading
from fractions import Fraction
from typing import Optional

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel, Field

from . import engine
from .core import ExperimentConfig
from .engine import (
    EVENT_BETTING_DRAW,
    EVENT_INFO_DRAW,
    EVENT_PARTICIPANT_JOINED,
    EVENT_PHASE_ADVANCED,
    EVENT_QUESTIONNAIRE_ANSWER,
    EVENT_RULE_SUBMITTED,
    DuplicateError,
    Phase,
    Role,
    SessionError,
    SessionRecord,
    UnknownParticipantError,
    WrongPhaseError,
    WrongRoleError,
    next_phase,
)
from .stats import ChoiceDataset, ChoiceRecord, dataset_to_csv_text

LONG_POLL_CAP_MS = 30_000


class SessionNotFound(SessionError):
    pass


class ExportNotReady(SessionError):
    pass


def _status_for(exc: SessionError) -> int:
    if isinstance(exc, SessionNotFound):
        return 404
    if isinstance(exc, UnknownParticipantError):
        return 404
    if isinstance(exc, WrongRoleError):
        return 403
    if isinstance(exc, (DuplicateError, WrongPhaseError, ExportNotReady)):
        return 409
    return 409


class _Slot:
    """A session plus its writer lock and change notification."""

    def __init__(self, record: SessionRecord):
        self.record = record
        self.lock = threading.Lock()
        self.changed = threading.Condition()


class SessionStore:
    """In-memory session registry with append-only NDJSON persistence."""

    def __init__(self, data_dir: Optional[str] = None):
        self.data_dir = data_dir
        self._slots: dict[str, _Slot] = {}
        self._registry_lock = threading.Lock()
        if data_dir:
            os.makedirs(data_dir, exist_ok=True)
            self._load_existing()

    def _log_path(self, session_id: str) -> str:
        return os.path.join(self.data_dir, f"session-{session_id}.ndjson")

    def _load_existing(self) -> None:
        for name in sorted(os.listdir(self.data_dir)):
            if not (name.startswith("session-") and name.endswith(".ndjson")):
                continue
            with open(os.path.join(self.data_dir, name)) as fh:
                events = engine.events_from_ndjson(fh.read())
            record = engine.replay(events)
            self._slots[record.session_id] = _Slot(record)

    def _append_to_disk(self, session_id: str, event: engine.Event) -> None:
        if not self.data_dir:
            return
        with open(self._log_path(session_id), "a") as fh:
            fh.write(event.to_json() + "\n")
            fh.flush()

    def create(self, record: SessionRecord) -> None:
        with self._registry_lock:
            if record.session_id in self._slots:
                raise DuplicateError(f"session {record.session_id!r} exists")
            self._slots[record.session_id] = _Slot(record)
        if self.data_dir:
            with open(self._log_path(record.session_id), "w") as fh:
                for event in record.event_log:
                    fh.write(event.to_json() + "\n")

    def slot(self, session_id: str) -> _Slot:
        slot = self._slots.get(session_id)
        if slot is None:
            raise SessionNotFound(f"no session {session_id!r}")
        return slot

    def get(self, session_id: str) -> SessionRecord:
        return self.slot(session_id).record

    def apply(self, session_id: str, kind: str, payload: dict) -> SessionRecord:
        """Append one event under the session's writer lock."""
        slot = self.slot(session_id)
        with slot.lock:
            event = slot.record.next_event(kind, payload)
            updated = engine.advance(slot.record, event)
            self._append_to_disk(session_id, event)
            slot.record = updated
        with slot.changed:
            slot.changed.notify_all()
        return updated


class CreateSessionBody(BaseModel):
    mode: str = "manual"
    seed: Optional[int] = None
    # seeded mode only: hidden Green frequency driving generated draws,
    # as an exact fraction string like "1/3"
    true_omega: Optional[str] = None
    prize: Optional[float] = None
    show_up_fee: Optional[float] = None
    risky_white_count: Optional[int] = None
    risky_total: Optional[int] = None


class JoinBody(BaseModel):
    code: str
    name: Optional[str] = None


class RuleBody(BaseModel):
    participant_id: str
    rule: str = Field(pattern="^[GYWgyw]{4}$")


class DrawBody(BaseModel):
    participant_id: str
    kind: str  # "info" or "betting"
    urn: Optional[str] = None  # for betting draws: "ambiguous" or "risky"
    color: Optional[str] = None  # required in manual mode


class AdvanceBody(BaseModel):
    participant_id: str


class QuestionnaireBody(BaseModel):
    participant_id: str
    hypothetical_answer: str


def _money(x: Fraction):
    return int(x) if x.denominator == 1 else float(x)


def snapshot(record: SessionRecord, participant_id: Optional[str] = None) -> dict:
    """Per-participant view of a session; rules stay hidden until Closed."""
    closed = record.phase is Phase.CLOSED
    view = {
        "session_id": record.session_id,
        "version": record.version,
        "phase": record.phase.value,
        "mode": record.mode,
        "config": {
            "prize": _money(record.config.prize),
            "show_up_fee": _money(record.config.show_up_fee),
            "risky_white_count": record.config.risky_white_count,
            "risky_total": record.config.risky_total,
        },
        "info_draws": list(record.info_draws),
        "betting": {
            "ambiguous": record.betting_ambiguous,
            "risky": record.betting_risky,
        },
        "participants": [
            {
                "participant_id": p.participant_id,
                "role": p.role.value,
                "submitted": p.rule is not None,
                **({"rule": p.rule.code if p.rule else None} if closed else {}),
            }
            for p in record.participants
        ],
        "next_phase": (next_phase(record.phase).value if next_phase(record.phase) else None),
    }
    if participant_id is not None:
        p = record.participant(participant_id)
        you = {
            "participant_id": p.participant_id,
            "role": p.role.value,
            "rule": p.rule.code if p.rule else None,
            "hypothetical_answer": (
                p.hypothetical_answer.value if p.hypothetical_answer else None
            ),
        }
        executed = record.executed_bet(participant_id) if p.role is Role.SUBJECT else None
        you["executed_bet"] = executed.value if executed else None
        resolution = record.resolution(participant_id) if p.role is Role.SUBJECT else None
        you["resolution"] = (
            {
                "executed_bet": resolution.executed_bet.value,
                "won": resolution.won,
                "payment": _money(resolution.payment),
            }
            if resolution
            else None
        )
        view["you"] = you
    return view


def _seeded_color(record: SessionRecord, choices: str, probability_first: float) -> str:
    """Deterministic draw for seeded sessions, keyed by seed and log position."""
    stream = random.Random(f"{record.seed}:{record.version}")
    return choices[0] if stream.random() < probability_first else choices[1]


def create_app(data_dir: Optional[str] = None, ui_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="urnlab session service")
    store = SessionStore(data_dir)
    app.state.store = store

    @app.exception_handler(SessionError)
    async def _session_error(request: Request, exc: SessionError):
        return JSONResponse(status_code=_status_for(exc), content={"detail": str(exc)})

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        defaults = ExperimentConfig()
        config = ExperimentConfig(
            risky_white_count=body.risky_white_count or defaults.risky_white_count,
            risky_total=body.risky_total or defaults.risky_total,
            prize=Fraction(str(body.prize)) if body.prize is not None else defaults.prize,
            show_up_fee=(
                Fraction(str(body.show_up_fee))
                if body.show_up_fee is not None
                else defaults.show_up_fee
            ),
        )
        session_id = secrets.token_hex(4)
        join_codes = {
            "subject": f"S-{secrets.token_hex(3)}",
            "monitor": f"M-{secrets.token_hex(3)}",
        }
        extra: dict = {"join_codes": join_codes}
        if body.true_omega is not None:
            extra["true_omega"] = str(Fraction(body.true_omega))
        record = engine.new_session(
            session_id,
            mode=body.mode,
            seed=body.seed,
            config=config,
            extra=extra,
        )
        store.create(record)
        return {"session_id": session_id, "join_codes": join_codes}

    def _join_codes(record: SessionRecord) -> dict:
        return record.event_log[0].payload["join_codes"]

    @app.post("/sessions/{session_id}/join")
    def join(session_id: str, body: JoinBody):
        slot = store.slot(session_id)
        codes = _join_codes(slot.record)
        if body.code == codes["monitor"]:
            role = Role.MONITOR
        elif body.code == codes["subject"]:
            role = Role.SUBJECT
        else:
            raise WrongRoleError("unrecognized join code")
        with slot.lock:
            participant_id = f"P{len(slot.record.participants) + 1}"
        payload = {"participant_id": participant_id, "role": role.value}
        if body.name:
            payload["name"] = body.name
        record = store.apply(session_id, EVENT_PARTICIPANT_JOINED, payload)
        return {
            "participant_id": participant_id,
            "role": role.value,
            "version": record.version,
        }

    @app.post("/sessions/{session_id}/rule")
    def submit_rule(session_id: str, body: RuleBody):
        record = store.apply(
            session_id,
            EVENT_RULE_SUBMITTED,
            {"participant_id": body.participant_id, "rule": body.rule.upper()},
        )
        return {"version": record.version, "submitted": True}

    def _hidden_omega(record: SessionRecord) -> float:
        raw = record.event_log[0].payload.get("true_omega")
        return float(Fraction(raw)) if raw is not None else 0.5

    @app.post("/sessions/{session_id}/draws")
    def post_draw(session_id: str, body: DrawBody):
        record = store.get(session_id)
        if body.kind == "info":
            color = body.color
            if record.mode == "seeded" and color is None:
                color = _seeded_color(record, "GY", _hidden_omega(record))
            if color is None:
                raise WrongPhaseError("manual sessions need an explicit draw color")
            updated = store.apply(
                session_id,
                EVENT_INFO_DRAW,
                {"color": color.upper(), "by": body.participant_id},
            )
        elif body.kind == "betting":
            if body.urn not in ("ambiguous", "risky"):
                raise WrongPhaseError("betting draws need urn=ambiguous|risky")
            color = body.color
            if record.mode == "seeded" and color is None:
                if body.urn == "ambiguous":
                    color = _seeded_color(record, "GY", _hidden_omega(record))
                else:
                    color = _seeded_color(record, "WR", float(record.config.white_prob))
            if color is None:
                raise WrongPhaseError("manual sessions need an explicit draw color")
            updated = store.apply(
                session_id,
                EVENT_BETTING_DRAW,
                {"urn": body.urn, "color": color.upper(), "by": body.participant_id},
            )
        else:
            raise WrongPhaseError("draw kind must be 'info' or 'betting'")
        return {"version": updated.version}

    @app.post("/sessions/{session_id}/advance")
    def advance_phase(session_id: str, body: AdvanceBody):
        record = store.get(session_id)
        target = next_phase(record.phase)
        if target is None:
            raise WrongPhaseError("session is already closed")
        updated = store.apply(
            session_id,
            EVENT_PHASE_ADVANCED,
            {"to": target.value, "by": body.participant_id},
        )
        return {"version": updated.version, "phase": updated.phase.value}

    @app.post("/sessions/{session_id}/questionnaire")
    def questionnaire(session_id: str, body: QuestionnaireBody):
        record = store.apply(
            session_id,
            EVENT_QUESTIONNAIRE_ANSWER,
            {
                "participant_id": body.participant_id,
                "hypothetical_answer": body.hypothetical_answer,
            },
        )
        return {"version": record.version}

    @app.get("/sessions/{session_id}/state")
    def get_state(
        session_id: str,
        participant_id: Optional[str] = Query(default=None),
        wait_version: Optional[int] = Query(default=None),
        timeout_ms: int = Query(default=0, ge=0, le=LONG_POLL_CAP_MS),
    ):
        slot = store.slot(session_id)
        if wait_version is not None and timeout_ms > 0:
            deadline = timeout_ms / 1000.0
            with slot.changed:
                if slot.record.version <= wait_version:
                    slot.changed.wait(timeout=deadline)
        return snapshot(slot.record, participant_id)

    @app.get("/sessions/{session_id}/export.csv")
    def export_csv(session_id: str):
        record = store.get(session_id)
        if record.phase is not Phase.CLOSED:
            raise ExportNotReady("export is available once the session is Closed")
        records = tuple(
            ChoiceRecord(
                subject_id=p.participant_id,
                rule=p.rule,
                hypothetical_answer=p.hypothetical_answer,
            )
            for p in record.subjects
            if p.rule is not None
        )
        dataset = ChoiceDataset(records=records)
        return PlainTextResponse(
            dataset_to_csv_text(dataset),
            media_type="text/csv",
            headers={
                "Content-Disposition": f"attachment; filename={session_id}.csv"
            },
        )

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        # API routes above take precedence; everything else serves the UI
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
