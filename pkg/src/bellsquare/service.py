"""HTTP/JSON API for interactive sessions, statistics, colorings, game values.

Sessions are the observers' logbook: each one owns a seed, a square variant,
and an append-only list of round records, replayable as a pure function of
(seed, sequence of requested settings).  State is in memory only; restarting
the server forgets all sessions (an optional append-only JSONL journal can
keep a trace for demos).  Requests within one session are serialized, so
round indices and tallies are race-free; separate sessions are independent.

Endpoints (all JSON, CORS open for the demo UI):

    POST /api/v1/sessions                  {seed?, variant?} -> {id, seed, variant}
    POST /api/v1/sessions/{id}/rounds      {alice_setting?, bob_setting?} or {policy: "random"}
    GET  /api/v1/sessions/{id}/records
    GET  /api/v1/sessions/{id}/stats
    POST /api/v1/coloring/check            {colors: [9 x "red"/"green"], variant?}
    GET  /api/v1/game/values
    GET  /api/v1/health

Seeds are 64-bit; they appear in JSON as decimal strings so JavaScript
clients never round them.  Errors are {code, message, detail}.  Omitting one
party's setting in a round request makes the server draw it from the
session's stream (the "human plays one side" mode); omitting both, or passing
policy "random", draws both.
"""

from __future__ import annotations

import json
import secrets
import threading
from dataclasses import dataclass, field
from functools import lru_cache

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .classical import (
    Game,
    NoCommonPanel,
    check_coloring,
    classical_game_value,
    coloring_from_names,
    element_of_reality_trace,
)
from .experiment import (
    Fixed,
    RoundRecord,
    Setting,
    UniformRandom,
    common_panels,
    empty_tallies,
    run_round,
    tally_record,
    verify_correlation,
    verify_parity,
)
from .magic_square import SETTINGS, Variant


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, detail=None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail


@dataclass
class Session:
    id: str
    seed: int
    variant: Variant
    next_round_index: int = 0
    records: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)
    uses: dict = field(default_factory=dict)
    parity_violations: int = 0
    correlation_violations: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock)


class CreateSessionRequest(BaseModel):
    seed: int | str | None = None
    variant: str | None = None


class PlayRoundRequest(BaseModel):
    alice_setting: str | None = None
    bob_setting: str | None = None
    policy: str | None = None


class ColoringRequest(BaseModel):
    colors: list
    variant: str | None = None


def _parse_variant(token: str | None) -> Variant:
    if token is None:
        return Variant.STANDARD
    try:
        return Variant(token)
    except ValueError:
        raise ApiError(400, "invalid_variant", "unknown variant", detail=token) from None


def _parse_seed(value: int | str | None) -> int:
    if value is None:
        return secrets.randbits(64)
    try:
        seed = int(value)
    except (TypeError, ValueError):
        raise ApiError(400, "invalid_seed", "seed must be an integer", detail=value) from None
    if not 0 <= seed < 2**64:
        raise ApiError(400, "invalid_seed", "seed must fit in 64 bits", detail=value)
    return seed


def _parse_setting(token: str | None, side: str) -> Setting | None:
    if token is None:
        return None
    try:
        return Setting(token)
    except ValueError:
        raise ApiError(
            400, "invalid_setting", f"unknown {side} setting name", detail=token
        ) from None


def _round_response(record: RoundRecord, variant: Variant) -> dict:
    alice_ok = verify_parity(record.alice_panels, record.alice_setting, variant)
    bob_ok = verify_parity(record.bob_panels, record.bob_setting, variant)
    correlation_ok = verify_correlation(record.alice_panels, record.bob_panels)
    if not (alice_ok and bob_ok and correlation_ok):
        raise ApiError(500, "internal_invariant", "simulated round violated the rules")
    payload = record.to_json_dict()
    payload["alice"]["parity_ok"] = alice_ok
    payload["bob"]["parity_ok"] = bob_ok
    payload["common_panels"] = [
        {
            "row": r + 1,
            "col": c + 1,
            "alice_color": record.alice_panels.color_at(r, c).value,
            "bob_color": record.bob_panels.color_at(r, c).value,
            "match": record.alice_panels.color_at(r, c) is record.bob_panels.color_at(r, c),
        }
        for r, c in common_panels(record.alice_setting, record.bob_setting)
    ]
    try:
        payload["reality_chains"] = [c.to_json_dict() for c in element_of_reality_trace(record)]
    except NoCommonPanel:
        payload["reality_chains"] = []
    return payload


@lru_cache(maxsize=None)
def _game_values() -> tuple:
    return tuple(
        classical_game_value(game, Variant.STANDARD)
        for game in (Game.THREE_BY_THREE, Game.SIX_BY_SIX)
    )


def create_app(journal_path: str | None = None) -> FastAPI:
    app = FastAPI(title="bellsquare", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    sessions: dict[str, Session] = {}
    store_lock = threading.Lock()
    journal_lock = threading.Lock()

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"code": exc.code, "message": exc.message, "detail": exc.detail},
        )

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"code": "invalid_request", "message": "malformed request body",
                     "detail": exc.errors()},
        )

    def get_session(session_id: str) -> Session:
        with store_lock:
            session = sessions.get(session_id)
        if session is None:
            raise ApiError(404, "session_not_found", "no such session", detail=session_id)
        return session

    def journal(entry: dict) -> None:
        if journal_path is None:
            return
        with journal_lock, open(journal_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(entry, separators=(",", ":")) + "\n")

    @app.get("/api/v1/health")
    def health():
        return {"status": "ok"}

    @app.post("/api/v1/sessions", status_code=201)
    def create_session(body: CreateSessionRequest):
        variant = _parse_variant(body.variant)
        seed = _parse_seed(body.seed)
        session_id = secrets.token_hex(8)
        session = Session(id=session_id, seed=seed, variant=variant)
        session.counts, session.uses = empty_tallies(variant)
        with store_lock:
            sessions[session_id] = session
        journal({"event": "session", "id": session_id, "seed": str(seed),
                 "variant": variant.value})
        return {"id": session_id, "seed": str(seed), "variant": variant.value}

    @app.post("/api/v1/sessions/{session_id}/rounds")
    def play_round(session_id: str, body: PlayRoundRequest):
        session = get_session(session_id)
        if body.policy is not None and body.policy != "random":
            raise ApiError(400, "invalid_policy", "round policy must be \"random\"",
                           detail=body.policy)
        if body.policy == "random":
            policy = UniformRandom()
        else:
            policy = Fixed(
                alice=_parse_setting(body.alice_setting, "alice"),
                bob=_parse_setting(body.bob_setting, "bob"),
            )
        with session.lock:
            index = session.next_round_index
            record = run_round(policy, session.variant, seed=session.seed, round_index=index)
            session.next_round_index += 1
            session.records.append(record)
            tally_record(record, session.counts, session.uses)
        payload = _round_response(record, session.variant)
        journal({"event": "round", "session": session_id, **payload})
        return payload

    @app.get("/api/v1/sessions/{session_id}/records")
    def get_records(session_id: str):
        session = get_session(session_id)
        with session.lock:
            records = [r.to_json_dict() for r in session.records]
        return {"count": len(records), "records": records}

    @app.get("/api/v1/sessions/{session_id}/stats")
    def get_stats(session_id: str):
        session = get_session(session_id)
        with session.lock:
            return {
                "rounds": session.next_round_index,
                "seed": str(session.seed),
                "variant": session.variant.value,
                "parity_violations": session.parity_violations,
                "correlation_violations": session.correlation_violations,
                "outcomes": {
                    party: {
                        s.value: {
                            "uses": session.uses[party][s.value],
                            "counts": dict(session.counts[party][s.value]),
                        }
                        for s in SETTINGS
                    }
                    for party in ("alice", "bob")
                },
            }

    @app.post("/api/v1/coloring/check")
    def coloring_check(body: ColoringRequest):
        variant = _parse_variant(body.variant)
        if len(body.colors) != 9:
            raise ApiError(400, "invalid_coloring", "exactly 9 colors required",
                           detail=len(body.colors))
        for token in body.colors:
            if token not in ("red", "green"):
                raise ApiError(400, "invalid_color", "colors must be \"red\" or \"green\"",
                               detail=token)
        report = check_coloring(coloring_from_names(body.colors), variant)
        return report.to_json_dict()

    @app.get("/api/v1/game/values")
    def game_values():
        return {"games": [report.to_json_dict() for report in _game_values()]}

    return app
