"""REST facade over the engine.

Stateless JSON in, JSON out: sessions, turns, identification, sleep,
teaching, and read-only memory views. Validation failures map to 400,
unknown ids to 404. With the default configuration the service is
deterministic for a given request sequence.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .dialogue_manager import TurnInput
from .engine import AgentEngine
from .errors import (
    ArthurError,
    UnknownResourceError,
    UnknownSessionError,
    ValidationError,
)
from .memory_core import EmotionLabel
from .persistence import AgentConfig, apply_env, load_config

DEFAULT_HOST = "127.0.0.1"
DEFAULT_PORT = 8717


class TurnRequest(BaseModel):
    text: str | None = None
    declared_person: str | None = None
    declared_emotion: str = EmotionLabel.NEUTRAL.value
    attached_image: str | None = None


class IdentifyRequest(BaseModel):
    name: str


class TeachRequest(BaseModel):
    term: str
    image_path: str


def _reply_json(reply) -> dict:
    return {
        "text": reply.text,
        "expression": reply.expression,
        "retrieved_event_ids": list(reply.retrieved_event_ids),
        "actions": list(reply.actions),
    }


def _report_json(report) -> dict:
    return {
        "reduced": [
            {"resource_id": rid, "old_weight": old, "new_weight": new}
            for rid, old, new in report.reduced
        ],
        "forgotten_resources": list(report.forgotten_resources),
        "forgotten_events": list(report.forgotten_events),
        "stm_cleared_count": report.stm_cleared_count,
    }


def create_app(engine: AgentEngine) -> FastAPI:
    """Build the application around one engine instance."""
    app = FastAPI(title="arthur", version="0.1.0")
    app.state.engine = engine
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(ValidationError)
    async def _validation(request: Request, exc: ValidationError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(UnknownSessionError)
    @app.exception_handler(UnknownResourceError)
    async def _not_found(request: Request, exc: ArthurError) -> JSONResponse:
        return JSONResponse(status_code=404, content={"detail": str(exc)})

    @app.post("/sessions")
    def create_session() -> dict:
        session = engine.create_session()
        return {"session_id": session.id}

    @app.get("/sessions")
    def list_sessions() -> list:
        return engine.list_sessions()

    @app.post("/sessions/{session_id}/turns")
    def post_turn(session_id: str, body: TurnRequest) -> dict:
        try:
            emotion = EmotionLabel(body.declared_emotion.lower())
        except ValueError:
            raise ValidationError(f"unknown emotion {body.declared_emotion!r}") from None
        turn = TurnInput(
            text=body.text,
            declared_person=body.declared_person,
            declared_emotion=emotion,
            attached_image=body.attached_image,
        )
        return _reply_json(engine.post_turn(session_id, turn))

    @app.post("/sessions/{session_id}/identify")
    def identify(session_id: str, body: IdentifyRequest) -> dict:
        if not body.name.strip():
            raise ValidationError("name must be non-empty")
        return _reply_json(engine.identify(session_id, body.name))

    @app.post("/sessions/{session_id}/sleep")
    def sleep(session_id: str) -> dict:
        report, reply = engine.sleep(session_id)
        payload = _reply_json(reply)
        payload["report"] = _report_json(report)
        return payload

    @app.post("/teach")
    def teach(body: TeachRequest) -> dict:
        return _reply_json(engine.teach(body.term, body.image_path))

    @app.get("/sessions/{session_id}/stm")
    def stm(session_id: str) -> dict:
        engine.session(session_id)  # 404 on unknown id
        return engine.stm_view()

    @app.get("/memory/ltm")
    def ltm() -> dict:
        return engine.ltm_view()

    @app.get("/people")
    def people() -> list:
        return engine.people_view()

    @app.get("/events")
    def events(
        cue: str = Query(default=""), k: int = Query(default=3, ge=1)
    ) -> list:
        cues = [part for part in cue.replace(",", " ").split() if part]
        return engine.events_by_cue(cues, k=k)

    return app


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arthur-serve", description="REST service for the memory agent"
    )
    parser.add_argument("--host", default=DEFAULT_HOST)
    parser.add_argument("--port", type=int, default=DEFAULT_PORT)
    parser.add_argument("--ltm", help="path of the long-term store file")
    parser.add_argument("--config", help="key=value config file")
    parser.add_argument(
        "--tick-mode", choices=("turns", "seconds"), help="how decay time advances"
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    import uvicorn

    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config) if args.config else AgentConfig()
        config = apply_env(config)
        if args.ltm:
            config = replace(config, ltm_path=args.ltm)
        if args.tick_mode:
            config = replace(config, tick_mode=args.tick_mode)
    except ArthurError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1

    engine = AgentEngine(config)
    engine.load()
    uvicorn.run(create_app(engine), host=args.host, port=args.port)
    return 0


if __name__ == "__main__":
    sys.exit(main())
