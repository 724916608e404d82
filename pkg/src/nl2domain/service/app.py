"""HTTP API for interactive domain authoring.

Endpoints:
    POST /sessions                                -> session id
    POST /sessions/{id}/text                      -> ingestion report
    GET  /sessions/{id}/domain                    -> bundle (canonical dict)
    GET  /sessions/{id}/suggestions               -> pending suggestions
    POST /sessions/{id}/suggestions/{sid}/accept  -> updated report
    POST /sessions/{id}/suggestions/{sid}/reject  -> updated report
    GET  /sessions/{id}/code?target=sexpr|pddl    -> generated code (text)
    POST /spellcheck                              -> spelling flags
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse

from ..config import PipelineConfig
from ..domain_model import DomainError
from ..ingestion import ConlluError, ParseError
from ..pipeline import SubmitReport
from ..suggestions import Suggestion
from .models import (
    CreateSessionRequest,
    CreateSessionResponse,
    SpellcheckRequest,
    SpellcheckResponse,
    SpellFlagModel,
    SubmitReportModel,
    SubmitTextRequest,
    SuggestionListResponse,
    SuggestionModel,
)
from .sessions import SessionManager, SessionNotFound
from .spellcheck import SpellChecker


def _suggestion_model(s: Suggestion) -> SuggestionModel:
    return SuggestionModel(id=s.id, kind=s.kind, prompt=s.prompt,
                           score=s.score, status=s.status, payload=s.payload)


def _report_model(report: SubmitReport) -> SubmitReportModel:
    return SubmitReportModel(
        sentences=[o.as_dict() for o in report.outcomes],
        new_states=report.new_states,
        suggestions=[_suggestion_model(s) for s in report.suggestions],
    )


def create_app(config: PipelineConfig | None = None) -> FastAPI:
    app = FastAPI(title="nl2domain authoring service", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
        allow_headers=["*"],
    )
    manager = SessionManager(config)
    checker = SpellChecker()
    app.state.manager = manager
    app.state.spellchecker = checker

    def get_session(session_id: str):
        try:
            return manager.get(session_id)
        except SessionNotFound:
            raise HTTPException(status_code=404,
                                detail=f"unknown session {session_id!r}") from None

    @app.post("/sessions", response_model=CreateSessionResponse)
    def create_session(request: CreateSessionRequest) -> CreateSessionResponse:
        try:
            session = manager.create(
                overrides=request.config or None,
                objects=[o.model_dump() for o in request.objects])
        except (DomainError, OSError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return CreateSessionResponse(session_id=session.id)

    @app.post("/sessions/{session_id}/text", response_model=SubmitReportModel)
    def submit_text(session_id: str, request: SubmitTextRequest) -> SubmitReportModel:
        get_session(session_id)
        try:
            report = manager.submit_text(session_id, request.text,
                                         conllu=request.conllu,
                                         category=request.category)
        except (DomainError, ConlluError, ParseError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return _report_model(report)

    @app.get("/sessions/{session_id}/domain")
    def get_domain(session_id: str) -> dict:
        session = get_session(session_id)
        with session.lock:
            return session.bundle.to_dict()

    @app.get("/sessions/{session_id}/suggestions",
             response_model=SuggestionListResponse)
    def get_suggestions(session_id: str) -> SuggestionListResponse:
        session = get_session(session_id)
        with session.lock:
            return SuggestionListResponse(
                suggestions=[_suggestion_model(s) for s in session.pending()])

    def _decide(session_id: str, suggestion_id: str, accept: bool) -> SubmitReportModel:
        get_session(session_id)
        try:
            report = manager.decide_suggestion(session_id, suggestion_id, accept)
        except DomainError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return _report_model(report)

    @app.post("/sessions/{session_id}/suggestions/{suggestion_id}/accept",
              response_model=SubmitReportModel)
    def accept_suggestion(session_id: str, suggestion_id: str) -> SubmitReportModel:
        return _decide(session_id, suggestion_id, accept=True)

    @app.post("/sessions/{session_id}/suggestions/{suggestion_id}/reject",
              response_model=SubmitReportModel)
    def reject_suggestion(session_id: str, suggestion_id: str) -> SubmitReportModel:
        return _decide(session_id, suggestion_id, accept=False)

    @app.get("/sessions/{session_id}/code", response_class=PlainTextResponse)
    def get_code(session_id: str,
                 target: str = Query(default="sexpr")) -> str:
        get_session(session_id)
        try:
            return manager.get_code(session_id, target)
        except DomainError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc

    @app.post("/spellcheck", response_model=SpellcheckResponse)
    def spellcheck(request: SpellcheckRequest) -> SpellcheckResponse:
        vocab: set[str] = set()
        if request.session_id:
            session = get_session(request.session_id)
            with session.lock:
                vocab = session.domain_vocabulary()
        flags = checker.check(request.text, vocab)
        return SpellcheckResponse(flags=[
            SpellFlagModel(token=f.token, offset=f.offset,
                           candidates=list(f.candidates))
            for f in flags
        ])

    return app


app = create_app()
