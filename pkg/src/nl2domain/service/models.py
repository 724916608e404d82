"""Pydantic request/response models for the HTTP API."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class ObjectSpec(BaseModel):
    name: str
    type: str = ""


class CreateSessionRequest(BaseModel):
    objects: list[ObjectSpec] = Field(default_factory=list)
    config: dict = Field(default_factory=dict)


class CreateSessionResponse(BaseModel):
    session_id: str


class SubmitTextRequest(BaseModel):
    text: str
    conllu: Optional[str] = None
    category: Optional[Literal["state", "affordance", "affect"]] = None


class SentenceOutcomeModel(BaseModel):
    sentence: str
    category: str
    status: str
    new_states: list[str] = Field(default_factory=list)
    matched_states: list[str] = Field(default_factory=list)
    affordance: Optional[str] = None
    rule_added: bool = False
    error: Optional[str] = None
    diagnostics: list[str] = Field(default_factory=list)


class SuggestionModel(BaseModel):
    id: str
    kind: str
    prompt: str
    score: float
    status: str
    payload: dict = Field(default_factory=dict)


class SubmitReportModel(BaseModel):
    sentences: list[SentenceOutcomeModel]
    new_states: list[str]
    suggestions: list[SuggestionModel]


class SuggestionListResponse(BaseModel):
    suggestions: list[SuggestionModel]


class SpellcheckRequest(BaseModel):
    text: str
    session_id: Optional[str] = None


class SpellFlagModel(BaseModel):
    token: str
    offset: int
    candidates: list[str]


class SpellcheckResponse(BaseModel):
    flags: list[SpellFlagModel]
