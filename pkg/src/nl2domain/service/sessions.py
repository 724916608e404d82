"""Session management: per-session state, locking, persistence, replay.

A session is event-sourced: the transcript (submitted text + suggestion
decisions) replayed over an empty bundle reproduces the persisted bundle.
Sessions persist as one directory each (config.json, transcript.jsonl,
bundle.json) when a session root is configured.
"""

from __future__ import annotations

import dataclasses
import json
import secrets
import threading
from dataclasses import dataclass, field
from pathlib import Path

from ..config import PipelineConfig
from ..domain_model import DomainBundle, DomainError
from ..pipeline import Pipeline, Resources, SubmitReport
from ..suggestions import Suggestion, apply_suggestion


class SessionNotFound(KeyError):
    pass


@dataclass
class Session:
    id: str
    config: PipelineConfig
    pipeline: Pipeline
    bundle: DomainBundle
    transcript: list[dict] = field(default_factory=list)
    suggestions: list[Suggestion] = field(default_factory=list)
    decided: dict[str, str] = field(default_factory=dict)
    lock: threading.RLock = field(default_factory=threading.RLock)

    def pending(self) -> list[Suggestion]:
        return [s for s in self.suggestions if s.id not in self.decided]

    def domain_vocabulary(self) -> set[str]:
        vocab: set[str] = set()
        for sid, decl in self.bundle.states.items():
            vocab.add(sid)
            vocab.update(sid.split("_"))
            if decl.kind.value == "fluent":
                vocab.update(decl.values)
        for obj in self.bundle.objects.values():
            vocab.add(obj.name)
            if obj.type_tag:
                vocab.add(obj.type_tag)
        for aff in self.bundle.affordances:
            vocab.add(aff.name)
            vocab.update(aff.name.split("_"))
        return vocab


class SessionManager:
    def __init__(self, config: PipelineConfig | None = None):
        self.default_config = config or PipelineConfig()
        self.sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        self._resources_cache: dict[str, Resources] = {}

    # -- helpers -------------------------------------------------------------

    def _resources(self, config: PipelineConfig) -> Resources:
        key = json.dumps(dataclasses.asdict(config), sort_keys=True)
        if key not in self._resources_cache:
            self._resources_cache[key] = Resources.load(config)
        return self._resources_cache[key]

    def _root(self, config: PipelineConfig) -> Path | None:
        return Path(config.session_root) if config.session_root else None

    def _persist(self, session: Session) -> None:
        root = self._root(session.config)
        if root is None:
            return
        directory = root / session.id
        directory.mkdir(parents=True, exist_ok=True)
        (directory / "config.json").write_text(
            json.dumps(dataclasses.asdict(session.config), indent=2, sort_keys=True)
            + "\n", encoding="utf-8")
        (directory / "bundle.json").write_text(
            session.bundle.to_canonical_text(), encoding="utf-8")
        lines = [json.dumps(e, sort_keys=True) for e in session.transcript]
        (directory / "transcript.jsonl").write_text(
            "\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")

    # -- lifecycle -------------------------------------------------------------

    def create(self, overrides: dict | None = None,
               objects: list[dict] | None = None) -> Session:
        config = self.default_config
        if overrides:
            unknown = set(overrides) - set(PipelineConfig.__dataclass_fields__)
            if unknown:
                raise DomainError(f"unknown config keys: {sorted(unknown)}")
            config = dataclasses.replace(config, **overrides)
        resources = self._resources(config)  # raises on unloadable resources
        pipeline = Pipeline(resources)
        session = Session(id=secrets.token_hex(8), config=config,
                          pipeline=pipeline, bundle=pipeline.new_bundle())
        for obj in objects or []:
            session.bundle.add_object(obj["name"], obj.get("type", ""))
        if objects:
            session.transcript.append({"event": "objects", "objects": objects})
        session.suggestions = pipeline.generate_suggestions(session.bundle, {})
        with self._lock:
            self.sessions[session.id] = session
        self._persist(session)
        return session

    def get(self, session_id: str) -> Session:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise SessionNotFound(session_id) from None

    # -- operations --------------------------------------------------------------

    def submit_text(self, session_id: str, text: str, conllu: str | None = None,
                    category: str | None = None) -> SubmitReport:
        session = self.get(session_id)
        with session.lock:
            bundle, report = session.pipeline.process_text(
                session.bundle, text, category=category, conllu=conllu,
                decided=session.decided)
            session.bundle = bundle
            session.suggestions = report.suggestions
            session.transcript.append({
                "event": "text", "text": text,
                **({"conllu": conllu} if conllu else {}),
                **({"category": category} if category else {}),
            })
            self._persist(session)
            return report

    def decide_suggestion(self, session_id: str, suggestion_id: str,
                          accept: bool) -> SubmitReport:
        session = self.get(session_id)
        with session.lock:
            if suggestion_id in session.decided:
                raise DomainError(
                    f"suggestion {suggestion_id} already "
                    f"{session.decided[suggestion_id]}")
            match = next((s for s in session.suggestions
                          if s.id == suggestion_id), None)
            if match is None:
                raise DomainError(f"unknown suggestion id {suggestion_id!r}")
            if accept:
                work = session.bundle.clone()
                apply_suggestion(
                    work, match,
                    session.pipeline.res.affect_lexicon.default_magnitude)
                session.bundle = work
            session.decided[suggestion_id] = "accepted" if accept else "rejected"
            session.suggestions = session.pipeline.generate_suggestions(
                session.bundle, session.decided)
            session.transcript.append({
                "event": "decision", "suggestion": suggestion_id,
                "action": "accept" if accept else "reject",
            })
            self._persist(session)
            report = SubmitReport(outcomes=[], suggestions=session.suggestions)
            return report

    def get_code(self, session_id: str, target: str) -> str:
        from ..codegen import emit_pddl, emit_sexpr

        session = self.get(session_id)
        with session.lock:
            if target == "sexpr":
                return emit_sexpr(session.bundle)
            if target == "pddl":
                return emit_pddl(session.bundle)
            raise DomainError(f"unknown code target {target!r}; use sexpr or pddl")

    # -- replay ---------------------------------------------------------------

    def replay(self, transcript: list[dict],
               config: PipelineConfig | None = None) -> DomainBundle:
        """Rebuild a bundle by re-running a transcript over an empty bundle."""
        config = config or self.default_config
        pipeline = Pipeline(self._resources(config))
        bundle = pipeline.new_bundle()
        decided: dict[str, str] = {}
        suggestions: list[Suggestion] = []
        for event in transcript:
            kind = event.get("event")
            if kind == "objects":
                for obj in event["objects"]:
                    bundle.add_object(obj["name"], obj.get("type", ""))
            elif kind == "text":
                bundle, report = pipeline.process_text(
                    bundle, event["text"], category=event.get("category"),
                    conllu=event.get("conllu"), decided=decided)
                suggestions = report.suggestions
            elif kind == "decision":
                sid = event["suggestion"]
                match = next((s for s in suggestions if s.id == sid), None)
                if event["action"] == "accept" and match is not None:
                    apply_suggestion(bundle, match,
                                     pipeline.res.affect_lexicon.default_magnitude)
                decided[sid] = event["action"] + "ed"
                suggestions = pipeline.generate_suggestions(bundle, decided)
            else:
                raise DomainError(f"unknown transcript event {kind!r}")
        return bundle

    def load_session(self, session_id: str) -> Session:
        """Load a persisted session directory and verify replay equality."""
        root = self._root(self.default_config)
        if root is None:
            raise DomainError("no session root configured")
        directory = root / session_id
        if not directory.is_dir():
            raise SessionNotFound(session_id)
        config = PipelineConfig.from_file(directory / "config.json")
        transcript = [
            json.loads(line)
            for line in (directory / "transcript.jsonl").read_text(
                encoding="utf-8").splitlines() if line.strip()
        ]
        bundle = self.replay(transcript, config)
        persisted = DomainBundle.from_canonical_text(
            (directory / "bundle.json").read_text(encoding="utf-8"))
        if not bundle.structurally_equal(persisted):
            raise DomainError(
                f"session {session_id}: replay does not reproduce the "
                "persisted bundle")
        pipeline = Pipeline(self._resources(config))
        decided: dict[str, str] = {}
        for event in transcript:
            if event.get("event") == "decision":
                decided[event["suggestion"]] = event["action"] + "ed"
        session = Session(id=session_id, config=config, pipeline=pipeline,
                          bundle=bundle, transcript=transcript, decided=decided)
        session.suggestions = pipeline.generate_suggestions(bundle, decided)
        with self._lock:
            self.sessions[session_id] = session
        return session
