"""Configuration and bundled-resource loading.

All catalogs (markers, lexicons, rules, embeddings, fixtures) are plain data
files under ``nl2domain/data``; every path can be overridden per session, via
CLI flags, or through a JSON config file pointed at by ``NL2DOMAIN_CONFIG``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

CONFIG_ENV_VAR = "NL2DOMAIN_CONFIG"


def data_path(name: str) -> Path:
    """Absolute path of a bundled data file."""
    return Path(str(resources.files("nl2domain") / "data" / name))


def load_json_data(name: str) -> dict:
    with open(data_path(name), encoding="utf-8") as f:
        return json.load(f)


@dataclass(frozen=True)
class PipelineConfig:
    """Tunable knobs and resource paths for one authoring session.

    ``match_threshold`` gates state unification; ``suggestion_threshold``
    gates feedback and common-sense suggestions.  Both defaults are
    empirical, documented in the README.
    """

    match_threshold: float = 0.75
    suggestion_threshold: float = 0.6
    strict: bool = False
    embeddings_path: str | None = None          # None -> bundled toy fixture
    markers_path: str | None = None
    rules_path: str | None = None
    lexicon_path: str | None = None
    affect_lexicon_path: str | None = None
    probability_keywords_path: str | None = None
    conceptnet_fixtures: str | None = None      # None -> bundled store
    conceptnet_url: str | None = None           # live endpoint when set
    conceptnet_record_path: str | None = None   # record live edges for replay
    conceptnet_min_weight: float = 1.0
    conceptnet_page_size: int = 20
    min_preconditions: int = 1
    min_postconditions: int = 1
    session_root: str | None = None             # None -> in-memory only

    @staticmethod
    def from_file(path: str | Path) -> "PipelineConfig":
        with open(path, encoding="utf-8") as f:
            raw = json.load(f)
        known = {k: v for k, v in raw.items() if k in PipelineConfig.__dataclass_fields__}
        unknown = set(raw) - set(known) - {"_comment"}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return PipelineConfig(**known)

    @staticmethod
    def from_env(overrides: dict | None = None) -> "PipelineConfig":
        path = os.environ.get(CONFIG_ENV_VAR)
        cfg = PipelineConfig.from_file(path) if path else PipelineConfig()
        if overrides:
            cfg = replace(cfg, **overrides)
        return cfg

    def with_overrides(self, **kwargs) -> "PipelineConfig":
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})
