"""Bundled default catalogs (emotions with PAD coordinates, Reiss motivations)."""

from __future__ import annotations

import json

from .config import load_json_data
from .domain_model import EmotionSpec, MotivationCatalog


def default_emotion_catalog(path: str | None = None) -> tuple[EmotionSpec, ...]:
    if path is None:
        raw = load_json_data("emotions.json")
    else:
        with open(path, encoding="utf-8") as f:
            raw = json.load(f)
    return tuple(EmotionSpec(e["name"], tuple(float(c) for c in e["pad"]))
                 for e in raw["emotions"])


def default_motivation_catalog(path: str | None = None) -> MotivationCatalog:
    if path is None:
        raw = load_json_data("motivations.json")
    else:
        with open(path, encoding="utf-8") as f:
            raw = json.load(f)
    catalog = MotivationCatalog(tuple(raw["factors"]))
    if path is None and len(catalog.factors) != 16:
        raise ValueError("bundled motivation catalog must have exactly 16 factors")
    return catalog
