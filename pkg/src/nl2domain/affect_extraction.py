"""Affect-rule extraction: state condition -> mood/emotion/motivation change.

The part before the marker names the change ("Max will get extremely angry"),
the part after it the triggering condition ("he fails his exams").  Words and
magnitudes come from the affect lexicon (data/affect_lexicon.json).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .config import load_json_data
from .domain_model import (
    AffectChange,
    AffectKind,
    AffectRule,
    AffectTarget,
    ChangeMode,
    DomainError,
)
from .affordance_extraction import MarkerCatalog, find_marker


class AffectParseError(DomainError):
    pass


@dataclass(frozen=True)
class AffectLexicon:
    emotion_words: dict[str, str]
    mood_words: dict[str, int]
    motivation_words: dict[str, str]
    negation_words: tuple[str, ...]
    magnitude_adverbs: dict[str, float]
    default_magnitude: float

    def __post_init__(self) -> None:
        for adverb, mag in self.magnitude_adverbs.items():
            if not 0.0 < mag <= 1.0:
                raise DomainError(f"magnitude for {adverb!r} outside (0, 1]: {mag}")
        ladder = [self.magnitude_adverbs.get(w) for w in
                  ("slightly", "moderately", "extremely")]
        if all(m is not None for m in ladder) and not ladder[0] < ladder[1] < ladder[2]:
            raise DomainError(
                "magnitude adverbs must be monotone: slightly < moderately < extremely")

    def validate_against(self, emotion_names: list[str],
                         motivation_factors: tuple[str, ...]) -> None:
        for word, emotion in self.emotion_words.items():
            if emotion not in emotion_names:
                raise DomainError(
                    f"affect lexicon maps {word!r} to unknown emotion {emotion!r}")
        for word, factor in self.motivation_words.items():
            if factor not in motivation_factors:
                raise DomainError(
                    f"affect lexicon maps {word!r} to unknown motivation {factor!r}")

    @staticmethod
    def load(path: str | None = None) -> "AffectLexicon":
        if path is None:
            raw = load_json_data("affect_lexicon.json")
        else:
            with open(path, encoding="utf-8") as f:
                raw = json.load(f)
        return AffectLexicon(
            emotion_words=dict(raw["emotion_words"]),
            mood_words={k: int(v) for k, v in raw["mood_words"].items()},
            motivation_words=dict(raw["motivation_words"]),
            negation_words=tuple(raw["negation_words"]),
            magnitude_adverbs={k: float(v) for k, v in raw["magnitude_adverbs"].items()},
            default_magnitude=float(raw["default_magnitude"]),
        )


def split_affect_sentence(sentence: str,
                          markers: MarkerCatalog) -> tuple[str, str] | None:
    """(affect_text, condition_text) split at the first affect marker."""
    hit = find_marker(sentence, markers.affect)
    if hit is None:
        return None
    affect_text = sentence[:hit[0]].strip()
    condition_text = sentence[hit[1]:].strip()
    if not affect_text or not condition_text:
        return None
    return affect_text, condition_text


_SET_PHRASE_RE = re.compile(
    r",?\s*(?:which\s+)?sets?\s+(?:his|her|its|their)?\s*([a-z_]+)\s+to\s+"
    r"(\d+(?:\.\d+)?)",
    re.IGNORECASE)


def extract_set_phrase(text: str, lexicon: AffectLexicon,
                       motivation_factors: tuple[str, ...]) \
        -> tuple[AffectTarget, AffectChange, str] | None:
    """Find a "sets <motivation> to <value>" phrase; returns the remainder too."""
    m = _SET_PHRASE_RE.search(text)
    if m is None:
        return None
    word = m.group(1).lower()
    factor = word if word in motivation_factors else lexicon.motivation_words.get(word)
    if factor is None:
        return None
    value = float(m.group(2))
    remainder = (text[:m.start()] + text[m.end():]).strip()
    return (AffectTarget(AffectKind.MOTIVATION, factor),
            AffectChange(ChangeMode.SET, value), remainder)


def _detect_magnitude(words: list[str], text: str, lexicon: AffectLexicon) -> float:
    for phrase, mag in lexicon.magnitude_adverbs.items():
        if " " in phrase:
            if re.search(r"(?<![\w])" + re.escape(phrase) + r"(?![\w])", text,
                         re.IGNORECASE):
                return mag
    for w in words:
        if w in lexicon.magnitude_adverbs:
            return lexicon.magnitude_adverbs[w]
    return lexicon.default_magnitude


def _detect_negation(text: str, lexicon: AffectLexicon) -> bool:
    return any(re.search(r"(?<![\w])" + re.escape(n) + r"(?![\w])", text,
                         re.IGNORECASE)
               for n in lexicon.negation_words)


def parse_affect_change(affect_text: str, lexicon: AffectLexicon,
                        motivation_factors: tuple[str, ...] = ()) \
        -> tuple[AffectTarget, AffectChange]:
    """Target and change described by the affect segment.

    Scans for emotion words first, then motivation words, then mood words;
    adverbs set the magnitude, negation words flip the direction.
    """
    set_hit = extract_set_phrase(affect_text, lexicon, motivation_factors)
    if set_hit is not None:
        return set_hit[0], set_hit[1]
    words = [w.lower() for w in re.findall(r"[a-z']+", affect_text.lower())]
    magnitude = _detect_magnitude(words, affect_text, lexicon)
    sign = -1 if _detect_negation(affect_text, lexicon) else 1
    for w in words:
        if w in lexicon.emotion_words:
            return (AffectTarget(AffectKind.EMOTION, lexicon.emotion_words[w]),
                    AffectChange(ChangeMode.SHIFT, sign * magnitude))
    for w in words:
        if w in lexicon.motivation_words:
            return (AffectTarget(AffectKind.MOTIVATION, lexicon.motivation_words[w]),
                    AffectChange(ChangeMode.SHIFT, sign * magnitude))
        if w in motivation_factors:
            return (AffectTarget(AffectKind.MOTIVATION, w),
                    AffectChange(ChangeMode.SHIFT, sign * magnitude))
    for w in words:
        if w in lexicon.mood_words:
            return (AffectTarget(AffectKind.MOOD),
                    AffectChange(ChangeMode.SHIFT,
                                 lexicon.mood_words[w] * sign * magnitude))
    content = [w for w in words if len(w) > 2]
    raise AffectParseError(
        f"no affect word recognized in {affect_text!r}; candidate tokens: {content}")
