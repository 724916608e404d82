"""Spell checking against the bundled dictionary plus the session vocabulary."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..config import data_path

_WORD_RE = re.compile(r"[A-Za-z]+(?:'[a-z]+)?|[A-Za-z][A-Za-z_]*")


@dataclass(frozen=True)
class SpellFlag:
    token: str
    offset: int
    candidates: tuple[str, ...]


def load_dictionary(path: str | None = None) -> list[str]:
    """Frequency-ordered word list (most frequent first)."""
    words: list[str] = []
    with open(path or data_path("dictionary.txt"), encoding="utf-8") as f:
        for line in f:
            word = line.strip().lower()
            if word and not word.startswith("#"):
                words.append(word)
    return words


def edit_distance(a: str, b: str, cap: int = 3) -> int:
    """Levenshtein distance, early-exited when it must exceed ``cap``."""
    if abs(len(a) - len(b)) > cap:
        return cap + 1
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        best = i
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            val = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost)
            cur.append(val)
            best = min(best, val)
        if best > cap:
            return cap + 1
        prev = cur
    return prev[-1]


class SpellChecker:
    def __init__(self, dictionary: list[str] | None = None,
                 max_distance: int = 2, max_candidates: int = 5):
        self.words = dictionary if dictionary is not None else load_dictionary()
        self.word_set = set(self.words)
        self.rank = {w: i for i, w in enumerate(self.words)}
        self.max_distance = max_distance
        self.max_candidates = max_candidates

    def known(self, word: str, domain_vocab: set[str]) -> bool:
        low = word.lower()
        if low in self.word_set or low in domain_vocab:
            return True
        if "_" in low:  # domain slugs are exempt when their parts are known
            return all(part in self.word_set or part in domain_vocab
                       for part in low.split("_") if part)
        if low.endswith("'s"):
            return self.known(low[:-2], domain_vocab)
        return False

    def candidates(self, word: str) -> tuple[str, ...]:
        low = word.lower()
        scored: list[tuple[int, int, str]] = []
        for entry in self.words:
            d = edit_distance(low, entry, self.max_distance)
            if d <= self.max_distance:
                scored.append((d, self.rank[entry], entry))
        scored.sort()
        return tuple(w for _d, _r, w in scored[:self.max_candidates])

    def check(self, text: str, domain_vocab: set[str] | None = None) -> list[SpellFlag]:
        vocab = domain_vocab or set()
        flags: list[SpellFlag] = []
        for m in _WORD_RE.finditer(text):
            token = m.group(0)
            if len(token) <= 2 or self.known(token, vocab):
                continue
            flags.append(SpellFlag(token=token, offset=m.start(),
                                   candidates=self.candidates(token)))
        return flags
