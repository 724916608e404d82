"""Word embeddings: loading, phrase vectorization, cosine matching.

The bundled toy fixture (word2vec text format) covers the corpus vocabulary;
full pretrained files load the same way via config.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .config import data_path, load_json_data
from .domain_model import DomainError, StateDecl, StateTriple

log = logging.getLogger(__name__)


class EmbeddingError(ValueError):
    pass


@dataclass(frozen=True)
class EmbeddingTable:
    dimension: int
    vectors: dict[str, np.ndarray]

    def __contains__(self, word: str) -> bool:
        return word in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)

    def get(self, word: str) -> np.ndarray | None:
        return self.vectors.get(word.lower())


@dataclass(frozen=True)
class PhraseFilters:
    """Words dropped before averaging: light verbs and stopwords."""

    light_verbs: frozenset[str]
    stopwords: frozenset[str]

    @staticmethod
    def load(path: str | None = None) -> "PhraseFilters":
        if path is None:
            raw = load_json_data("phrase_filters.json")
        else:
            import json
            with open(path, encoding="utf-8") as f:
                raw = json.load(f)
        return PhraseFilters(light_verbs=frozenset(raw["light_verbs"]),
                             stopwords=frozenset(raw["stopwords"]))


def load_embeddings(path: str | None = None) -> EmbeddingTable:
    """Read a word2vec text file (optional "count dim" header line)."""
    path = path or str(data_path("embeddings_toy.txt"))
    with open(path, encoding="utf-8") as f:
        lines = f.read().splitlines()
    vectors: dict[str, np.ndarray] = {}
    dimension: int | None = None
    start = 0
    if lines:
        parts = lines[0].split()
        if len(parts) == 2 and all(p.isdigit() for p in parts):
            dimension = int(parts[1])
            start = 1
    for line_no, line in enumerate(lines[start:], start=start + 1):
        if not line.strip():
            continue
        dimension = _consume(line, vectors, dimension, path, line_no)
    if not vectors:
        raise EmbeddingError(f"{path}: empty embedding file")
    return EmbeddingTable(dimension=dimension, vectors=vectors)


def _consume(line: str, vectors: dict, dimension: int | None,
             path: str, line_no: int) -> int:
    parts = line.split()
    word = parts[0].lower()
    try:
        vec = np.array([float(x) for x in parts[1:]], dtype=float)
    except ValueError:
        raise EmbeddingError(f"{path}:{line_no}: non-numeric vector component") from None
    if dimension is not None and len(vec) != dimension:
        raise EmbeddingError(
            f"{path}:{line_no}: expected dimension {dimension}, got {len(vec)}")
    if len(vec) == 0:
        raise EmbeddingError(f"{path}:{line_no}: empty vector")
    if word in vectors:
        log.warning("duplicate embedding for %r (line %d): last one wins", word, line_no)
    vectors[word] = vec
    return len(vec)


def phrase_vector(words: list[str], table: EmbeddingTable,
                  filters: PhraseFilters) -> np.ndarray | None:
    """Unit-normalized average of the content-word vectors, or None.

    Light verbs and stopwords are dropped only when at least one content
    word remains; out-of-vocabulary words drop out of the average.
    """
    lowered = [w.lower() for w in words if w]
    content = [w for w in lowered
               if w not in filters.light_verbs and w not in filters.stopwords]
    if not content:
        content = [w for w in lowered if w not in filters.stopwords]
    vecs = [table.vectors[w] for w in content if w in table.vectors]
    if not vecs:
        return None
    mean = np.mean(vecs, axis=0)
    norm = np.linalg.norm(mean)
    if norm == 0:
        return None
    return mean / norm


def similarity(u: np.ndarray, v: np.ndarray) -> float:
    if u.shape != v.shape:
        raise DomainError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0:
        raise DomainError("cosine similarity of a zero vector is undefined")
    return float(np.dot(u, v) / (nu * nv))


def match_state(query: StateTriple, candidates: list[StateDecl],
                table: EmbeddingTable, threshold: float,
                filters: PhraseFilters) -> tuple[StateDecl, float] | None:
    """Best candidate above threshold by phrase cosine; ties break on id.

    The subject is excluded from both phrases: matching is per-owner and the
    caller scopes the candidate list accordingly.
    """
    qvec = phrase_vector(query.words(), table, filters)
    if qvec is None:
        return None
    scored: list[tuple[float, str, StateDecl]] = []
    for decl in candidates:
        cvec = phrase_vector(decl.name_words(), table, filters)
        if cvec is None:
            continue
        scored.append((similarity(qvec, cvec), decl.id, decl))
    if not scored:
        return None
    scored.sort(key=lambda item: (-item[0], item[1]))
    best_score, _, best = scored[0]
    if best_score >= threshold:
        return best, best_score
    return None
