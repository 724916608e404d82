#!/usr/bin/env python3
"""Build the bundled toy word-embedding fixture.

Words are grouped into semantic clusters; each cluster owns one coordinate
axis and each word is that axis plus small deterministic noise, unit
normalized and rounded.  The resulting file is small, human-readable, and has
the similarity structure the test-suite and the bundled corpus rely on:
words inside a cluster are near-parallel, words across clusters are
near-orthogonal.
"""

import hashlib
import pathlib

import numpy as np

CLUSTERS = {
    "motion": ["go", "walk", "travel", "visit", "stand", "stay"],
    "place": ["place", "restaurant", "park", "station", "library", "home"],
    "activity": ["activity", "try", "engage", "play", "practice", "guitar"],
    "sport": ["ride", "climb", "race", "racing", "climbing", "exercise"],
    "creature": ["horse", "dog", "bird", "dragon", "animal", "nest"],
    "possession": ["has", "have", "possess", "money", "cash", "own", "buy"],
    "knowledge": ["know", "exam", "study", "learn", "read", "book", "knowledgeable", "fail"],
    "perception": ["aware", "surrounding", "see", "watch", "look"],
    "food": ["eat", "eating", "drink", "juice", "food", "hunger", "hungry", "feed", "fatten"],
    "emotion": ["anger", "angry", "joy", "happy", "fear", "sadness", "sad", "surprise", "disgust", "feel"],
    "virtue": ["honor", "proud", "order", "help", "customer"],
    "rest": ["sleep", "tired", "rest", "bed"],
}

DIM = 16
NOISE = 0.12


def build(seed: int) -> dict[str, np.ndarray]:
    rng = np.random.default_rng(seed)
    vectors = {}
    for axis, (name, words) in enumerate(CLUSTERS.items()):
        base = np.zeros(DIM)
        base[axis] = 1.0
        for word in words:
            v = base + NOISE * rng.standard_normal(DIM)
            v = v / np.linalg.norm(v)
            vectors[word] = np.round(v, 4)
    return vectors


def cos(u, v):
    return float(np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v)))


def check(vecs) -> list[str]:
    problems = []

    def phrase(*words):
        m = np.mean([vecs[w] for w in words], axis=0)
        return m / np.linalg.norm(m)

    # (possess, cash) must select (money) over (go, park) at threshold 0.7
    s_money = cos(phrase("possess", "cash"), phrase("money"))
    s_park = cos(phrase("possess", "cash"), phrase("go", "park"))
    if not (s_money > 0.7 and s_money > s_park + 0.2):
        problems.append(f"possess/cash vs money too weak: {s_money:.3f} vs {s_park:.3f}")
    # (ride, dragon) must stay below 0.8 against unrelated states
    for cand in [("money",), ("go", "park"), ("exam",)]:
        s = cos(phrase("ride", "dragon"), phrase(*cand))
        if s >= 0.8:
            problems.append(f"ride/dragon vs {cand} too similar: {s:.3f}")
    # eating vs hunger must clear the suggestion threshold
    if cos(vecs["eating"], vecs["hunger"]) < 0.7:
        problems.append("eating vs hunger below 0.7")
    return problems


def main() -> None:
    for seed in range(100):
        vecs = build(seed)
        problems = check(vecs)
        if not problems:
            break
    else:
        raise SystemExit("no seed satisfied the constraints")

    out = pathlib.Path(__file__).resolve().parents[1] / "src/nl2domain/data/embeddings_toy.txt"
    lines = [f"{len(vecs)} {DIM}"]
    for word in sorted(vecs):
        coords = " ".join(f"{c:.4f}" for c in vecs[word])
        lines.append(f"{word} {coords}")
    text = "\n".join(lines) + "\n"
    out.write_text(text, encoding="utf-8")
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    print(f"seed used: {seed}")
    print(f"words: {len(vecs)}, dim: {DIM}")
    print(f"sha256: {digest}")


if __name__ == "__main__":
    main()
