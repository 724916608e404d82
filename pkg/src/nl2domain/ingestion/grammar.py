"""Deterministic parser for the controlled authoring grammar.

Produces dependency graphs whose extraction-relevant edges (nsubj, dobj,
prep, pobj, pcomp, acomp, xcomp, conj, cc) match what a statistical parser
emits on the bundled corpus.  CoNLL-U input is authoritative when supplied;
this parser keeps the tool self-contained.  The accepted templates are
documented in data/grammar_templates.txt.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..config import data_path, load_json_data
from ..domain_model import singularize
from .graphs import SentenceGraph, Token


class ParseError(ValueError):
    """Sentence outside the controlled grammar; carries the closest template."""

    def __init__(self, sentence: str, reason: str, template_hint: str):
        super().__init__(
            f"cannot parse {sentence!r}: {reason}. "
            f"Nearest matching template: {template_hint} "
            f"(see data/grammar_templates.txt)")
        self.sentence = sentence
        self.reason = reason
        self.template_hint = template_hint


@dataclass
class Lexicon:
    determiners: set[str]
    pronouns: set[str]
    possessives: set[str]
    aux: set[str]
    copula_forms: set[str]
    prepositions: set[str]
    conjunctions: set[str]
    adverbs: set[str]
    adjectives: set[str]
    verbs: set[str]
    lemma_overrides: dict[str, str]
    phrasal_particles: dict[str, set[str]]
    desire_verbs: set[str]
    copular_verbs: set[str]

    @staticmethod
    def load(path: str | None = None) -> "Lexicon":
        raw = load_json_data("lexicon.json") if path is None else _load_file(path)
        return Lexicon(
            determiners=set(raw["determiners"]),
            pronouns=set(raw["pronouns"]),
            possessives=set(raw["possessive_pronouns"]),
            aux=set(raw["aux"]),
            copula_forms=set(raw["copula_forms"]),
            prepositions=set(raw["prepositions"]) | {"including"},
            conjunctions=set(raw["conjunctions"]),
            adverbs=set(raw["adverbs"]),
            adjectives=set(raw["adjectives"]),
            verbs=set(raw["verbs"]),
            lemma_overrides=dict(raw["lemma_overrides"]),
            phrasal_particles={k: set(v) for k, v in raw["phrasal_particles"].items()},
            desire_verbs=set(raw["desire_verbs"]),
            copular_verbs=set(raw["copular_verbs"]),
        )

    def verb_lemma(self, word: str) -> str | None:
        """Base form if the word is a known verb inflection, else None."""
        if word in self.lemma_overrides:
            return self.lemma_overrides[word]
        if word in self.verbs:
            return word
        for candidate in _unconjugate(word):
            if candidate in self.verbs:
                return candidate
        return None


def _load_file(path: str) -> dict:
    import json

    with open(path, encoding="utf-8") as f:
        return json.load(f)


def _unconjugate(word: str) -> list[str]:
    """Candidate base forms for a possibly inflected verb."""
    out = []
    if word.endswith("ies") and len(word) > 4:
        out.append(word[:-3] + "y")
    if word.endswith("es") and len(word) > 3:
        out.append(word[:-2])
    if word.endswith("s") and len(word) > 2:
        out.append(word[:-1])
    if word.endswith("ing") and len(word) > 4:
        stem = word[:-3]
        out += [stem, stem + "e"]
        if len(stem) > 2 and stem[-1] == stem[-2]:
            out.append(stem[:-1])
    if word.endswith("ed") and len(word) > 3:
        out += [word[:-2], word[:-1]]
    return out


_TOKEN_RE = re.compile(r"[A-Za-z]+(?:'s)?|\d+(?:\.\d+)?|[^\sA-Za-z\d]")

_NP_STARTERS = {"DET", "ADJ", "NOUN", "PROPN", "PRON", "NUM"}


@dataclass
class _Word:
    text: str
    pos: str
    lemma: str
    index: int = 0
    head: int = 0
    deprel: str = "dep"


def _tag(sentence: str, lex: Lexicon) -> list[_Word]:
    raw = _TOKEN_RE.findall(sentence)
    if not raw:
        raise ParseError(sentence, "no tokens", "T1")
    words: list[_Word] = []
    for i, text in enumerate(raw):
        low = text.lower()
        base = low[:-2] if low.endswith("'s") else low
        if not text[0].isalnum():
            words.append(_Word(text, "PUNCT", text))
            continue
        if re.fullmatch(r"\d+(?:\.\d+)?", text):
            words.append(_Word(text, "NUM", text))
            continue
        if low.endswith("'s"):
            words.append(_Word(text, "PROPN", singularize(base)))
            continue
        if base in lex.determiners:
            words.append(_Word(text, "DET", base))
        elif base in lex.possessives:
            words.append(_Word(text, "PRON", base))
        elif base in lex.pronouns:
            words.append(_Word(text, "PRON", base))
        elif base in lex.aux:
            words.append(_Word(text, "AUX", base))
        elif base in lex.copula_forms:
            words.append(_Word(text, "VERB", "be"))
        elif base == "not":
            words.append(_Word(text, "PART", base))
        elif base in lex.prepositions:
            words.append(_Word(text, "ADP", base))
        elif base in lex.conjunctions:
            words.append(_Word(text, "CCONJ", base))
        elif base in lex.adverbs or (base.endswith("ly") and len(base) > 3):
            words.append(_Word(text, "ADV", base))
        elif base in lex.adjectives:
            words.append(_Word(text, "ADJ", base))
        else:
            verb_lemma = lex.verb_lemma(base)
            if verb_lemma is not None and base.endswith("ing"):
                # gerund: verb when it opens a clause-like complement,
                # noun when it sits in a plain nominal slot
                nxt = raw[i + 1].lower() if i + 1 < len(raw) else ""
                np_next = (nxt in lex.determiners or nxt in lex.possessives
                           or nxt in lex.adjectives
                           or (bool(nxt) and nxt[0].isalpha()
                               and lex.verb_lemma(nxt) is None
                               and nxt not in lex.conjunctions
                               and nxt not in lex.prepositions))
                if np_next:
                    words.append(_Word(text, "VERB", verb_lemma))
                else:
                    words.append(_Word(text, "NOUN", base))
            elif verb_lemma is not None and (i > 0 or text[0].islower()):
                words.append(_Word(text, "VERB", verb_lemma))
            elif text[0].isupper() and i > 0:
                words.append(_Word(text, "PROPN", singularize(base)))
            elif text[0].isupper() and verb_lemma is None:
                words.append(_Word(text, "PROPN", singularize(base)))
            elif verb_lemma is not None:
                words.append(_Word(text, "VERB", verb_lemma))
            else:
                words.append(_Word(text, "NOUN", singularize(base)))
    return words


def _clause_boundaries(words: list[_Word]) -> list[int]:
    """Indices of tokens that join finite clauses (not NP conjuncts).

    Both "and [then] <clause>" and comma-joined clauses split here.
    """
    bounds = []
    for i, w in enumerate(words):
        if w.pos != "CCONJ" and not (w.pos == "PUNCT" and w.text == ","):
            continue
        j = i + 1
        while j < len(words) and words[j].pos == "ADV":
            j += 1
        if j >= len(words):
            continue
        if words[j].pos in {"VERB", "AUX"}:
            # shared-subject VP coordination: "Max eats and drinks juice"
            bounds.append(i)
            continue
        if words[j].pos not in {"PRON", "PROPN", "NOUN", "DET"}:
            continue
        # require a verb later in the would-be clause
        if any(w2.pos in {"VERB", "AUX"} for w2 in words[j:]):
            bounds.append(i)
    return bounds


class _ClauseParser:
    """Parses one clause span; indices refer to the whole-sentence list."""

    def __init__(self, sentence: str, words: list[_Word], lex: Lexicon,
                 fluent_keywords: set[str]):
        self.sentence = sentence
        self.words = words
        self.lex = lex
        self.fluent_keywords = fluent_keywords
        self.root: _Word | None = None

    def fail(self, reason: str, hint: str) -> ParseError:
        return ParseError(self.sentence, reason, hint)

    def parse(self, span: list[_Word], allow_missing_subject: bool = False) -> _Word:
        i = 0
        n = len(span)
        pending_advs: list[_Word] = []

        # leading adverbs ("then ...") attach to the clause verb
        while i < n and span[i].pos == "ADV":
            pending_advs.append(span[i])
            i += 1

        # subject noun phrase (absent in shared-subject conjunct clauses)
        subject, i = self._noun_phrase(span, i)
        if subject is None and not allow_missing_subject:
            raise self.fail("no subject found", "T1")

        # pre-verbal adverbs ("he possibly feels ...")
        while i < n and span[i].pos == "ADV":
            pending_advs.append(span[i])
            i += 1

        # verb cluster: aux* (not)? VERB
        auxes: list[_Word] = []
        while i < n and (span[i].pos == "AUX" or (span[i].pos == "PART" and span[i].lemma == "not")):
            auxes.append(span[i])
            i += 1
        if i >= n or span[i].pos != "VERB":
            where = subject.text if subject is not None else "clause start"
            raise self.fail(f"expected a verb after {where!r}", "T1")
        main = span[i]
        i += 1
        for a in auxes:
            a.head = main.index
            a.deprel = "neg" if a.lemma == "not" else "aux"
        if subject is not None:
            subject.head = main.index
            subject.deprel = "nsubj"
        self.root = main
        for adv in pending_advs:
            adv.head = main.index
            adv.deprel = "advmod"

        # desire-verb chain: "would like to try ..." -> xcomp
        active = main
        while (active.lemma in self.lex.desire_verbs and i + 1 < n
               and span[i].lemma == "to" and span[i + 1].pos == "VERB"):
            to, verb = span[i], span[i + 1]
            to.head, to.deprel = verb.index, "aux"
            verb.head, verb.deprel = active.index, "xcomp"
            active = verb
            i += 2

        i = self._complements(span, i, active)
        if i < n:
            w = span[i]
            raise self.fail(f"unexpected {w.pos} {w.text!r}", "T1")
        return main

    # -- helpers -----------------------------------------------------------

    def _noun_phrase(self, span: list[_Word], i: int) -> tuple[_Word | None, int]:
        """Consume det/amod/poss/compound + head noun; return (head, next_i)."""
        n = len(span)
        mods: list[_Word] = []
        nouns: list[_Word] = []
        while i < n:
            w = span[i]
            if w.pos == "DET":
                mods.append(w)
                w.deprel = "det"
            elif w.pos == "PRON" and w.lemma in self.lex.possessives:
                mods.append(w)
                w.deprel = "poss"
            elif w.pos == "PROPN" and w.text.lower().endswith("'s"):
                mods.append(w)
                w.deprel = "poss"
            elif w.pos == "ADJ" and not nouns:
                mods.append(w)
                w.deprel = "amod"
            elif w.pos in {"NOUN", "PROPN", "PRON", "NUM"}:
                nouns.append(w)
            else:
                break
            i += 1
            if nouns and (i >= n or span[i].pos not in {"NOUN", "PROPN", "NUM"}):
                break
        if not nouns:
            return None, i
        head = nouns[-1]
        for noun in nouns[:-1]:
            noun.head = head.index
            noun.deprel = "compound"
        for m in mods:
            m.head = head.index
        return head, i

    def _is_fluent_keyword(self, span: list[_Word], i: int) -> bool:
        """Does this preposition realize a configured fluent keyword?

        Keyword preps ("such as", "including") attach to the preceding noun,
        not the verb, mirroring how statistical parsers treat them.
        """
        w = span[i]
        for phrase in self.fluent_keywords:
            words = phrase.lower().split()
            if len(words) == 1 and w.lemma == words[0]:
                return True
            if (len(words) == 2 and w.lemma == words[1]
                    and i > 0 and span[i - 1].lemma == words[0]):
                return True
        return False

    def _complements(self, span: list[_Word], i: int, active: _Word) -> int:
        n = len(span)
        last_np: _Word | None = None
        conj_first: _Word | None = None
        pending_cc: _Word | None = None
        pending_advs: list[_Word] = []
        acomp: _Word | None = None
        has_dobj = False

        # particle right after the verb ("try out")
        if (i < n and span[i].pos == "ADP"
                and span[i].lemma in self.lex.phrasal_particles.get(active.lemma, set())):
            span[i].head = active.index
            span[i].deprel = "prt"
            i += 1

        while i < n:
            w = span[i]
            if w.pos == "PUNCT":
                if w.text == "," and i + 1 < n and span[i + 1].pos in _NP_STARTERS and last_np:
                    w.head = (conj_first or last_np).index
                    w.deprel = "punct"
                    i += 1
                    head, i = self._noun_phrase(span, i)
                    if head is None:
                        raise self.fail("dangling comma", "T5")
                    first = conj_first or last_np
                    head.head = first.index
                    head.deprel = "conj"
                    conj_first = first
                    last_np = head
                    continue
                w.head = (self.root or active).index
                w.deprel = "punct"
                i += 1
                continue
            if w.pos == "PART" and w.lemma == "not":
                w.head = active.index
                w.deprel = "neg"
                i += 1
                continue
            if w.pos == "ADV":
                pending_advs.append(w)
                i += 1
                continue
            if w.pos == "ADJ":
                if w.lemma == "such" and i + 1 < n and span[i + 1].lemma == "as":
                    w.head = span[i + 1].index
                    w.deprel = "amod"
                    i += 1
                    continue
                if active.lemma in self.lex.copular_verbs and acomp is None and not has_dobj:
                    w.head = active.index
                    w.deprel = "acomp"
                    acomp = w
                    for adv in pending_advs:
                        adv.head = w.index
                        adv.deprel = "advmod"
                    pending_advs = []
                    i += 1
                    continue
                # attributive adjective of an upcoming noun
                head, j = self._noun_phrase(span, i)
                if head is None:
                    raise self.fail(f"stranded adjective {w.text!r}", "T4")
                i = j
                attach_np = True
            elif w.pos in {"NOUN", "PROPN", "PRON", "NUM"} or w.pos == "DET":
                head, i = self._noun_phrase(span, i)
                if head is None:
                    raise self.fail(f"unexpected {w.text!r}", "T2")
                attach_np = True
            elif w.pos == "ADP":
                prep = w
                if self._is_fluent_keyword(span, i) and last_np is not None:
                    prep.head = last_np.index
                elif acomp is not None and not has_dobj:
                    prep.head = acomp.index
                else:
                    prep.head = active.index
                prep.deprel = "prep"
                i += 1
                # object of the preposition: NP -> pobj, gerund verb -> pcomp
                if i < n and span[i].pos == "VERB":
                    pc = span[i]
                    pc.head = prep.index
                    pc.deprel = "pcomp"
                    i += 1
                    obj, i = self._noun_phrase(span, i)
                    if obj is not None:
                        obj.head = pc.index
                        obj.deprel = "dobj"
                    continue
                obj, i = self._noun_phrase(span, i)
                if obj is None:
                    raise self.fail(f"preposition {prep.text!r} lacks an object", "T1")
                obj.head = prep.index
                obj.deprel = "pobj"
                last_np = obj
                conj_first = None
                continue
            elif w.pos == "CCONJ":
                pending_cc = w
                i += 1
                continue
            elif w.pos == "VERB":
                # trailing bare verb: "sees his team lose"
                w.head = active.index
                w.deprel = "ccomp"
                i += 1
                obj, i = self._noun_phrase(span, i)
                if obj is not None:
                    obj.head = w.index
                    obj.deprel = "dobj"
                continue
            else:
                raise self.fail(f"unexpected {w.pos} {w.text!r}", "T1")

            # shared NP attachment path
            if attach_np:
                if pending_cc is not None and last_np is not None:
                    first = conj_first or last_np
                    pending_cc.head = first.index
                    pending_cc.deprel = "cc"
                    head.head = first.index
                    head.deprel = "conj"
                    conj_first = first
                    pending_cc = None
                elif not has_dobj and acomp is None:
                    head.head = active.index
                    head.deprel = "dobj"
                    has_dobj = True
                    conj_first = None
                else:
                    raise self.fail(f"cannot attach noun phrase at {head.text!r}", "T2")
                last_np = head
                for adv in pending_advs:
                    adv.head = head.index
                    adv.deprel = "advmod"
                pending_advs = []

        for adv in pending_advs:
            adv.head = active.index
            adv.deprel = "advmod"
        if pending_cc is not None:
            pending_cc.head = (self.root or active).index
            pending_cc.deprel = "cc"
        return i


def builtin_parse(sentence: str, lexicon: Lexicon | None = None,
                  fluent_keywords: set[str] | None = None,
                  provenance: int = 0) -> SentenceGraph:
    """Parse a controlled-grammar sentence into a dependency graph."""
    lex = lexicon or _default_lexicon()
    keywords = fluent_keywords if fluent_keywords is not None else {"such as", "including"}
    words = _tag(sentence, lex)
    for idx, w in enumerate(words, start=1):
        w.index = idx

    bounds = _clause_boundaries(words)
    spans: list[list[_Word]] = []
    cc_tokens: list[_Word] = []
    start = 0
    for b in bounds:
        spans.append(words[start:b])
        cc_tokens.append(words[b])
        start = b + 1
    spans.append(words[start:])

    parser = _ClauseParser(sentence, words, lex, keywords)
    roots: list[_Word] = []
    for k, span in enumerate(spans):
        if not span:
            raise parser.fail("empty clause", "T6")
        roots.append(parser.parse(span, allow_missing_subject=k > 0))
        parser.root = None
    first = roots[0]
    for other in roots[1:]:
        other.head = first.index
        other.deprel = "conj"
    for cc in cc_tokens:
        cc.head = first.index
        cc.deprel = "punct" if cc.pos == "PUNCT" else "cc"
    first.head = 0
    first.deprel = "root"

    tokens = tuple(Token(index=w.index, text=w.text, lemma=w.lemma,
                         pos=w.pos, head=w.head, deprel=w.deprel)
                   for w in words)
    return SentenceGraph(tokens, source=sentence, provenance=provenance)


def propn_mentions(text: str, lexicon: Lexicon | None = None) -> list[str]:
    """Slugs of the proper-noun tokens of a text, in order (for coref seeding)."""
    lex = lexicon or _default_lexicon()
    try:
        words = _tag(text, lex)
    except ParseError:
        return []
    return [w.lemma for w in words if w.pos == "PROPN"]


_LEXICON_CACHE: Lexicon | None = None


def _default_lexicon() -> Lexicon:
    global _LEXICON_CACHE
    if _LEXICON_CACHE is None:
        _LEXICON_CACHE = Lexicon.load()
    return _LEXICON_CACHE
