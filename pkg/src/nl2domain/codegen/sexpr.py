"""S-expression emission and parsing for the planning dialect.

The grammar is fixed by this module (EBNF in the README) and loadable by any
Scheme reader.  Emission is byte-deterministic: stable ordering, two-space
indentation, LF line endings; ``parse_sexpr`` inverts ``emit_sexpr``
structurally, so emit-parse-emit is the identity on bytes.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..catalogs import default_emotion_catalog, default_motivation_catalog
from ..domain_model import (
    Affordance,
    AffectChange,
    AffectKind,
    AffectRule,
    AffectTarget,
    ChangeMode,
    Cnf,
    DomainBundle,
    DomainError,
    EmotionSpec,
    Literal,
    MotivationCatalog,
    PostCondition,
    StateDecl,
    StateKind,
    StateTriple,
)

HEADER = ";; character planning domain\n;; generated by nl2domain -- edits will be overwritten\n"


class SexprError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


def fmt_num(x: float) -> str:
    if x == int(x):
        return f"{int(x)}.0"
    return repr(round(float(x), 6))


def _literal(lit: Literal) -> str:
    if lit.value is None:
        body = lit.state
        return body if lit.polarity else f"(not {body})"
    body = f"(= {lit.state} {lit.value})"
    return body if lit.polarity else f"(not {body})"


def _clauses(cnf: Cnf) -> str:
    return "(" + " ".join(
        "(" + " ".join(_literal(l) for l in clause) + ")" for clause in cnf.clauses
    ) + ")"


def _post_value(lit: Literal) -> str:
    if lit.value is None:
        return "#t" if lit.polarity else "#f"
    return lit.value if lit.polarity else f"(not {lit.value})"


def _post(post: PostCondition) -> str:
    if post.probability == 1.0:
        return f"({post.literal.state} {_post_value(post.literal)} 1.0)"
    return (f"(probabilistic {fmt_num(post.probability)} "
            f"({post.literal.state} {_post_value(post.literal)}))")


def _target(target: AffectTarget) -> str:
    if target.kind is AffectKind.MOOD:
        return "(mood)"
    return f"({target.kind.value} {target.name})"


def emit_sexpr(bundle: DomainBundle) -> str:
    """The bundle as the canonical s-expression document."""
    diagnostics = bundle.validate()
    if diagnostics:
        listing = "; ".join(f"{d.code}: {d.message}" for d in diagnostics)
        raise DomainError(f"cannot emit invalid bundle: {listing}")

    lines: list[str] = [HEADER.rstrip("\n")]

    if bundle.emotion_catalog and tuple(bundle.emotion_catalog) != default_emotion_catalog():
        entries = " ".join(
            f"({e.name} {fmt_num(e.pad[0])} {fmt_num(e.pad[1])} {fmt_num(e.pad[2])})"
            for e in bundle.emotion_catalog)
        lines.append(f"(emotions {entries})")
    if bundle.motivation_catalog.factors and \
            bundle.motivation_catalog != default_motivation_catalog():
        lines.append("(motivations " + " ".join(bundle.motivation_catalog.factors) + ")")

    for obj in sorted(bundle.objects.values(), key=lambda o: o.name):
        parts: list[str] = [f"(define-smart-object {obj.name}"]
        if obj.type_tag:
            parts.append(f"  (type {obj.type_tag})")
        binaries = sorted((s for s in bundle.states.values()
                           if s.owner == obj.name and s.kind is StateKind.BINARY),
                          key=lambda s: s.id)
        fluents = sorted((s for s in bundle.states.values()
                          if s.owner == obj.name and s.kind is StateKind.FLUENT),
                         key=lambda s: s.id)
        affordances = sorted((a for a in bundle.affordances if a.owner == obj.name),
                             key=lambda a: a.name)
        if binaries:
            rows = []
            for s in binaries:
                row = (f"    (state {s.id} :subject {s.triple.subject} "
                       f":predicate {s.triple.predicate}")
                if s.triple.complement:
                    row += f" :complement {s.triple.complement}"
                rows.append(row + ")")
            parts.append("  (states\n" + "\n".join(rows) + ")")
        if fluents:
            rows = [
                f"    (fluent {s.id} :subject {s.owner} :predicate "
                f"{'_'.join(s.name_words())} :values ({' '.join(s.values)}))"
                for s in fluents
            ]
            parts.append("  (fluents\n" + "\n".join(rows) + ")")
        if affordances:
            rows = []
            for a in affordances:
                row = f"    (affordance {a.name}"
                if a.preconditions.clauses:
                    row += f"\n      :pre {_clauses(a.preconditions)}"
                if a.postconditions:
                    row += "\n      :post (" + " ".join(_post(p) for p in a.postconditions) + ")"
                rows.append(row + ")")
            parts.append("  (affordances\n" + "\n".join(rows) + ")")
        lines.append("\n".join(parts) + ")")

    for rule in sorted(bundle.affect_rules, key=lambda r: r.sort_key()):
        when = "(and " + " ".join(
            "(" + " ".join(_literal(l) for l in clause) + ")"
            for clause in rule.condition.clauses) + ")"
        lines.append(
            f"(rule :target {_target(rule.target)} "
            f":change ({rule.change.mode.value} {fmt_num(rule.change.magnitude)}) "
            f":when {when})")

    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Reader
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Tok:
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch in " \t\r":
            col += 1
            i += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            toks.append(_Tok(ch, line, col))
            col += 1
            i += 1
        else:
            start = i
            start_col = col
            while i < n and text[i] not in " \t\r\n();":
                i += 1
                col += 1
            toks.append(_Tok(text[start:i], line, start_col))
    return toks


def _read_all(toks: list[_Tok]):
    forms = []
    pos = 0

    def read_one(idx: int):
        tok = toks[idx]
        if tok.text == "(":
            items = []
            idx += 1
            while True:
                if idx >= len(toks):
                    raise SexprError("unbalanced parenthesis: document ends inside a form",
                                     tok.line, tok.col)
                if toks[idx].text == ")":
                    return items, idx + 1
                item, idx = read_one(idx)
                items.append(item)
        if tok.text == ")":
            raise SexprError("unexpected ')'", tok.line, tok.col)
        return tok, idx + 1

    while pos < len(toks):
        form, pos = read_one(pos)
        forms.append(form)
    return forms


def _expect_atom(node, what: str) -> _Tok:
    if not isinstance(node, _Tok):
        raise SexprError(f"expected {what}, found a list", 0, 0)
    return node


def _num(tok: _Tok) -> float:
    try:
        return float(tok.text)
    except ValueError:
        raise SexprError(f"expected a number, found {tok.text!r}",
                         tok.line, tok.col) from None


def _kwargs(items: list) -> dict[str, object]:
    out: dict[str, object] = {}
    i = 0
    while i < len(items):
        key = items[i]
        if not isinstance(key, _Tok) or not key.text.startswith(":"):
            raise SexprError("expected a :keyword", _pos(key).line, _pos(key).col)
        if i + 1 >= len(items):
            raise SexprError(f"keyword {key.text} lacks a value", key.line, key.col)
        out[key.text[1:]] = items[i + 1]
        i += 2
    return out


def _pos(node) -> _Tok:
    while isinstance(node, list):
        node = node[0] if node else _Tok("()", 0, 0)
    return node


def _parse_literal(node) -> Literal:
    if isinstance(node, _Tok):
        return Literal(node.text)
    head = _expect_atom(node[0], "literal head")
    if head.text == "not":
        inner = _parse_literal(node[1])
        return Literal(inner.state, polarity=False, value=inner.value)
    if head.text == "=":
        state = _expect_atom(node[1], "state id")
        value = _expect_atom(node[2], "fluent value")
        return Literal(state.text, value=value.text)
    raise SexprError(f"unknown literal form {head.text!r}", head.line, head.col)


def _parse_cnf(node) -> Cnf:
    clauses = []
    for clause in node:
        if not isinstance(clause, list):
            raise SexprError("clause must be a list", clause.line, clause.col)
        clauses.append(tuple(_parse_literal(l) for l in clause))
    return Cnf(tuple(clauses))


def _parse_post(node) -> PostCondition:
    head = node[0]
    if isinstance(head, _Tok) and head.text == "probabilistic":
        prob = _num(_expect_atom(node[1], "probability"))
        inner = node[2]
        return PostCondition(_parse_post_literal(inner), prob)
    return PostCondition(_parse_post_literal(node[:-1]),
                         _num(_expect_atom(node[-1], "probability")))


def _parse_post_literal(node) -> Literal:
    state = _expect_atom(node[0], "state id")
    value = node[1]
    if isinstance(value, _Tok):
        if value.text == "#t":
            return Literal(state.text, True)
        if value.text == "#f":
            return Literal(state.text, False)
        return Literal(state.text, True, value.text)
    inner = _expect_atom(value[1], "negated value")
    return Literal(state.text, False, inner.text)


def parse_sexpr(text: str) -> DomainBundle:
    """Rebuild a bundle from an emit_sexpr document (or conforming text)."""
    forms = _read_all(_tokenize(text))
    emotions: tuple[EmotionSpec, ...] | None = None
    motivations: MotivationCatalog | None = None
    objects: list[tuple[str, str]] = []
    states: list[StateDecl] = []
    affordances: list[Affordance] = []
    rules: list[AffectRule] = []

    for form in forms:
        if not isinstance(form, list) or not form:
            tok = _pos(form)
            raise SexprError("top-level atoms are not allowed", tok.line, tok.col)
        head = _expect_atom(form[0], "form head")
        if head.text == "emotions":
            specs = []
            for entry in form[1:]:
                name = _expect_atom(entry[0], "emotion name")
                specs.append(EmotionSpec(name.text,
                                         tuple(_num(_expect_atom(c, "pad")) for c in entry[1:4])))
            emotions = tuple(specs)
        elif head.text == "motivations":
            motivations = MotivationCatalog(
                tuple(_expect_atom(f, "factor").text for f in form[1:]))
        elif head.text == "define-smart-object":
            name = _expect_atom(form[1], "object name").text
            type_tag = ""
            for section in form[2:]:
                sec_head = _expect_atom(section[0], "section head")
                if sec_head.text == "type":
                    type_tag = _expect_atom(section[1], "type tag").text
                elif sec_head.text == "states":
                    for s in section[1:]:
                        kw = _kwargs(s[2:])
                        states.append(StateDecl(
                            id=_expect_atom(s[1], "state id").text, owner=name,
                            kind=StateKind.BINARY,
                            triple=StateTriple(
                                _expect_atom(kw["subject"], "subject").text,
                                _expect_atom(kw["predicate"], "predicate").text,
                                _expect_atom(kw["complement"], "complement").text
                                if "complement" in kw else "")))
                elif sec_head.text == "fluents":
                    for s in section[1:]:
                        kw = _kwargs(s[2:])
                        subject = _expect_atom(kw["subject"], "subject").text
                        predicate = _expect_atom(kw["predicate"], "predicate").text
                        states.append(StateDecl(
                            id=_expect_atom(s[1], "fluent id").text, owner=name,
                            kind=StateKind.FLUENT,
                            variable=f"{subject}_{predicate}",
                            values=tuple(_expect_atom(v, "value").text
                                         for v in kw["values"])))
                elif sec_head.text == "affordances":
                    for a in section[1:]:
                        kw = _kwargs(a[2:])
                        pre = _parse_cnf(kw["pre"]) if "pre" in kw else Cnf()
                        posts = tuple(_parse_post(p) for p in kw.get("post", []))
                        affordances.append(Affordance(
                            name=_expect_atom(a[1], "affordance name").text,
                            owner=name, preconditions=pre, postconditions=posts))
                else:
                    raise SexprError(f"unknown section {sec_head.text!r}",
                                     sec_head.line, sec_head.col)
            objects.append((name, type_tag))
        elif head.text == "rule":
            kw = _kwargs(form[1:])
            target_form = kw["target"]
            tkind = _expect_atom(target_form[0], "target kind").text
            tname = _expect_atom(target_form[1], "target name").text \
                if len(target_form) > 1 else None
            change_form = kw["change"]
            mode = _expect_atom(change_form[0], "change mode").text
            when = kw["when"]
            when_head = _expect_atom(when[0], "and")
            if when_head.text != "and":
                raise SexprError("rule :when must be an (and ...) form",
                                 when_head.line, when_head.col)
            rules.append(AffectRule(
                condition=_parse_cnf(when[1:]),
                target=AffectTarget(AffectKind(tkind), tname),
                change=AffectChange(ChangeMode(mode),
                                    _num(_expect_atom(change_form[1], "magnitude")))))
        else:
            raise SexprError(f"unknown form {head.text!r}", head.line, head.col)

    bundle = DomainBundle(
        emotion_catalog=emotions if emotions is not None else default_emotion_catalog(),
        motivation_catalog=motivations if motivations is not None
        else default_motivation_catalog())
    for name, type_tag in objects:
        bundle.add_object(name, type_tag)
    for decl in states:
        bundle.states[decl.id] = decl
        bundle.add_object(decl.owner)
    for aff in affordances:
        bundle.affordances.append(aff)
    for rule in rules:
        bundle.affect_rules.append(rule)
    return bundle
