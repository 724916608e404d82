"""PDDL emission (PDDL 1.2 plus PPDDL probabilistic effects) and a syntax checker.

Binary states become nullary predicates, fluents become value-typed
predicates with declared constants, affordances become actions.  Affect
rules have no standard PDDL construct and are emitted as structured ``;;``
comment blocks; the s-expression target is the full-fidelity output.
"""

from __future__ import annotations

from ..domain_model import (
    Cnf,
    DomainBundle,
    DomainError,
    Literal,
    StateKind,
)
from .sexpr import _read_all, _tokenize, fmt_num, SexprError, _Tok

DOMAIN_NAME = "character-domain"


def _atom(bundle: DomainBundle, lit: Literal) -> str:
    decl = bundle.states[lit.state]
    if decl.kind is StateKind.BINARY:
        body = f"({lit.state})"
    else:
        body = f"({lit.state} {lit.value})"
    return body if lit.polarity else f"(not {body})"


def _precondition(bundle: DomainBundle, cnf: Cnf) -> str | None:
    if not cnf.clauses:
        return None
    parts = []
    for clause in cnf.clauses:
        atoms = [_atom(bundle, l) for l in clause]
        parts.append(atoms[0] if len(atoms) == 1 else "(or " + " ".join(atoms) + ")")
    return parts[0] if len(parts) == 1 else "(and " + " ".join(parts) + ")"


def _effect_expr(bundle: DomainBundle, lit: Literal) -> str:
    decl = bundle.states[lit.state]
    if decl.kind is StateKind.BINARY:
        return f"({lit.state})" if lit.polarity else f"(not ({lit.state}))"
    if not lit.polarity:
        return f"(not ({lit.state} {lit.value}))"
    # assigning a fluent deletes every other value
    negations = [f"(not ({lit.state} {v}))" for v in decl.values if v != lit.value]
    if not negations:
        return f"({lit.state} {lit.value})"
    return "(and " + " ".join([f"({lit.state} {lit.value})"] + negations) + ")"


def emit_pddl(bundle: DomainBundle) -> str:
    diagnostics = bundle.validate()
    if diagnostics:
        listing = "; ".join(f"{d.code}: {d.message}" for d in diagnostics)
        raise DomainError(f"cannot emit invalid bundle: {listing}")

    fluents = [s for s in sorted(bundle.states.values(), key=lambda s: s.id)
               if s.kind is StateKind.FLUENT]
    binaries = [s for s in sorted(bundle.states.values(), key=lambda s: s.id)
                if s.kind is StateKind.BINARY]
    has_prob = any(p.probability < 1.0 for a in bundle.affordances
                   for p in a.postconditions)
    has_neg_pre = any(not l.polarity for a in bundle.affordances
                      for l in a.preconditions.literals())
    has_disjunction = any(len(c) > 1 for a in bundle.affordances
                          for c in a.preconditions.clauses)

    reqs = [":strips"]
    if fluents:
        reqs.append(":typing")
    if has_neg_pre:
        reqs.append(":negative-preconditions")
    if has_disjunction:
        reqs.append(":disjunctive-preconditions")
    if has_prob:
        reqs.append(":probabilistic-effects")

    lines = [f"(define (domain {DOMAIN_NAME})",
             f"  (:requirements {' '.join(reqs)})"]
    if fluents:
        lines.append("  (:types value)")
        constants = sorted({v for s in fluents for v in s.values})
        lines.append(f"  (:constants {' '.join(constants)} - value)")
    preds = [f"    ({s.id})" for s in binaries]
    preds += [f"    ({s.id} ?v - value)" for s in fluents]
    if preds:
        lines.append("  (:predicates\n" + "\n".join(preds) + ")")

    for aff in sorted(bundle.affordances, key=lambda a: (a.owner, a.name)):
        lines.append(f"  (:action {aff.owner}_{aff.name}" if _name_clash(bundle, aff)
                     else f"  (:action {aff.name}")
        lines.append("    :parameters ()")
        pre = _precondition(bundle, aff.preconditions)
        if pre is not None:
            lines.append(f"    :precondition {pre}")
        effects = []
        for post in aff.postconditions:
            expr = _effect_expr(bundle, post.literal)
            if post.probability < 1.0:
                expr = f"(probabilistic {fmt_num(post.probability)} {expr})"
            effects.append(expr)
        if effects:
            joined = effects[0] if len(effects) == 1 else "(and " + " ".join(effects) + ")"
            lines.append(f"    :effect {joined}")
        lines[-1] += ")"

    for rule in sorted(bundle.affect_rules, key=lambda r: r.sort_key()):
        when = _precondition(bundle, rule.condition) or "(and)"
        target = rule.target.kind.value + (
            f" {rule.target.name}" if rule.target.name else "")
        lines.append("  ;; affect-rule")
        lines.append(f"  ;;   when: {when}")
        lines.append(f"  ;;   target: {target}")
        lines.append(f"  ;;   change: {rule.change.mode.value} {fmt_num(rule.change.magnitude)}")

    return "\n".join(lines) + "\n)\n"


def _name_clash(bundle: DomainBundle, aff) -> bool:
    return sum(1 for a in bundle.affordances if a.name == aff.name) > 1


# ---------------------------------------------------------------------------
# Syntactic checker
# ---------------------------------------------------------------------------

def check_pddl(text: str) -> list[str]:
    """Structural problems in a PDDL domain document; empty list means OK.

    Checks: balanced parentheses, every used predicate declared with the
    right arity, constants declared, typed action parameters, probabilistic
    effects gated on the :probabilistic-effects requirement.
    """
    problems: list[str] = []
    try:
        forms = _read_all(_tokenize(text))
    except SexprError as exc:
        return [f"unparseable: {exc}"]
    if len(forms) != 1:
        return [f"expected exactly one (define ...) form, found {len(forms)}"]
    form = forms[0]
    if not isinstance(form, list) or not form or _text(form[0]) != "define":
        return ["document is not a (define ...) form"]
    if len(form) < 2 or not isinstance(form[1], list) or \
            _text(form[1][0]) != "domain" or len(form[1]) != 2:
        problems.append("missing (domain NAME) declaration")

    requirements: set[str] = set()
    predicates: dict[str, int] = {}
    constants: set[str] = set()
    actions: list[list] = []

    for section in form[2:]:
        if not isinstance(section, list) or not section:
            problems.append("stray atom at top level")
            continue
        head = _text(section[0])
        if head == ":requirements":
            requirements = {_text(t) for t in section[1:]}
        elif head == ":types":
            pass
        elif head == ":constants":
            names = [_text(t) for t in section[1:]]
            if "-" in names:
                dash = names.index("-")
                constants.update(names[:dash])
                if dash + 1 >= len(names):
                    problems.append(":constants ends with a dangling '-'")
            else:
                problems.append(":constants lack a type")
                constants.update(names)
        elif head == ":predicates":
            for p in section[1:]:
                if not isinstance(p, list) or not p:
                    problems.append("predicate declaration must be a list")
                    continue
                name = _text(p[0])
                arity = sum(1 for t in p[1:] if _text(t).startswith("?"))
                predicates[name] = arity
        elif head == ":action":
            actions.append(section)
        else:
            problems.append(f"unknown section {head!r}")

    for action in actions:
        if len(action) < 2:
            problems.append(":action without a name")
            continue
        name = _text(action[1])
        kw: dict[str, object] = {}
        i = 2
        while i < len(action):
            key = _text(action[i])
            if not key.startswith(":"):
                problems.append(f"action {name}: expected keyword, found {key!r}")
                break
            if i + 1 >= len(action):
                problems.append(f"action {name}: keyword {key} lacks a value")
                break
            kw[key] = action[i + 1]
            i += 2
        params = kw.get(":parameters")
        if params is None:
            problems.append(f"action {name}: missing :parameters")
        elif isinstance(params, list):
            # parameters come in "?var - type" groups
            plist = [_text(t) for t in params]
            j = 0
            while j < len(plist):
                if not plist[j].startswith("?"):
                    problems.append(f"action {name}: bad parameter {plist[j]!r}")
                    j += 1
                elif j + 2 < len(plist) and plist[j + 1] == "-":
                    j += 3
                else:
                    problems.append(f"action {name}: untyped parameter {plist[j]}")
                    j += 1
        else:
            problems.append(f"action {name}: :parameters must be a list")
        if ":precondition" in kw:
            _check_expr(kw[":precondition"], predicates, constants, requirements,
                        problems, f"action {name} precondition", allow_prob=False)
        if ":effect" in kw:
            _check_expr(kw[":effect"], predicates, constants, requirements,
                        problems, f"action {name} effect", allow_prob=True)
    return problems


def _text(node) -> str:
    if isinstance(node, _Tok):
        return node.text
    return "(...)"


def _check_expr(node, predicates, constants, requirements, problems, where,
                allow_prob):
    if isinstance(node, _Tok):
        problems.append(f"{where}: bare atom {node.text!r}")
        return
    if not node:
        problems.append(f"{where}: empty expression")
        return
    head = _text(node[0])
    if head in {"and", "or", "not"}:
        if head == "or" and ":disjunctive-preconditions" not in requirements:
            problems.append(f"{where}: 'or' used without :disjunctive-preconditions")
        for child in node[1:]:
            _check_expr(child, predicates, constants, requirements, problems,
                        where, allow_prob)
        return
    if head == "probabilistic":
        if not allow_prob:
            problems.append(f"{where}: probabilistic form outside an effect")
            return
        if ":probabilistic-effects" not in requirements:
            problems.append(f"{where}: probabilistic effect without "
                            ":probabilistic-effects requirement")
        if len(node) < 3:
            problems.append(f"{where}: probabilistic form needs probability and effect")
            return
        try:
            p = float(_text(node[1]))
            if not 0.0 < p <= 1.0:
                problems.append(f"{where}: probability {p} outside (0, 1]")
        except ValueError:
            problems.append(f"{where}: non-numeric probability {_text(node[1])!r}")
        for child in node[2:]:
            _check_expr(child, predicates, constants, requirements, problems,
                        where, allow_prob)
        return
    if head not in predicates:
        problems.append(f"{where}: undeclared predicate {head!r}")
        return
    args = [_text(t) for t in node[1:]]
    if len(args) != predicates[head]:
        problems.append(f"{where}: predicate {head!r} expects "
                        f"{predicates[head]} args, got {len(args)}")
    for a in args:
        if not a.startswith("?") and a not in constants:
            problems.append(f"{where}: undeclared constant {a!r}")
