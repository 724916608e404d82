"""Deterministic code emission: s-expression dialect and PDDL."""

from .pddl import check_pddl, emit_pddl
from .sexpr import SexprError, emit_sexpr, fmt_num, parse_sexpr

__all__ = ["SexprError", "check_pddl", "emit_pddl", "emit_sexpr", "fmt_num",
           "parse_sexpr"]
