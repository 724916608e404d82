"""Session service, HTTP API, spell checking, and the CLI."""

from .sessions import Session, SessionManager, SessionNotFound
from .spellcheck import SpellChecker, SpellFlag, edit_distance, load_dictionary

__all__ = ["Session", "SessionManager", "SessionNotFound", "SpellChecker",
           "SpellFlag", "edit_distance", "load_dictionary"]
