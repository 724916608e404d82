"""nl2domain: compile constrained natural-language character descriptions
into an executable planning domain."""

__version__ = "0.1.0"
