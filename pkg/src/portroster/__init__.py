"""Port shift rostering on top of a small answer-set programming core."""

__version__ = "0.1.0"
