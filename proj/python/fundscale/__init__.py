"""Minimal-entropy symbol discovery for text and binary messages."""

from ._fundscale import (
    Message,
    SolverConfig,
    analyze_file,
    analyze_text,
    char_report,
    schema_version,
    solve,
)

__all__ = [
    "Message",
    "SolverConfig",
    "analyze_file",
    "analyze_text",
    "char_report",
    "schema_version",
    "solve",
]
