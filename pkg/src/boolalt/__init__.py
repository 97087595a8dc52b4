"""Boolean function complexity measures, the alternating number, and
exhaustive checks of the bounds that tie them together."""

from boolalt.core import (
    BoolAltError,
    CapExceeded,
    ParseError,
    PreconditionError,
    Restriction,
    TruthTable,
    format_table,
    parse,
)

__version__ = "0.1.0"

__all__ = [
    "BoolAltError",
    "CapExceeded",
    "ParseError",
    "PreconditionError",
    "Restriction",
    "TruthTable",
    "format_table",
    "parse",
    "__version__",
]
