"""hsx: exact computation with finite hyperseries expansions in omega."""

from .errors import (
    Budget,
    HsxError,
    NormalizationUndecided,
    ParseError,
    StuckError,
    UndecidedError,
)
from .ordinal import Ordinal
from .expr import (
    Monomial,
    NumberExpr,
    THyper,
    TNested,
    TOmega,
    apply_E,
    compare_monomials,
    normalize,
    rewrite_L,
)
from .textio import parse_number, parse_ordinal, print_number

__all__ = [
    "Budget",
    "HsxError",
    "Monomial",
    "NormalizationUndecided",
    "NumberExpr",
    "Ordinal",
    "ParseError",
    "StuckError",
    "THyper",
    "TNested",
    "TOmega",
    "UndecidedError",
    "apply_E",
    "compare_monomials",
    "normalize",
    "parse_number",
    "parse_ordinal",
    "print_number",
    "rewrite_L",
]
