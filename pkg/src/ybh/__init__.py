"""Exact homology of the normalized Yang-Baxter operators R_(m) over Z[t], t = y^2."""

from .complex import (
    CappedQuotient,
    Final,
    Full,
    Kunneth,
    KunnethQuotient,
    TopCapped,
    UseTop,
    boundary,
    enumerate_basis,
    format_spec,
    parse_spec,
)
from .homology import HomologyModule, homology_direct
from .ring import IntPoly, RatPoly, format_poly, parse_poly
from .smith import SmithDecomposition, snf_integer, snf_polyQ

__version__ = "0.1.0"

__all__ = [
    "CappedQuotient", "Final", "Full", "HomologyModule", "IntPoly", "Kunneth",
    "KunnethQuotient", "RatPoly", "SmithDecomposition", "TopCapped", "UseTop",
    "boundary", "enumerate_basis", "format_poly", "format_spec", "homology_direct",
    "parse_poly", "parse_spec", "snf_integer", "snf_polyQ",
]
