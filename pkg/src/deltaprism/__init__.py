"""δ-rings, Frobenius lifts, Witt vectors and prismatic envelopes at desk scale."""

from .coeff import Coeff, CoeffRing, divp, inv
from .delta_ops import DeltaContext, delta, delta_power, evaluate, frobenius, substitute, sym_delta_basis
from .dpoly import DeltaPoly, VarId, deg_delta, format_poly, parse, parse_poly
from .errors import DeltaPrismError, ParseError
from .prism import DeltaPresentation, EnvelopePresentation, Prism, check_distinguished, envelope_regular
from .witt import WittVector, ghost, witt_add, witt_mul

__all__ = [
    "Coeff", "CoeffRing", "divp", "inv",
    "DeltaContext", "delta", "delta_power", "evaluate", "frobenius", "substitute", "sym_delta_basis",
    "DeltaPoly", "VarId", "deg_delta", "format_poly", "parse", "parse_poly",
    "DeltaPrismError", "ParseError",
    "DeltaPresentation", "EnvelopePresentation", "Prism", "check_distinguished", "envelope_regular",
    "WittVector", "ghost", "witt_add", "witt_mul",
]
