"""Twisted (co)homology of a genus-2 Wirtinger-type integral.

Closed-form intersection matrices, a residue oracle, twisted-cycle algebra,
regularized period quadrature and a verification suite.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    AdmissibilityError,
    ConfigError,
    ConventionError,
    DegenerateConfigError,
    DivergenceError,
    ParseError,
    PoleError,
    ResonanceError,
    SingularityError,
    SumError,
    TailBoundError,
    ToleranceError,
    TruncationError,
    UnknownSymbolError,
    WirtingerError,
)
from .params import (  # noqa: E402
    ExponentVector,
    LauricellaParams,
    TwistSpec,
    derive_exponents,
    dualize,
    fixture_exponents,
    shift_exponents,
    unit_phase,
    validate_admissible,
)
from .multivalued import BranchConfig  # noqa: E402

__all__ = [
    "AdmissibilityError",
    "BranchConfig",
    "ConfigError",
    "ConventionError",
    "DegenerateConfigError",
    "DivergenceError",
    "ExponentVector",
    "LauricellaParams",
    "ParseError",
    "PoleError",
    "ResonanceError",
    "SingularityError",
    "SumError",
    "TailBoundError",
    "ToleranceError",
    "TruncationError",
    "TwistSpec",
    "UnknownSymbolError",
    "WirtingerError",
    "derive_exponents",
    "dualize",
    "fixture_exponents",
    "shift_exponents",
    "unit_phase",
    "validate_admissible",
]
