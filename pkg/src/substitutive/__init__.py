"""Fixed points of primitive substitutions: cutting bars, recognizability,
finite colorings of factors, and window-bounded scanners for monochromatic
powers and factorizations."""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import (
    AmbiguousDesubstitution,
    EmptyWord,
    InvalidSymbol,
    NoBarInside,
    NoRadius,
    NoSeed,
    NotFitted,
    NotInLanguage,
    NotPrimitive,
    ParseError,
    PeriodicWord,
    SubstitutiveError,
    WindowExhausted,
)
from .words import Alphabet, Interval, is_abelian_equivalent, occurrences, parikh, prefix_match_length
from .substitution import (
    FixedPointWindow,
    Substitution,
    builtin,
    empirical_frequencies,
    extend_window,
    fixed_point,
    fixed_point_seeds,
    incidence_matrix,
    is_primitive,
    load_substitution,
    parse_substitution,
)
from .frequency import FrequencyVector, letter_frequencies
from .recognizability import (
    cutting_bars,
    check_presuf,
    decompose,
    desubstitute,
    estimate_recognizability_index,
    is_fitted,
)
from .colorings import (
    FactorizationColoring,
    FrequencyColoring,
    UniformColoring,
    check_well_defined,
    compute_factorization_constants,
    injectivity_radius,
)
from .verifiers import (
    balance_check,
    complexity,
    scan_abelian_powers,
    scan_bounded_gap_monochromatic,
    scan_powers,
    scan_uniform_monochromatic,
    search_monochromatic_factorization,
)
