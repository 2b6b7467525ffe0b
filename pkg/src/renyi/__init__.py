"""Exact conditional probability in Rényi spaces on finite carriers."""

from .disintegration import (
    ConditionalState,
    DominatingMeasure,
    choose_dominating,
    conditional_given,
    conditional_pushforward,
    disintegrate,
    kernel_mass,
    kolmogorov_conditional,
    verify_factorization,
)
from .measure import (
    Carrier,
    Event,
    NonNegFunction,
    SigmaFiniteMeasure,
    Statistic,
    integrate,
    mass,
    pushforward,
    restrict,
    scale,
)
from .state import (
    Bunch,
    ConditionalFamily,
    RenyiState,
    check_consistency,
    close_under_union,
    condition,
    generate_family,
    is_elementary_condition,
    maximal_bunch,
    reconstruct,
    states_equal,
    validate_bunch,
)

__version__ = "0.1.0"
