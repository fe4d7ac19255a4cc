"""Graphical models for causally stationary time series with latent confounders.

The package builds ts-DMAGs (marginals of time series DAGs on a finite
observed window), decides which graphs are ts-DMAGs, and summarizes Markov
equivalence classes as DPAGs under several kinds of background knowledge.
"""

from .canonical import (
    MembershipReport,
    canonical_dag,
    canonical_ts_dag,
    is_stat_ts_dmag,
    is_ts_dmag,
    recover_from_stat,
)
from .equivalence import (
    DpagReport,
    Informativeness,
    Knowledge,
    circle_witnesses,
    compare_informativeness,
    enumerate_class,
    markov_equivalent,
    mi_dpag,
    theorem3_check,
    ts_dpag,
)
from .errors import BudgetExceeded, ConvergenceError, GraphError, InvariantViolation, QueryError
from .generators import random_corpus, random_ts_dag
from .graph import (
    CIRCLE,
    HEAD,
    TAIL,
    GraphKind,
    Mark,
    ObservationScheme,
    TsDagTemplate,
    Vertex,
    WindowGraph,
    ancestors_in,
    induced_window,
    unroll,
    validate_dmag,
)
from .limits import LimitingResult, limiting_ts_dmag, limiting_ts_dpag, window_compare
from .marginal import (
    no_unobservable_window,
    regular_to_subsample,
    stationarify,
    subsample_to_regular,
    ts_dmag,
)
from .properties import Property, check_property
from .separation import (
    LagSet,
    SepQuery,
    ancestor_lag_set,
    common_ancestor,
    d_separated_finite,
    d_separated_tsdag,
    m_separated,
)

__version__ = "0.1.0"
