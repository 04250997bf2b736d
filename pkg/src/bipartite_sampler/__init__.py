"""Random sampling of bipartite networks with fixed degree sequences.

Trades (curveball/fastball) randomize an ensemble of copies of a starting
network until the distribution of their distances from the start stops
changing under a two-sample Kolmogorov-Smirnov test.
"""

from .core import (
    BipartiteNetwork,
    CanonicalKey,
    DegreeSequencePair,
    canonical_key,
    degree_sequences,
    distance,
    is_realizable,
)
from .datasets import NamedDataset, builtin, load_edgelist, load_incidence, realize
from .ensemble import Ensemble
from .errors import (
    DatasetNotFoundError,
    DegenerateNetworkError,
    InfeasibleMarginsError,
    InvalidInputError,
    NonConvergenceError,
    ParseError,
    SamplerError,
    UniverseTooLargeError,
)
from .oracle import (
    NetworkUniverse,
    SweepSummary,
    ValidationSummary,
    enumerate_universe,
    exact_distance_distribution,
    run_sweep,
    run_validation_experiment,
    validate_sample,
)
from .rng import SplitMix64, derive_seed
from .stats import ChiSquaredResult, KsResult, chi_squared_uniformity, ks_two_sample
from .stopping import (
    DistanceProfile,
    SampleReport,
    StoppingConfig,
    distance_profile,
    run_stopping_rule,
    sample_with_stopping_rule,
)
from .trade import TradeChain, random_trade_step, run_trades, trade

__version__ = "0.1.0"
