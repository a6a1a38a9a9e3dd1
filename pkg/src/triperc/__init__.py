"""Site percolation on a randomly triangulated square lattice.

Each unit square of Z^2 carries one of two diagonals (a fair coin,
independent over squares) and each site is independently red with
probability p. The package provides exact small-domain enumeration, lazy
interface exploration, pivotal-site statistics and a reproducible Monte
Carlo harness for the model's crossing theory, whose critical point is 1/2.
"""

__version__ = "0.1.0"

from .connectivity import (
    Annulus,
    ClusterLabeling,
    build_clusters,
    check_duality,
    has_circuit,
    has_crossing,
)
from .events import (
    AndEvent,
    CircuitEvent,
    ConnectionEvent,
    CrossingEvent,
    Event,
    FixedPathEvent,
    NotEvent,
    OrEvent,
    TrueEvent,
    subrect_crossing,
)
from .exploration import ExitSide, ExplorationResult, LazySource, explore
from .geometry import (
    Axis,
    CellType,
    Color,
    Diag,
    FlipEffect,
    RectDomain,
    classify_cell,
    dump_config,
    flip_increases,
    neighbors,
    parse_config,
)
from .oracle import (
    EnumerationBudgetError,
    ExactResult,
    HypothesisError,
    RussoResult,
    enumerate_prob,
    fkg_margin,
    russo_exact,
    verify_increasing,
    verify_robust,
)
from .pivotal import (
    Estimate,
    EstimationError,
    PivotalReport,
    conditional_pivotal_mean,
    pivotal_sites,
)
from .rng import SamplerKey, color_grid, diag_grid, sample_color, sample_diagonal
