"""Longest increasing paths under slope constraints.

Exact evaluation of the closed-form limit objects (growth regimes, limiting
length density, coupling map, maximal inscribed rectangles) together with
seeded Monte Carlo reproduction of the limit behaviour (shape convergence,
path localization, fluctuation scaling, boundary stationarity).

The chain engines run on a compiled extension when it is built and fall
back to pure Python otherwise; ``hammerlip.kernels.backend()`` reports
which one is active.
"""

from .errors import DegenerateBand, EmptyFeasible, HypothesisNotMet, SizeLimit, WrongCase
from .geometry import (
    AffineMap,
    CaseLabel,
    ConvexPolygon,
    Parallelogram,
    PlanarPoint,
    Rect,
    SlopeBand,
    classify,
    limiting_shape,
    max_inscribed_rectangle,
    max_rectangle_convex,
    order_holds,
    phi_map,
    problem_parallelogram,
)
from .sampler import (
    PointCloud,
    SourceSinkSample,
    child_seed,
    dump_cloud_csv,
    sample_poisson_polygon,
    sample_poisson_rect,
    sample_sources_sinks,
)
from .chains import (
    ChainResult,
    longest_chain_bruteforce,
    longest_chain_in_polygon,
    longest_chain_lipschitz,
    longest_chain_standard,
    optimal_support,
)
from .boundary import (
    BoundaryChainResult,
    HammersleyLine,
    boundary_increment_sinks,
    boundary_increment_sources,
    crossing_check,
    hammersley_lines,
    length_with_boundary,
    z_statistic,
)

__version__ = "0.1.0"
