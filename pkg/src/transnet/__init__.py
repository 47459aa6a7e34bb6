"""Transition networks of discrete signals adjustable by reference functions."""

__version__ = "0.1.0"

from .grid import (  # noqa: E402
    DiscreteSignal, GridSpec, iterate_signals, label_to_signal, negate_label, signal_to_label,
)
from .basis import (  # noqa: E402
    BasisTerm, FitEngine, FitOutcome, ReferenceFunctionSpec, build_engine, four_power_set,
    hybrid_extended_set, hybrid_set, polynomial_function, power_function, rms_difference,
    similarity, sine_function,
)
from .coverage import (  # noqa: E402
    AdjustableSets, CoverageReport, compute_adjustable, coverage_index, coverage_sweep,
    relative_coverage, unique_sets,
)
from .netbuild import (  # noqa: E402
    TransitionNetwork, build_network, connected_components, euclidean_distance, reduce_network,
)
from .graphops import (  # noqa: E402
    betweenness, degree, path_length_statistics, random_walk, shortest_paths,
)
from .layout import fruchterman_reingold, render_svg  # noqa: E402
