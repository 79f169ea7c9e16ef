"""Ant colony optimisation (AS, ASRank, MMAS, ACS) for the travelling salesman problem."""

from .bench import (
    BenchConfig,
    BenchReport,
    SizeCategory,
    load_config,
    pheromone_footprint,
    render_report,
    run_suite,
    size_category,
    win_percentages,
)
from .colony import AcoParams, AntColony, MmasBest, Variant, run
from .distances import RoundingMode, WeightKind
from .estimator import AntColonyTSP, ExactTSP, NearestNeighborTSP
from .exceptions import (
    AcoError,
    InvalidArgumentError,
    InvariantViolationError,
    MalformedHeaderError,
    ParseError,
    SizeLimitError,
    TruncatedSectionError,
    UnsupportedFormatError,
)
from .instance import (
    DistanceMatrix,
    Tour,
    TspInstance,
    build_distance_matrix,
    nearest_neighbor_tour,
    tour_length,
)
from .oracle import OracleResult, brute_force_optimum, exact_optimum, held_karp_optimum
from .records import RunRecord, RunRow, read_run_csv, write_run_csv
from .tsplib import corpus_path, format_tsplib, load_tsplib, parse_tsplib

__version__ = "0.1.0"
