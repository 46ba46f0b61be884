"""Stabilizer-code decoding workbench: GF(2) tools, code constructions,
belief-propagation/OSD decoders, graph-state simulation and Monte Carlo
benchmarking."""

from .bench import BenchmarkConfig, build_code, read_config, run_benchmark, wilson_interval
from .classical import LinearCode, hamming74, linear_code, repetition, transpose_code
from .decoders import (
    BpConfig,
    bp_decode,
    bp_osd,
    exhaustive_mld,
    exhaustive_mwd,
    osd0,
    osd_w,
    success,
)
from .errors import CapacityExceeded, DistanceUnknown, QecError, Unsatisfiable
from .f2 import F2Matrix, from_alist, read_alist, to_alist, write_alist
from .graphstate import Tableau, detectors, foliate, graph_state
from .homology import chain_complex, homology_dimension, hypergraph_product, surface_code
from .noise import (
    DecodingProblem,
    Prior,
    classical_problem,
    decoding_problem,
    depolarizing_problem,
    uniform_prior,
)
from .pauli import PauliOperator
from .quantum import (
    CssCode,
    StabilizerCode,
    css_code,
    five_qubit_code,
    four_two_two_checks,
    stabilizer_code,
)

__version__ = "0.1.0"

__all__ = [
    "BenchmarkConfig",
    "BpConfig",
    "CapacityExceeded",
    "CssCode",
    "DecodingProblem",
    "DistanceUnknown",
    "F2Matrix",
    "LinearCode",
    "PauliOperator",
    "Prior",
    "QecError",
    "StabilizerCode",
    "Tableau",
    "Unsatisfiable",
    "bp_decode",
    "bp_osd",
    "build_code",
    "chain_complex",
    "classical_problem",
    "css_code",
    "decoding_problem",
    "depolarizing_problem",
    "detectors",
    "exhaustive_mld",
    "exhaustive_mwd",
    "five_qubit_code",
    "foliate",
    "four_two_two_checks",
    "from_alist",
    "graph_state",
    "hamming74",
    "homology_dimension",
    "hypergraph_product",
    "linear_code",
    "osd0",
    "osd_w",
    "read_alist",
    "read_config",
    "repetition",
    "run_benchmark",
    "stabilizer_code",
    "success",
    "surface_code",
    "to_alist",
    "transpose_code",
    "uniform_prior",
    "wilson_interval",
    "write_alist",
]
