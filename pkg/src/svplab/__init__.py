"""Lattice sieving for SVP with classical and Grover-cost search accounting."""

from svplab.complexity import (
    ExponentReport,
    Model,
    nv_exponent,
    optimize_exponents,
    ps_exponents,
    table1_report,
)
from svplab.enumeration import EnumResult, brute_force_box, enumerate_shortest
from svplab.errors import (
    DegenerateBasisError,
    InsufficientSampleError,
    ListBlowUpError,
    OracleLimitError,
    ParameterError,
    ReductionStuckError,
    SamplerStuckError,
    SamplingFailure,
)
from svplab.gauss import GsOutcome, GsState, gs_back_reduce, gs_reduce_vector, gs_solve
from svplab.kernels import BACKEND
from svplab.lattice import (
    GramSchmidt,
    LatticeBasis,
    LatticeVector,
    gaussian_heuristic_length,
    gram_schmidt,
    lll_reduce,
    read_basis,
    reduce_mod_fundamental,
    sample_ball,
    sample_lattice_point,
    write_basis,
)
from svplab.nv import NvParams, nv_sieve_step, nv_solve, shell_uniformity_stat
from svplab.ps import SatConstants, SatParams, derive_sat_constants, perturbed_sample, ps_reduce_with_list, ps_solve
from svplab.search import EngineMode, PickPolicy, QueryLedger, SearchEngine, pair_search, search

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DegenerateBasisError",
    "EngineMode",
    "EnumResult",
    "ExponentReport",
    "GramSchmidt",
    "GsOutcome",
    "GsState",
    "InsufficientSampleError",
    "LatticeBasis",
    "LatticeVector",
    "ListBlowUpError",
    "Model",
    "NvParams",
    "OracleLimitError",
    "ParameterError",
    "PickPolicy",
    "QueryLedger",
    "ReductionStuckError",
    "SamplerStuckError",
    "SamplingFailure",
    "SatConstants",
    "SatParams",
    "SearchEngine",
    "brute_force_box",
    "derive_sat_constants",
    "enumerate_shortest",
    "gaussian_heuristic_length",
    "gram_schmidt",
    "gs_back_reduce",
    "gs_reduce_vector",
    "gs_solve",
    "lll_reduce",
    "nv_exponent",
    "nv_sieve_step",
    "nv_solve",
    "optimize_exponents",
    "pair_search",
    "perturbed_sample",
    "ps_exponents",
    "ps_reduce_with_list",
    "ps_solve",
    "read_basis",
    "reduce_mod_fundamental",
    "sample_ball",
    "sample_lattice_point",
    "search",
    "shell_uniformity_stat",
    "table1_report",
    "write_basis",
]
