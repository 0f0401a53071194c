"""Lattice generation, solver dispatch, seeded experiment batches and slope fits."""

from __future__ import annotations

import csv
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from svplab.enumeration import MAX_ENUM_DIM, enumerate_shortest
from svplab.errors import ParameterError
from svplab.gauss import DEFAULT_COLLISIONS, gs_solve
from svplab.lattice import LatticeBasis, LatticeVector, lll_reduce
from svplab.nv import NvParams, nv_solve
from svplab.ps import DEFAULT_BIGR, DEFAULT_XI, SatParams, mu_schedule, ps_search, ps_solve
from svplab.search import EngineMode, QueryLedger, SearchEngine

log = logging.getLogger(__name__)

ALGOS = ("nv", "ps", "gauss", "enum")
CSV_HEADER = [
    "run_id",
    "n",
    "seed",
    "algo",
    "engine",
    "charged_queries",
    "predicate_evals",
    "wall_ms",
    "found_norm_sq",
    "lambda1_sq",
    "success",
]
SCRAMBLE_OPS = 20
SCRAMBLE_RANGE = 3
# an operation that would push an entry past this is skipped; keeps LLL's
# float Gram-Schmidt accurate and every later product inside int64
SCRAMBLE_LIMIT = 1 << 40


def gen_lattice(n: int, bits: int, seed: int) -> LatticeBasis:
    """Random full-rank basis: identity with a dense first column, then scrambled.

    Row 0 starts as ``(d, 0, ..., 0)`` with ``d`` a ``bits``-bit number and row
    ``i`` as ``(a_i, e_i)`` with ``a_i < 2^bits``, so the determinant is ``d``.
    ``20 n`` unimodular operations ``row_i += k row_j`` with ``k`` in
    ``[-3, 3]`` then hide the structure; operations that would create an
    entry above ``2^40`` in magnitude are skipped (the draws still happen,
    so the stream stays aligned).
    """
    if n < 2:
        raise ParameterError("dimension must be at least 2")
    if not 4 <= bits <= 30:
        raise ParameterError("bits must lie in [4, 30]")
    rng = np.random.default_rng(seed)
    B = [[0] * n for _ in range(n)]
    for i in range(1, n):
        B[i][i] = 1
        B[i][0] = int(rng.integers(0, 1 << bits))
    B[0][0] = int(rng.integers(0, 1 << (bits - 1))) | (1 << (bits - 1))
    for _ in range(SCRAMBLE_OPS * n):
        i, j = (int(x) for x in rng.choice(n, size=2, replace=False))
        k = int(rng.integers(-SCRAMBLE_RANGE, SCRAMBLE_RANGE + 1))
        if k:
            row = [a + k * b for a, b in zip(B[i], B[j])]
            if max(abs(a) for a in row) <= SCRAMBLE_LIMIT:
                B[i] = row
    return LatticeBasis(B)


@dataclass
class SolveResult:
    vector: Optional[LatticeVector]
    ledger: QueryLedger
    detail: dict = field(default_factory=dict)


def make_engine(mode: str, seed: int, pick: Optional[str] = None) -> SearchEngine:
    # the engine's own stream only drives the random pick policy
    return SearchEngine(mode, pick, np.random.default_rng([seed, 1]))


def solve(
    basis: LatticeBasis,
    algo: str,
    engine: str = "classical",
    seed: int = 0,
    *,
    pick: Optional[str] = None,
    gamma: float = 0.97,
    nv_mult: float = 16.0,
    collisions: int = DEFAULT_COLLISIONS,
    xi: float = DEFAULT_XI,
    bigr: float = DEFAULT_BIGR,
    mu_factor: float = 1.01,
    attempts: int = 8,
    lambda1_sq: Optional[int] = None,
) -> SolveResult:
    """Run one solver on ``basis`` (LLL-reduced by the caller).

    For ``ps`` the target ``mu`` is ``mu_factor * lambda_1`` with lambda_1 from
    ``lambda1_sq`` or the enumeration oracle; past the oracle's range a
    decreasing schedule of Gaussian-heuristic guesses is used.
    """
    if algo not in ALGOS:
        raise ParameterError(f"algo must be one of {ALGOS}")
    ledger = QueryLedger()
    rng = np.random.default_rng(seed)
    eng = make_engine(engine, seed, pick)
    if algo == "enum":
        res = enumerate_shortest(basis)
        return SolveResult(res.shortest, ledger, {"nodes": res.nodes_visited})
    if algo == "gauss":
        out = gs_solve(basis, collisions, eng, ledger, rng)
        return SolveResult(out.vector, ledger, {"iterations": out.iterations, "samples": out.samples})
    if algo == "nv":
        params = NvParams.for_dimension(basis.dim, gamma, nv_mult)
        out = nv_solve(basis, params, eng, ledger, rng)
        return SolveResult(out.vector, ledger, {"rounds": out.rounds, "truncated": out.truncated})

    if lambda1_sq is None and basis.dim <= MAX_ENUM_DIM:
        lambda1_sq = enumerate_shortest(basis).lambda1_sq
    if lambda1_sq is None:
        best = ps_search(basis, eng, ledger, rng, mu_schedule(basis, 12), attempts, xi, bigr)
        return SolveResult(best, ledger, {})
    mu = mu_factor * math.sqrt(lambda1_sq)
    params = SatParams.for_dimension(basis.dim, mu, xi, bigr)
    for k in range(attempts):
        out = ps_solve(basis, params, eng, ledger, rng)
        if out.vector is not None:
            return SolveResult(out.vector, ledger, {"attempts": k + 1, "mu": mu})
    return SolveResult(None, ledger, {"attempts": attempts, "mu": mu})


@dataclass
class ExperimentConfig:
    dims: list
    seeds_per_dim: int = 3
    algo: str = "gauss"
    engine: str = "classical"
    out: str = "runs.csv"
    bits: int = 10
    seed_base: int = 0
    pick: Optional[str] = None
    gamma: float = 0.97
    nv_mult: float = 16.0
    collisions: int = DEFAULT_COLLISIONS
    xi: float = DEFAULT_XI
    bigr: float = DEFAULT_BIGR
    mu_factor: float = 1.01
    attempts: int = 8
    workers: int = 1

    def __post_init__(self):
        self.dims = [int(d) for d in self.dims]
        if not self.dims or min(self.dims) < 2:
            raise ParameterError("dims must be non-empty, each at least 2")
        if self.seeds_per_dim < 1:
            raise ParameterError("seeds_per_dim must be at least 1")
        if self.algo not in ALGOS:
            raise ParameterError(f"algo must be one of {ALGOS}")
        self.engine = EngineMode(self.engine).value

    def solver_kwargs(self) -> dict:
        keys = ("pick", "gamma", "nv_mult", "collisions", "xi", "bigr", "mu_factor", "attempts")
        return {k: getattr(self, k) for k in keys}


def _convert(name: str, raw: str, default):
    if name == "dims":
        return [int(x) for x in raw.replace(",", " ").split()]
    if name == "pick":
        return raw or None
    if isinstance(default, bool):
        return raw.lower() in ("1", "true", "yes")
    if isinstance(default, int):
        return int(raw)
    if isinstance(default, float):
        return float(raw)
    return raw


def parse_config(text: str) -> ExperimentConfig:
    """Flat ``key = value`` lines; ``#`` starts a comment, dashes in keys are allowed."""
    known = {f.name: f.default for f in fields(ExperimentConfig)}
    aliases = {"seeds": "seeds_per_dim", "seeds-per-dim": "seeds_per_dim", "mu-factor": "mu_factor",
               "output": "out", "dim": "dims"}
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"config line {lineno}: expected 'key = value'")
        key, raw = (s.strip() for s in line.split("=", 1))
        key = aliases.get(key, key).replace("-", "_")
        if key not in known:
            raise ParameterError(f"config line {lineno}: unknown key {key!r}")
        try:
            values[key] = _convert(key, raw, known[key])
        except ValueError as exc:
            raise ParameterError(f"config line {lineno}: {exc}") from None
    if "dims" not in values:
        raise ParameterError("config must set dims")
    return ExperimentConfig(**values)


def load_config(path) -> ExperimentConfig:
    return parse_config(Path(path).read_text())


@dataclass
class RunRecord:
    run_id: int
    n: int
    seed: int
    algo: str
    engine: str
    charged_queries: int
    predicate_evals: int
    wall_ms: float
    found_norm_sq: Optional[int]
    lambda1_sq: Optional[int]
    success: bool
    error: str = ""

    def row(self) -> list:
        return [
            self.run_id,
            self.n,
            self.seed,
            self.algo,
            self.engine,
            self.charged_queries,
            self.predicate_evals,
            f"{self.wall_ms:.3f}",
            "" if self.found_norm_sq is None else self.found_norm_sq,
            "" if self.lambda1_sq is None else self.lambda1_sq,
            "true" if self.success else "false",
        ]


def judge(found_norm_sq: Optional[int], lambda1_sq: Optional[int]) -> bool:
    if found_norm_sq is None or found_norm_sq <= 0:
        return False
    if lambda1_sq is None:
        return True
    return found_norm_sq <= lambda1_sq * (1 + 1e-9)


def run_one(config: ExperimentConfig, run_id: int, n: int, seed: int) -> RunRecord:
    """Generate, reduce, solve and judge one (dim, seed) instance; never raises."""
    lam = None
    ledger = QueryLedger()
    found = None
    error = ""
    t0 = time.perf_counter()
    try:
        basis = lll_reduce(gen_lattice(n, config.bits, seed))
        if n <= MAX_ENUM_DIM:
            lam = enumerate_shortest(basis).lambda1_sq
        t0 = time.perf_counter()
        res = solve(basis, config.algo, config.engine, seed, lambda1_sq=lam, **config.solver_kwargs())
        ledger = res.ledger
        found = None if res.vector is None else res.vector.norm_sq
    except Exception as exc:  # a failed run is data, not a crash
        error = type(exc).__name__
        log.warning("run %d (n=%d, seed=%d) failed: %s", run_id, n, seed, exc)
    wall = (time.perf_counter() - t0) * 1000.0
    return RunRecord(
        run_id, n, seed, config.algo, config.engine, ledger.charged_queries, ledger.predicate_evals,
        wall, found, lam, judge(found, lam) and not error, error,
    )


def _jobs(config: ExperimentConfig) -> list:
    out = []
    for n in config.dims:
        for s in range(config.seeds_per_dim):
            out.append((len(out), n, config.seed_base + s))
    return out


def run_experiment(config: ExperimentConfig, out_path=None) -> list[RunRecord]:
    """Run every (dim, seed) of ``config``; one CSV row is flushed per finished run."""
    path = Path(out_path or config.out)
    path.parent.mkdir(parents=True, exist_ok=True)
    jobs = _jobs(config)
    records = []
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        fh.flush()

        def emit(rec: RunRecord) -> None:
            writer.writerow(rec.row())
            fh.flush()
            records.append(rec)

        if config.workers > 1:
            with ProcessPoolExecutor(config.workers) as pool:
                futures = [pool.submit(run_one, config, *job) for job in jobs]
                for fut in futures:
                    emit(fut.result())
        else:
            for job in jobs:
                emit(run_one(config, *job))
    return records


def read_records(path) -> list[dict]:
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER:
            raise ParameterError(f"unexpected CSV header: {reader.fieldnames}")
        return list(reader)


@dataclass
class FitResult:
    slope: float
    intercept: float
    r2: float
    dims: list
    medians: list


def fit_points(dims: Iterable[int], queries: Iterable[float]) -> FitResult:
    """OLS of log2(median queries per dim) against dim."""
    per_dim: dict[int, list] = {}
    for n, q in zip(dims, queries):
        per_dim.setdefault(int(n), []).append(float(q))
    if len(per_dim) < 3:
        raise ParameterError(f"insufficient data: {len(per_dim)} distinct dims, need 3")
    xs = np.array(sorted(per_dim), dtype=np.float64)
    med = np.array([np.median(per_dim[int(n)]) for n in xs])
    if np.any(med <= 0):
        raise ParameterError("insufficient data: non-positive median query count")
    ys = np.log2(med)
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = ys - (slope * xs + intercept)
    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - float(np.sum(resid**2)) / ss_tot
    return FitResult(float(slope), float(intercept), r2, [int(x) for x in xs], [float(m) for m in med])


def fit_exponent(rows_or_path, algo: str, engine: str) -> FitResult:
    rows = read_records(rows_or_path) if isinstance(rows_or_path, (str, Path)) else list(rows_or_path)
    engine = EngineMode(engine).value
    picked = [r for r in rows if r["algo"] == algo and r["engine"] == engine and r["charged_queries"] != ""]
    return fit_points([r["n"] for r in picked], [r["charged_queries"] for r in picked])
