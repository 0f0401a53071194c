"""The ``Search`` subroutine as a pluggable engine with query accounting.

Two engines share one answer set:

* ``classical`` scans in storage order and is charged one query per
  predicate evaluation;
* ``qcost`` computes the same answer set but is charged ``ceil(sqrt(N))``
  per invocation over an N-element list, the Grover query count up to its
  constant. No quantum state is simulated.

Solvers never call predicates item by item on their hot paths; they hand the
engine two closures (first hit / all hits) backed by the kernels in
:mod:`svplab.kernels`. :func:`search` and :func:`pair_search` wrap plain
Python collections and predicates in the same protocol.
"""

from __future__ import annotations

import enum
import math
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, TypeVar

import numpy as np

T = TypeVar("T")


class EngineMode(str, enum.Enum):
    CLASSICAL = "classical"
    QCOST = "qcost"


class PickPolicy(str, enum.Enum):
    FIRST = "first"
    RANDOM = "random"


def grover_charge(n: int) -> int:
    """Queries charged to one quantum search over ``n`` items."""
    return math.isqrt(n - 1) + 1 if n > 0 else 0


@dataclass
class QueryLedger:
    """Monotone counters for one run.

    ``predicate_evals`` counts predicate applications the scan actually
    needed; ``charged_queries`` is what the engine's cost model bills.
    ``by_phase`` splits the charge by the label active at charging time.
    """

    predicate_evals: int = 0
    charged_queries: int = 0
    invocations: int = 0
    by_phase: dict = field(default_factory=dict)
    _phase: str = "main"

    def record(self, evals: int, charge: int) -> None:
        self.predicate_evals += evals
        self.charged_queries += charge
        self.invocations += 1
        self.by_phase[self._phase] = self.by_phase.get(self._phase, 0) + charge

    @contextmanager
    def phase(self, label: str):
        previous, self._phase = self._phase, label
        try:
            yield self
        finally:
            self._phase = previous

    def snapshot(self) -> dict:
        return {
            "predicate_evals": self.predicate_evals,
            "charged_queries": self.charged_queries,
            "invocations": self.invocations,
            "by_phase": dict(self.by_phase),
        }


class SearchEngine:
    """Search strategy fixed for one experiment run.

    ``pick`` defaults to ``first`` for the classical engine and ``random``
    for the quantum-cost engine (Grover returns a uniformly random marked
    item). ``rng`` is consulted only by the ``random`` policy.
    """

    def __init__(self, mode="classical", pick=None, rng: Optional[np.random.Generator] = None):
        self.mode = EngineMode(mode)
        if pick is None:
            pick = PickPolicy.RANDOM if self.mode is EngineMode.QCOST else PickPolicy.FIRST
        self.pick = PickPolicy(pick)
        if self.pick is PickPolicy.RANDOM and rng is None:
            rng = np.random.default_rng(0)
        self.rng = rng

    @classmethod
    def classical(cls, pick="first", rng=None) -> "SearchEngine":
        return cls(EngineMode.CLASSICAL, pick, rng)

    @classmethod
    def qcost(cls, pick="random", rng=None) -> "SearchEngine":
        return cls(EngineMode.QCOST, pick, rng)

    def charge_for(self, n: int, evals: int) -> int:
        return evals if self.mode is EngineMode.CLASSICAL else grover_charge(n)

    def locate(
        self,
        n: int,
        first: Callable[[], int],
        every: Callable[[], np.ndarray],
        ledger: QueryLedger,
    ) -> int:
        """Index of a marked item among ``n`` (or -1), charging ``ledger``.

        ``first()`` must return the lowest marked index or -1, ``every()``
        all marked indices in increasing order.
        """
        if n == 0:
            ledger.record(0, 0)
            return -1
        if self.pick is PickPolicy.FIRST:
            idx = first()
            evals = idx + 1 if idx >= 0 else n
        else:
            hits = every()
            evals = n
            idx = int(hits[self.rng.integers(len(hits))]) if len(hits) else -1
        ledger.record(evals, self.charge_for(n, evals))
        return idx

    def __repr__(self) -> str:
        return f"SearchEngine(mode={self.mode.value}, pick={self.pick.value})"


def search(
    items: Sequence[T],
    predicate: Callable[[T], bool],
    engine: SearchEngine,
    ledger: QueryLedger,
) -> Optional[T]:
    """Return some element of ``items`` satisfying ``predicate``, or None."""
    items = list(items)

    def first() -> int:
        for i, e in enumerate(items):
            if predicate(e):
                return i
        return -1

    def every() -> np.ndarray:
        return np.array([i for i, e in enumerate(items) if predicate(e)], dtype=np.int64)

    idx = engine.locate(len(items), first, every, ledger)
    return items[idx] if idx >= 0 else None


def pair_search(
    items: Sequence[T],
    predicate: Callable[[T, T], bool],
    engine: SearchEngine,
    ledger: QueryLedger,
) -> Optional[tuple[T, T]]:
    """Search the virtual N*N list of ordered pairs, in row-major order.

    Pairs ``(i, i)`` are part of the virtual list; predicates that demand
    distinct values (``0 < ||s1 - s2||``) reject them naturally. The quantum
    charge is therefore ``ceil(sqrt(N^2)) = N``.
    """
    items = list(items)
    n = len(items)

    def first() -> int:
        for i in range(n):
            for j in range(n):
                if predicate(items[i], items[j]):
                    return i * n + j
        return -1

    def every() -> np.ndarray:
        return np.array(
            [i * n + j for i in range(n) for j in range(n) if predicate(items[i], items[j])],
            dtype=np.int64,
        )

    flat = engine.locate(n * n, first, every, ledger)
    if flat < 0:
        return None
    return items[flat // n], items[flat % n]
