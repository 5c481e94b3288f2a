"""
Past-to-future analysis of subshifts: extension sets, branching profiles,
the periodic-orbit decision on transfer graphs and predictor/forcing word
searches.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx

from ..core.exceptions import EmptySubshiftError, NotFoundError, NotInLanguageError, ParameterError
from .subshifts import LanguageOracle, TransferGraph
from .words import Word, format_symbol, word_str

logger = logging.getLogger(__name__)


def _key(word: Sequence) -> Tuple[str, ...]:
    return tuple(format_symbol(s) for s in word)


def extensions(oracle: LanguageOracle, w: Sequence, k: int) -> FrozenSet[Word]:
    """``{u : len(u) = k and wu in L(X)}``.

    Raises NotInLanguageError when ``w`` itself is not in the language.
    """
    if k < 0:
        raise ParameterError(f"extension length must be non-negative, got {k}")
    w = tuple(w)
    if not oracle.contains(w):
        raise NotInLanguageError(f"'{word_str(w)}' is not in the language of {oracle.oracle_id}")

    if oracle.sample_based:
        n = len(w)
        return frozenset(u[n:] for u in oracle.words(n + k) if u[:n] == w)

    frontier: List[Word] = [()]
    for _ in range(k):
        frontier = [u + (a,) for u in frontier for a in oracle.alphabet if oracle.contains(w + u + (a,))]
    return frozenset(frontier)


@dataclass
class BranchingProfile:
    """How many length-k futures the length-m pasts admit."""
    m: int
    k: int
    max_extensions: int
    argmax_past: Word
    histogram: Dict[int, int]
    oracle_id: str = ""
    sample_based: bool = False

    @property
    def horizon(self) -> int:
        return self.m + self.k

    def to_dict(self) -> Dict[str, object]:
        return {
            "m": self.m,
            "k": self.k,
            "max_extensions": self.max_extensions,
            "witness": word_str(self.argmax_past),
            "histogram": {str(c): n for c, n in sorted(self.histogram.items())},
            "horizon": self.horizon,
            "sample_based": self.sample_based,
        }


def past_branching(oracle: LanguageOracle, m: int, k: int) -> BranchingProfile:
    """Maximum number of length-k extensions over all pasts in ``L_m``.

    The witness is the lexicographically smallest past attaining the maximum.
    """
    if m < 0 or k < 0:
        raise ParameterError("past and future lengths must be non-negative")
    futures = Counter(w[:m] for w in oracle.words(m + k))
    pasts = sorted(oracle.words(m), key=_key)

    histogram: Counter = Counter()
    best: Optional[Word] = None
    best_count = -1
    for past in pasts:
        count = futures.get(past, 0)
        histogram[count] += 1
        if count > best_count:
            best, best_count = past, count

    if best is None:
        raise EmptySubshiftError(f"{oracle.oracle_id} has no words of length {m}")
    return BranchingProfile(m, k, best_count, best, dict(histogram), oracle.oracle_id, oracle.sample_based)


def branching_horizon(oracle: LanguageOracle, k: int, m_max: int, bound: int = 2) -> Optional[int]:
    """Smallest ``m`` from which max branching stays ``<= bound`` up to ``m_max``."""
    horizon = None
    for m in range(m_max, -1, -1):
        if past_branching(oracle, m, k).max_extensions > bound:
            break
        horizon = m
    return horizon


@dataclass
class PeriodicityDecision:
    """Outcome of the unique-extension test on a transfer graph."""
    periodic: bool
    witness: Optional[Word] = None
    witness_extensions: Tuple = ()
    cycles: List[Word] = field(default_factory=list)

    @property
    def cycle_length_total(self) -> int:
        return sum(len(c) for c in self.cycles)

    def to_dict(self) -> Dict[str, object]:
        return {
            "periodic": self.periodic,
            "witness": None if self.witness is None else word_str(self.witness),
            "witness_extensions": [format_symbol(s) for s in self.witness_extensions],
            "cycles": [word_str(c) for c in self.cycles],
        }


def is_periodic_union(graph: TransferGraph) -> PeriodicityDecision:
    """True iff every essential vertex has exactly one outgoing edge.

    On False the witness is the smallest vertex with two distinct one-symbol
    extensions; on True the cycles are returned as their label words.
    """
    if graph.is_empty():
        raise EmptySubshiftError("transfer graph has an empty essential part")

    for vertex in graph.essential_vertices:
        labels = graph.out_labels(vertex)
        if len(labels) > 1:
            return PeriodicityDecision(False, vertex, tuple(labels))

    cycles = []
    for cycle in nx.simple_cycles(nx.DiGraph(graph.essential)):
        start = min(range(len(cycle)), key=lambda i: _key(cycle[i]))
        ordered = cycle[start:] + cycle[:start]
        labels = tuple(graph.out_labels(v)[0] for v in ordered)
        cycles.append(labels)
    cycles.sort(key=_key)
    return PeriodicityDecision(True, cycles=cycles)


@dataclass
class PredictorWitness:
    """``b`` such that every occurrence of ``ba`` is followed by ``continuation``."""
    b: Word
    a: Word
    k: int
    continuation: Word
    horizon: int
    exact: bool
    searched: int = 0

    def to_dict(self) -> Dict[str, object]:
        return {
            "b": word_str(self.b),
            "a": word_str(self.a),
            "k": self.k,
            "continuation": word_str(self.continuation),
            "horizon": self.horizon,
            "exact": self.exact,
            "candidates_searched": self.searched,
        }


def find_predictor_word(oracle: LanguageOracle, a: Sequence, k: int, budget: int) -> PredictorWitness:
    """Shortest, then lexicographically smallest, ``b`` with ``|extensions(ba, k)| == 1``.

    Searches ``len(b) <= budget``. Raises NotFoundError otherwise; that is
    not a disproof.
    """
    a = tuple(a)
    if not oracle.contains(a):
        raise NotInLanguageError(f"'{word_str(a)}' is not in the language of {oracle.oracle_id}")

    searched = 0
    for length in range(budget + 1):
        for b in sorted(oracle.words(length), key=_key):
            if not oracle.contains(b + a):
                continue
            searched += 1
            futures = extensions(oracle, b + a, k)
            if len(futures) == 1:
                (continuation,) = futures
                logger.info("Predictor word '%s' found after %d candidates", word_str(b), searched)
                return PredictorWitness(b, a, k, continuation, len(b) + len(a) + k,
                                        not oracle.sample_based, searched)
    raise NotFoundError(f"no predictor word of length <= {budget} for '{word_str(a)}'", budget=budget)


def verify_predictor(oracle: LanguageOracle, b: Sequence, a: Sequence, k: int) -> bool:
    """Re-scan a fresh ``L_{len(ba)+k}``: all words starting with ``ba`` share their tail."""
    front = tuple(b) + tuple(a)
    n = len(front)
    tails = {w[n:] for w in oracle.enumerate_fresh(n + k) if w[:n] == front}
    return len(tails) == 1


@dataclass
class ForcingWitness:
    """``v`` such that every occurrence of ``v`` is followed by ``u``."""
    v: Word
    u: Word
    horizon: int
    exact: bool

    def to_dict(self) -> Dict[str, object]:
        return {
            "v": word_str(self.v),
            "u": word_str(self.u),
            "horizon": self.horizon,
            "exact": self.exact,
        }


def find_forcing_word(oracle: LanguageOracle, u: Sequence, budget: int) -> ForcingWitness:
    """Shortest, then lexicographically smallest, ``v`` whose only ``len(u)``-future is ``u``."""
    u = tuple(u)
    if not oracle.contains(u):
        raise NotInLanguageError(f"'{word_str(u)}' is not in the language of {oracle.oracle_id}")

    for length in range(budget + 1):
        for v in sorted(oracle.words(length), key=_key):
            if extensions(oracle, v, len(u)) == {u}:
                return ForcingWitness(v, u, len(v) + len(u), not oracle.sample_based)
    raise NotFoundError(f"no forcing word of length <= {budget} for '{word_str(u)}'", budget=budget)
