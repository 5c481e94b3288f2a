"""
Marker families and joint occurrences.

A marker family is a collection ``I`` of subsets of ``{0, ..., T-1}`` with

  1. ``|I| >= 2^(delta T)``,
  2. points inside one set at least ``g`` apart,
  3. ``A & (B + k)`` non-empty for all ``A, B`` in ``I`` and ``0 <= k <= shift_bound``.
"""

import itertools
import logging
import math
import random
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from ..core.exceptions import BudgetExceededError, HypothesisViolationError, NotFoundError, ParameterError
from .words import Word, occurrences, word_str

logger = logging.getLogger(__name__)

IndexSet = FrozenSet[int]

SIZE = 1
SPACING = 2
SHIFT_INTERSECTION = 3


@dataclass(frozen=True)
class MarkerParams:
    T: int
    gap: int
    shift_bound: Optional[int] = None
    delta: float = 0.0

    def __post_init__(self) -> None:
        if self.T < 1:
            raise ParameterError(f"window length T must be positive, got {self.T}")
        if self.gap < 1:
            raise ParameterError(f"gap must be positive, got {self.gap}")
        if self.shift_bound is None:
            object.__setattr__(self, "shift_bound", 9 * self.T // 10)
        if not 0 <= self.shift_bound < self.T:  # type: ignore[operator]
            raise ParameterError(f"shift bound must lie in [0, T), got {self.shift_bound}")
        if self.delta < 0:
            raise ParameterError("delta must be non-negative")

    @property
    def size_target(self) -> int:
        """``ceil(2^(delta T))``, ignoring float noise in the exponent."""
        return math.ceil(2 ** (self.delta * self.T) - 1e-9)

    @property
    def shifts(self) -> range:
        return range(self.shift_bound + 1)  # type: ignore[operator]


@dataclass
class MarkerDecision:
    valid: bool
    condition: Optional[int] = None
    witness: Dict[str, object] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, object]:
        return {"valid": self.valid, "condition": self.condition, "witness": self.witness}


def _ordered(family: Iterable[Iterable[int]]) -> List[IndexSet]:
    return sorted({frozenset(s) for s in family}, key=lambda s: (sorted(s), len(s)))


def _shifted(s: IndexSet, k: int) -> IndexSet:
    return frozenset(v + k for v in s)


def _spacing_violation(s: IndexSet, gap: int) -> Optional[Tuple[int, int]]:
    ordered = sorted(s)
    for u, v in zip(ordered, ordered[1:]):
        if v - u < gap:
            return u, v
    return None


def verify_marker_family(family: Iterable[Iterable[int]], params: MarkerParams) -> MarkerDecision:
    """Check size, then spacing, then shifted intersections; report the first violation.

    Shifts run outermost, then ``A``, then ``B``, over sets sorted by their
    sorted elements.
    """
    sets = _ordered(family)
    for s in sets:
        if any(not 0 <= v < params.T for v in s):
            raise ParameterError(f"set {sorted(s)} is not inside 0..{params.T - 1}")

    if len(sets) < params.size_target:
        return MarkerDecision(False, SIZE, {"size": len(sets), "required": params.size_target})

    for s in sets:
        pair = _spacing_violation(s, params.gap)
        if pair is not None:
            return MarkerDecision(False, SPACING, {"set": sorted(s), "u": pair[0], "v": pair[1]})

    for k in params.shifts:
        for a in sets:
            for b in sets:
                if not a & _shifted(b, k):
                    return MarkerDecision(False, SHIFT_INTERSECTION, {"A": sorted(a), "B": sorted(b), "k": k})
    return MarkerDecision(True)


def _compatible(a: IndexSet, b: IndexSet, shifts: range) -> bool:
    return all(a & _shifted(b, k) and b & _shifted(a, k) for k in shifts)


def _greedy_clique(graph: nx.Graph, candidates: List[IndexSet]) -> List[IndexSet]:
    best: List[IndexSet] = []
    for start in candidates:
        clique = [start]
        for other in candidates:
            if other is not start and all(graph.has_edge(other, c) for c in clique):
                clique.append(other)
        if len(clique) > len(best):
            best = clique
        if len(best) == len(candidates):
            break
    return best


def search_marker_family(params: MarkerParams, budget: int = 65536, seed: int = 0) -> List[IndexSet]:
    """Largest marker family in the compatibility graph.

    Candidates are the ``g``-spaced subsets that satisfy the shift condition
    with themselves; two candidates are adjacent when the condition holds
    both ways. The maximum clique is exact while the number of candidate
    pairs fits in ``budget``. Past that the search is greedy and
    NotFoundError is not a refutation.
    """
    if params.T > 1 and params.gap > params.T - 1 and params.shift_bound >= 1:  # type: ignore[operator]
        raise NotFoundError("spacing infeasible for multi-element sets; singletons fail the shift "
                            "condition for k >= 1", budget=budget)
    if 2 ** params.T > budget:
        raise BudgetExceededError(f"T = {params.T} needs {2 ** params.T} candidate subsets, budget is {budget}",
                                  required=2 ** params.T, limit=budget)

    shifts = params.shifts
    candidates: List[IndexSet] = []
    for mask in range(1, 2 ** params.T):
        s = frozenset(i for i in range(params.T) if mask >> i & 1)
        if _spacing_violation(s, params.gap) is None and _compatible(s, s, shifts):
            candidates.append(s)
    logger.debug("Marker search T=%d: %d self-compatible candidates", params.T, len(candidates))
    if not candidates:
        raise NotFoundError(f"no {params.gap}-spaced subset of 0..{params.T - 1} meets the shift condition "
                            f"with itself", budget=budget)

    rng = random.Random(seed)
    rng.shuffle(candidates)
    candidates.sort(key=len, reverse=True)

    graph = nx.Graph()
    graph.add_nodes_from(candidates)
    for a, b in itertools.combinations(candidates, 2):
        if _compatible(a, b, shifts):
            graph.add_edge(a, b)

    pairs = len(candidates) * (len(candidates) - 1) // 2
    exact = pairs <= budget
    if exact:
        clique, _ = nx.max_weight_clique(graph, weight=None)
        best = list(clique)
    else:
        logger.warning("Marker search T=%d: %d candidate pairs exceed budget %d, falling back to greedy cliques",
                       params.T, pairs, budget)
        best = _greedy_clique(graph, candidates)

    if len(best) < params.size_target:
        found = "maximum family has" if exact else "largest family found has"
        raise NotFoundError(f"{found} {len(best)} sets, {params.size_target} required", budget=budget)
    return _ordered(best)


@dataclass
class JointOccurrence:
    a: Word
    b: Word
    u: Optional[int]

    def to_dict(self) -> Dict[str, object]:
        return {"a": word_str(self.a), "b": word_str(self.b), "u": self.u}


def joint_occurrence_check(z1: Sequence, z2: Sequence, a_set: Iterable[int], b_set: Iterable[int], k: int,
                           a_star: Sequence, pairs: Sequence[Tuple[Sequence, Sequence]]) -> List[JointOccurrence]:
    """For each ``(a, b)``, the smallest ``u`` with ``a`` at ``u`` in ``z1`` and ``b`` at ``u`` in ``z2``.

    ``a_star`` must occur in ``z1`` at every index of ``A`` and in ``z2`` at
    every index of ``B + k``; otherwise HypothesisViolationError.
    """
    z1, z2, a_star = tuple(z1), tuple(z2), tuple(a_star)
    width = len(a_star)
    for index in sorted(a_set):
        if z1[index:index + width] != a_star:
            raise HypothesisViolationError(f"marker word missing from the first word at {index}", index)
    for index in sorted(v + k for v in b_set):
        if z2[index:index + width] != a_star:
            raise HypothesisViolationError(f"marker word missing from the second word at {index}", index)

    results = []
    for a, b in pairs:
        a, b = tuple(a), tuple(b)
        common = sorted(set(occurrences(z1, a)) & set(occurrences(z2, b)))
        results.append(JointOccurrence(a, b, common[0] if common else None))
    return results
