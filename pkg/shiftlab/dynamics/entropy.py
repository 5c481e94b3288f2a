"""
Complexity functions, entropy estimates, exact entropy of transfer graphs,
quantized separated counts and preimage-tree separated families.

Entropies are natural logarithms; ``to_bits`` converts.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from ..core.exceptions import (
    BudgetExceededError,
    ContractViolationError,
    CrossCheckError,
    EmptySubshiftError,
    InsufficientDataError,
    LengthMismatchError,
    ParameterError,
)
from .subshifts import LanguageOracle, TransferGraph
from .words import Real, SymbolStream, Word, is_exact, quantize, weighted_norm

logger = logging.getLogger(__name__)

LOG2 = math.log(2)


def to_bits(value: float) -> float:
    return value / LOG2


@dataclass(frozen=True)
class ComplexityRow:
    n: int
    count: int
    slope: float


@dataclass
class ComplexityTable:
    """``p(n) = |L_n(X)|`` with slopes ``log p(n) / n``."""
    oracle_id: str
    sample_based: bool
    rows: List[ComplexityRow] = field(default_factory=list)
    truncated: bool = False

    @property
    def n_max(self) -> int:
        return self.rows[-1].n if self.rows else 0

    def counts(self) -> List[int]:
        return [row.count for row in self.rows]

    def count_at(self, n: int) -> int:
        for row in self.rows:
            if row.n == n:
                return row.count
        raise InsufficientDataError(f"complexity table has no row for n = {n}")

    def is_submultiplicative(self) -> bool:
        """``p(m + n) <= p(m) p(n)`` for every pair inside the table."""
        counts = {row.n: row.count for row in self.rows}
        return all(counts[m + n] <= counts[m] * counts[n]
                   for m in counts for n in counts if m + n in counts)


def complexity(oracle: LanguageOracle, n_max: int) -> ComplexityTable:
    """Rows for ``n = 1 .. n_max``; stops early (``truncated``) at the enumeration cap."""
    if n_max < 1:
        raise ParameterError(f"n_max must be at least 1, got {n_max}")
    table = ComplexityTable(oracle.oracle_id, oracle.sample_based)
    for n in range(1, n_max + 1):
        try:
            count = oracle.count(n)
        except BudgetExceededError as e:
            logger.warning("Complexity table for %s truncated at n = %d: %s", oracle.oracle_id, n, e.message)
            table.truncated = True
            break
        if count == 0:
            raise EmptySubshiftError(f"{oracle.oracle_id} has no words of length {n}")
        table.rows.append(ComplexityRow(n, count, math.log(count) / n))
    return table


@dataclass
class EntropyEstimate:
    final_slope: float
    fit_slope: float
    n_max: int
    note: str

    def to_dict(self) -> Dict[str, object]:
        return {
            "final_slope": self.final_slope,
            "fit_slope": self.fit_slope,
            "n_max": self.n_max,
            "note": self.note,
        }


def entropy_estimate(table: ComplexityTable) -> EntropyEstimate:
    """Final slope plus least-squares slope of ``log p(n)`` over the last half of the table."""
    if len(table.rows) < 4:
        raise InsufficientDataError(f"entropy estimate needs at least 4 rows, got {len(table.rows)}")
    tail = table.rows[len(table.rows) // 2:]
    ns = np.array([row.n for row in tail], dtype=float)
    logs = np.array([math.log(row.count) for row in tail], dtype=float)
    fit = float(np.polyfit(ns, logs, 1)[0])

    notes = []
    if table.sample_based:
        notes.append("sample-based lower approximation")
    if table.truncated:
        notes.append(f"table truncated at n = {table.n_max}")
    notes.append(f"least-squares fit over n = {tail[0].n}..{tail[-1].n}")
    return EntropyEstimate(table.rows[-1].slope, fit, table.n_max, "; ".join(notes))


@dataclass
class SpectralResult:
    radius: float
    iterations: int
    converged: bool
    component_size: int


def _perron_root(matrix: np.ndarray, cap: int, tolerance: float) -> SpectralResult:
    """Spectral radius of a non-negative irreducible matrix.

    Power iteration runs on ``A + I`` (aperiodic, same Perron vector) from
    the all-ones vector; the Rayleigh quotient is the eigenvalue estimate.
    """
    shifted = matrix + np.eye(len(matrix))
    v = np.ones(len(matrix))
    estimate = 0.0
    for iteration in range(1, cap + 1):
        w = shifted @ v
        rayleigh = float(v @ w) / float(v @ v)
        v = w / np.linalg.norm(w)
        if abs(rayleigh - estimate) < tolerance * max(1.0, rayleigh):
            return SpectralResult(rayleigh - 1.0, iteration, True, len(matrix))
        estimate = rayleigh
    logger.warning("Power iteration hit its cap of %d iterations", cap)
    return SpectralResult(estimate - 1.0, cap, False, len(matrix))


def spectral_radius(graph: TransferGraph, cap: int = 100000, tolerance: float = 1e-12) -> SpectralResult:
    """Largest Perron root over the strongly connected components of the essential part."""
    if graph.is_empty():
        raise EmptySubshiftError("transfer graph has an empty essential part")
    best: Optional[SpectralResult] = None
    for component in graph.strongly_connected_components():
        nodes = sorted(component, key=lambda v: tuple(map(str, v)))
        _, matrix = graph.adjacency(nodes)
        if not matrix.any():
            continue
        result = _perron_root(matrix, cap, tolerance)
        if best is None or result.radius > best.radius:
            best = result
    if best is None:
        raise EmptySubshiftError("transfer graph has no cycles")
    return best


def _settled_growth(graph: TransferGraph, horizon: int, tolerance: float) -> Optional[float]:
    """Limit of ``log(N_{n+1} / N_n)`` once consecutive rates agree within ``tolerance``.

    None unless the essential part is irreducible and aperiodic, where the
    rates converge geometrically; None also when they have not settled
    after ``horizon`` steps.
    """
    essential = graph.essential
    if not nx.is_strongly_connected(essential) or not nx.is_aperiodic(essential):
        return None
    counts = {v: 1 for v in essential.nodes}
    total = len(counts)
    previous: Optional[float] = None
    for _ in range(horizon):
        step = dict.fromkeys(counts, 0)
        for u, v in essential.edges():
            step[v] += counts[u]
        counts = step
        new_total = sum(counts.values())
        rate = math.log(new_total) - math.log(total)
        if previous is not None and abs(rate - previous) < tolerance:
            return rate
        previous, total = rate, new_total
    return None


def sft_entropy_exact(graph: TransferGraph, cap: int = 100000, tolerance: float = 1e-12,
                      horizon: int = 512) -> float:
    """``log`` of the spectral radius of the essential adjacency matrix.

    On an irreducible aperiodic essential part the value is checked against
    settled path-count growth; CrossCheckError when the two differ by more
    than ``max(1000 * tolerance, 1e-9)``.
    """
    result = spectral_radius(graph, cap, tolerance)
    entropy = math.log(result.radius) if result.radius > 0 else 0.0
    if result.converged:
        growth = _settled_growth(graph, horizon, 1e-12)
        if growth is None:
            logger.debug("Path-count cross-check skipped: growth not settled or graph not primitive")
        elif abs(growth - entropy) > max(1000 * tolerance, 1e-9):
            raise CrossCheckError(f"spectral entropy {entropy!r} disagrees with path-count growth {growth!r}")
    return entropy


def path_growth_rate(graph: TransferGraph, n: int) -> float:
    """``log(N_{n+1} / N_n)`` from exact path counts; tends to the entropy."""
    low = graph.count_words(n)
    high = graph.count_words(n + 1)
    if low == 0 or high == 0:
        raise EmptySubshiftError("transfer graph has no words of the requested length")
    return math.log(high) - math.log(low)


# ---------------------------------------------------------------------------
# Quantized counting
# ---------------------------------------------------------------------------

def grid_indices(word: Sequence, step: Real) -> Tuple[int, ...]:
    """Grid cell numbers ``floor(a(i) / step)`` of a real word."""
    grid = quantize(word, step)
    if is_exact(grid):
        exact_step = Fraction(repr(step)) if isinstance(step, float) else Fraction(step)
        return tuple(int(Fraction(g) / exact_step) for g in grid)
    return tuple(int(round(float(g) / step)) for g in grid)


def separated_count(stream: SymbolStream, n: int, eps: Real, horizon: int) -> int:
    """Distinct ``eps/2``-quantized length-n windows starting at ``0 .. horizon``.

    Bounds the size of any eps-separated family of n-words in this sample.
    """
    if n < 1:
        raise ParameterError(f"window length must be positive, got {n}")
    if horizon < 0:
        raise InsufficientDataError(f"horizon must be non-negative, got {horizon}")
    try:
        prefix = stream.prefix(horizon + n)
    except InsufficientDataError:
        raise InsufficientDataError(f"stream is shorter than horizon + n = {horizon + n}")
    cells = grid_indices(prefix, eps / 2)
    windows = {cells[i:i + n] for i in range(horizon + 1)}
    return len(windows)


def separated_profile(stream: SymbolStream, lengths: Sequence[int], eps: Real,
                      prefix_length: int) -> List[Tuple[int, int, float]]:
    """``(n, count, log(count) / n)`` using every window of a fixed prefix."""
    prefix = stream.prefix(prefix_length)
    cells = grid_indices(prefix, eps / 2)
    rows = []
    for n in lengths:
        if n > prefix_length:
            raise InsufficientDataError(f"prefix of {prefix_length} symbols is shorter than n = {n}")
        count = len({cells[i:i + n] for i in range(prefix_length - n + 1)})
        rows.append((n, count, math.log(count) / n))
    return rows


# ---------------------------------------------------------------------------
# Preimage trees
# ---------------------------------------------------------------------------

Selector = Callable[[Word], Word]


@dataclass
class SeparatedFamily:
    """The points ``tau_a(x)`` for every ``a`` in ``{0,1}^n``."""
    base: Word
    depth: int
    delta: Optional[Real]
    points: Dict[Word, Word]
    level_separation: List[Real]
    pairwise_checked: bool = False

    @property
    def size(self) -> int:
        return len(set(self.points.values()))

    @property
    def slope(self) -> float:
        return math.log(self.size) / self.depth if self.depth else 0.0


def _separated(distance: Real, delta: Optional[Real], strict: bool) -> bool:
    if delta is None:
        return True
    return distance > delta if strict else distance >= delta


def preimage_tree(x: Sequence, selectors: Tuple[Selector, Selector], n: int,
                  transform: Callable[[Word], Word], distance: Callable[[Word, Word], Real],
                  delta: Optional[Real] = None, strict: bool = True,
                  pairwise_limit: int = 256) -> SeparatedFamily:
    """Grow ``tau_a(x) = tau_{a_1}(tau_{a_2}(...tau_{a_n}(x)))`` level by level.

    Each node checks ``T(tau_i(y)) == y`` and the branch separation
    ``d(tau_0(y), tau_1(y))`` against ``delta``. When there are at most
    ``pairwise_limit`` points every pair is checked directly: with ``i`` the
    last index where ``a`` and ``a'`` differ, ``T^i`` of the two points must
    be ``delta``-apart.
    """
    if n < 0:
        raise ParameterError(f"tree depth must be non-negative, got {n}")
    level: Dict[Word, Word] = {(): tuple(x)}
    separations: List[Real] = []

    for depth in range(n):
        next_level: Dict[Word, Word] = {}
        level_min: Optional[Real] = None
        for a, y in sorted(level.items()):
            children = []
            for i, tau in enumerate(selectors):
                z = tuple(tau(y))
                if tuple(transform(z)) != y:
                    raise ContractViolationError(f"T(tau_{i}(y)) != y at depth {depth + 1}", (i,) + a)
                children.append(z)
                next_level[(i,) + a] = z
            gap = distance(children[0], children[1])
            if not _separated(gap, delta, strict):
                raise ContractViolationError(
                    f"branch separation {gap} does not exceed delta {delta} at depth {depth + 1}", a)
            level_min = gap if level_min is None or gap < level_min else level_min
        separations.append(level_min)  # type: ignore[arg-type]
        level = next_level

    family = SeparatedFamily(tuple(x), n, delta, level, separations)
    if len(set(level.values())) != len(level):
        raise ContractViolationError("selectors produced coinciding points", ())
    if len(level) <= pairwise_limit:
        _check_pairs(family, transform, distance, strict)
        family.pairwise_checked = True
    logger.debug("Preimage tree of depth %d holds %d points", n, family.size)
    return family


def _check_pairs(family: SeparatedFamily, transform: Callable[[Word], Word],
                 distance: Callable[[Word, Word], Real], strict: bool) -> None:
    for (a, p), (b, q) in itertools.combinations(sorted(family.points.items()), 2):
        last = max(i for i in range(len(a)) if a[i] != b[i])
        for _ in range(last):
            p, q = tuple(transform(p)), tuple(transform(q))
        if not _separated(distance(p, q), family.delta, strict):
            raise ContractViolationError(f"points for {a} and {b} are not separated", a)


def first_difference(a: Sequence, b: Sequence) -> Fraction:
    """``2^-i`` for the first index ``i`` where the words differ, 0 if they agree."""
    for i, (s, t) in enumerate(zip(a, b)):
        if s != t:
            return Fraction(1, 2 ** i)
    return Fraction(0)


def weighted_distance(a: Sequence, b: Sequence) -> Real:
    """``|a - b|`` in the weighted norm; words must have equal length."""
    if len(a) != len(b):
        raise LengthMismatchError(f"distance needs equal lengths, got {len(a)} and {len(b)}")
    return weighted_norm(tuple(abs(s - t) for s, t in zip(a, b)))


def shift_once(word: Word) -> Word:
    return tuple(word[1:])


def prepend_selectors(alphabet: Sequence) -> Tuple[Selector, Selector]:
    """Right inverses of the shift that prepend the first or the second symbol."""
    if len(alphabet) < 2:
        raise ParameterError("prepend selectors need at least two symbols")
    low, high = alphabet[0], alphabet[1]
    return (lambda y: (low,) + tuple(y)), (lambda y: (high,) + tuple(y))
