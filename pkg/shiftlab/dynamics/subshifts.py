"""
Subshifts presented by their languages.

Every system is a :class:`LanguageOracle`: it enumerates ``L_n(X)`` and
tests membership. Shifts of finite type and their approximations are backed
by a :class:`TransferGraph` stored as a ``networkx.MultiDiGraph`` whose
vertices are allowed m-blocks and whose edges are allowed (m+1)-blocks.
"""

import itertools
import logging
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np

from ..core.exceptions import BudgetExceededError, InsufficientDataError, ParameterError
from .words import SymbolStream, Word, factors, format_symbol

logger = logging.getLogger(__name__)

DEFAULT_ENUMERATION_CAP = 2 ** 22


# ---------------------------------------------------------------------------
# Rotation numbers
# ---------------------------------------------------------------------------

def _golden_terms(i: int) -> int:
    return 0 if i == 0 else 1


def _silver_terms(i: int) -> int:
    return 0 if i == 0 else 2


def _sqrt3_terms(i: int) -> int:
    if i == 0:
        return 0
    return 1 if i % 2 == 1 else 2


# Continued-fraction terms of the fractional parts of named irrationals.
IRRATIONALS: Dict[str, Callable[[int], int]] = {
    "golden": _golden_terms,   # (sqrt 5 - 1) / 2
    "silver": _silver_terms,   # sqrt 2 - 1
    "sqrt3": _sqrt3_terms,     # sqrt 3 - 1
}


def continued_fraction(value: Fraction) -> List[int]:
    """Terms ``[a0; a1, a2, ...]`` of a rational number."""
    value = Fraction(value)
    terms = []
    while True:
        whole = value.numerator // value.denominator
        terms.append(whole)
        value -= whole
        if value == 0:
            return terms
        value = 1 / value


def convergents_of(terms: Sequence[int]) -> List[Fraction]:
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    result = []
    for a in terms:
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        result.append(Fraction(h, k))
    return result


def convergents(name: str, depth: int) -> List[Fraction]:
    """The first ``depth`` convergents of a named irrational."""
    if name not in IRRATIONALS:
        raise ParameterError(f"unknown irrational {name!r}")
    terms = IRRATIONALS[name]
    return convergents_of([terms(i) for i in range(depth)])


# ---------------------------------------------------------------------------
# Transfer graphs
# ---------------------------------------------------------------------------

class TransferGraph:
    """Order-m block graph of a shift of finite type.

    Vertices are m-blocks, each edge is an (m+1)-block ``e`` from ``e[:m]``
    to ``e[1:]`` labelled ``e[-1]``. Nodes carry an ``essential`` flag:
    True when the vertex survives iterative removal of vertices without
    in- or out-edges.
    """

    def __init__(self, order: int, vertices: Iterable[Word], edges: Iterable[Word]):
        if order < 0:
            raise ParameterError(f"graph order must be non-negative, got {order}")
        self.order = order
        self.graph = nx.MultiDiGraph()
        for vertex in vertices:
            self.graph.add_node(tuple(vertex))
        for edge in edges:
            edge = tuple(edge)
            if len(edge) != order + 1:
                raise ParameterError(f"edge {edge!r} is not an ({order}+1)-block")
            self.graph.add_edge(edge[:order], edge[1:], label=edge[-1], block=edge)
        self._mark_essential()
        self._count_cache: Dict[int, int] = {}

    def _mark_essential(self) -> None:
        core = nx.MultiDiGraph(self.graph)
        nonextensible = [q for q in core if not core.out_degree(q)]
        while nonextensible:
            frontier = {p for (p, _) in core.in_edges(nonextensible)}
            core.remove_nodes_from(nonextensible)
            nonextensible = [q for q in frontier if q in core and not core.out_degree(q)]

        noncoextensible = [q for q in core if not core.in_degree(q)]
        while noncoextensible:
            frontier = {q for (_, q) in core.out_edges(noncoextensible)}
            core.remove_nodes_from(noncoextensible)
            noncoextensible = [q for q in frontier if q in core and not core.in_degree(q)]

        for vertex in self.graph:
            self.graph.nodes[vertex]["essential"] = vertex in core
        self._essential = core

    @property
    def vertices(self) -> List[Word]:
        return sorted(self.graph.nodes, key=_word_key)

    @property
    def edges(self) -> List[Word]:
        return sorted((d["block"] for _, _, d in self.graph.edges(data=True)), key=_word_key)

    @property
    def essential(self) -> nx.MultiDiGraph:
        """The essential part as its own graph."""
        return self._essential

    def is_essential(self, vertex: Word) -> bool:
        return bool(self.graph.nodes[tuple(vertex)].get("essential", False))

    @property
    def essential_vertices(self) -> List[Word]:
        return sorted(self._essential.nodes, key=_word_key)

    @property
    def essential_edges(self) -> List[Word]:
        return sorted((d["block"] for _, _, d in self._essential.edges(data=True)), key=_word_key)

    def is_empty(self) -> bool:
        return self._essential.number_of_nodes() == 0

    def out_labels(self, vertex: Word) -> List:
        """Labels of essential edges leaving ``vertex``."""
        vertex = tuple(vertex)
        if vertex not in self._essential:
            return []
        return sorted({d["label"] for _, _, d in self._essential.out_edges(vertex, data=True)},
                      key=format_symbol)

    def adjacency(self, nodes: Optional[Sequence[Word]] = None) -> Tuple[List[Word], np.ndarray]:
        """Essential adjacency matrix (edge multiplicities) over ``nodes``."""
        order = list(nodes) if nodes is not None else self.essential_vertices
        index = {v: i for i, v in enumerate(order)}
        matrix = np.zeros((len(order), len(order)), dtype=float)
        for u, v in self._essential.edges():
            if u in index and v in index:
                matrix[index[u], index[v]] += 1
        return order, matrix

    def contains(self, word: Sequence) -> bool:
        """Whether ``word`` labels a path in the essential part."""
        word = tuple(word)
        m = self.order
        if len(word) <= m:
            return any(word in factors(v, len(word)) for v in self._essential.nodes)
        for i in range(len(word) - m):
            block = word[i:i + m + 1]
            if block[:m] not in self._essential or block[1:] not in self._essential:
                return False
            if not any(d["block"] == block
                       for d in self._essential.get_edge_data(block[:m], block[1:], default={}).values()):
                return False
        return True

    def words(self, n: int) -> Set[Word]:
        """Labels of length-n paths (vertex text plus edge labels) in the essential part."""
        m = self.order
        if n <= m:
            return set().union(*(factors(v, n) for v in self._essential.nodes)) if n else {()}
        result: Set[Word] = set()
        for start in self._essential.nodes:
            stack = [(start, start)]
            while stack:
                vertex, word = stack.pop()
                if len(word) == n:
                    result.add(word)
                    continue
                for _, target, label in self._essential.out_edges(vertex, data="label"):
                    stack.append((target, word + (label,)))
        return result

    def count_words(self, n: int) -> int:
        """``|L_n|`` of the essential part, by path counting with exact integers."""
        if n <= self.order:
            return len(self.words(n))
        if n in self._count_cache:
            return self._count_cache[n]
        counts = {v: 1 for v in self._essential.nodes}
        for _ in range(n - self.order):
            step = dict.fromkeys(counts, 0)
            for u, v in self._essential.edges():
                step[v] += counts[u]
            counts = step
        total = sum(counts.values())
        self._count_cache[n] = total
        return total

    def strongly_connected_components(self) -> List[Set[Word]]:
        return [set(c) for c in nx.strongly_connected_components(self._essential)]

    def summary(self) -> Dict[str, int]:
        return {
            "order": self.order,
            "vertices": self.graph.number_of_nodes(),
            "edges": self.graph.number_of_edges(),
            "essential_vertices": self._essential.number_of_nodes(),
            "essential_edges": self._essential.number_of_edges(),
        }


def _word_key(word: Sequence) -> Tuple[str, ...]:
    return tuple(format_symbol(s) for s in word)


# ---------------------------------------------------------------------------
# Oracles
# ---------------------------------------------------------------------------

class LanguageOracle(ABC):
    """A subshift given by enumeration and membership of its finite words."""

    sample_based = False

    def __init__(self, alphabet: Iterable, enumeration_cap: int = DEFAULT_ENUMERATION_CAP):
        self._alphabet = tuple(sorted(set(alphabet), key=format_symbol))
        self.enumeration_cap = enumeration_cap
        self._cache: Dict[int, FrozenSet[Word]] = {}
        self.logger = logging.getLogger(f"{__name__}.{type(self).__name__}")

    @property
    def alphabet(self) -> Tuple:
        return self._alphabet

    @property
    @abstractmethod
    def oracle_id(self) -> str:
        """Stable text identifying the system and its parameters."""
        pass

    @abstractmethod
    def _enumerate(self, n: int) -> Iterable[Word]:
        pass

    def _estimate(self, n: int) -> Optional[int]:
        """``|L_n|`` when it is cheap to know before enumerating."""
        return None

    def _check_budget(self, required: int, n: int) -> None:
        if required > self.enumeration_cap:
            raise BudgetExceededError(
                f"|L_{n}| = {required} exceeds the enumeration cap of {self.enumeration_cap}",
                required=required, limit=self.enumeration_cap,
            )

    def words(self, n: int) -> FrozenSet[Word]:
        """``L_n(X)``; raises BudgetExceededError above the enumeration cap."""
        if n < 0:
            raise ParameterError(f"word length must be non-negative, got {n}")
        if n not in self._cache:
            estimate = self._estimate(n)
            if estimate is not None:
                self._check_budget(estimate, n)
            result = frozenset(self._enumerate(n))
            self._check_budget(len(result), n)
            self._cache[n] = result
            self.logger.debug("Enumerated %d words of length %d", len(result), n)
        return self._cache[n]

    def contains(self, word: Sequence) -> bool:
        return tuple(word) in self.words(len(word))

    def enumerate_fresh(self, n: int) -> FrozenSet[Word]:
        """``L_n`` recomputed without the cache, for independent re-checks."""
        result = frozenset(self._enumerate(n))
        self._check_budget(len(result), n)
        return result

    def count(self, n: int) -> int:
        estimate = self._estimate(n)
        if estimate is not None:
            return estimate
        return len(self.words(n))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.oracle_id})"


def language(oracle: LanguageOracle, n: int) -> FrozenSet[Word]:
    """``L_n`` of the oracle; sample-based when ``oracle.sample_based``."""
    return oracle.words(n)


class FullShift(LanguageOracle):
    """Every word over the alphabet."""

    def __init__(self, alphabet: Iterable, enumeration_cap: int = DEFAULT_ENUMERATION_CAP):
        super().__init__(alphabet, enumeration_cap)
        if not self.alphabet:
            raise ParameterError("full shift needs a non-empty alphabet")

    @property
    def oracle_id(self) -> str:
        return "full(" + "".join(format_symbol(s) for s in self.alphabet) + ")"

    def _estimate(self, n: int) -> Optional[int]:
        return len(self.alphabet) ** n

    def _enumerate(self, n: int) -> Iterable[Word]:
        return itertools.product(self.alphabet, repeat=n)

    def contains(self, word: Sequence) -> bool:
        allowed = set(self.alphabet)
        return all(s in allowed for s in word)


class PeriodicOrbits(LanguageOracle):
    """Union of the orbits of ``w w w ...`` for finitely many words ``w``."""

    def __init__(self, periods: Iterable[Sequence], alphabet: Optional[Iterable] = None,
                 enumeration_cap: int = DEFAULT_ENUMERATION_CAP):
        self.periods = tuple(tuple(p) for p in periods)
        if not self.periods or any(not p for p in self.periods):
            raise ParameterError("periodic orbits need non-empty words")
        symbols = set(itertools.chain.from_iterable(self.periods))
        super().__init__(symbols if alphabet is None else set(alphabet) | symbols, enumeration_cap)

    @property
    def oracle_id(self) -> str:
        return "periodic(" + ",".join("".join(map(format_symbol, p)) for p in self.periods) + ")"

    def _enumerate(self, n: int) -> Iterable[Word]:
        for period in self.periods:
            p = len(period)
            repeated = period * (n // p + 2)
            for i in range(p):
                yield repeated[i:i + n]

    def cycle_length_total(self) -> int:
        """Sum of the minimal periods of the distinct orbits."""
        orbits = set()
        for period in self.periods:
            p = len(period)
            minimal = next(d for d in range(1, p + 1) if p % d == 0 and period == period[:d] * (p // d))
            base = period[:minimal]
            orbits.add(min(base[i:] + base[:i] for i in range(minimal)))
        return sum(len(o) for o in orbits)


class GraphShift(LanguageOracle):
    """The vertex shift of a transfer graph's essential part."""

    def __init__(self, graph: TransferGraph, name: str = "graph",
                 enumeration_cap: int = DEFAULT_ENUMERATION_CAP):
        labels = {d["label"] for _, _, d in graph.essential.edges(data=True)}
        labels.update(itertools.chain.from_iterable(graph.essential.nodes))
        super().__init__(labels, enumeration_cap)
        self.graph = graph
        self.name = name

    @property
    def oracle_id(self) -> str:
        return f"{self.name}(order={self.graph.order})"

    def _estimate(self, n: int) -> Optional[int]:
        return self.graph.count_words(n)

    def _enumerate(self, n: int) -> Iterable[Word]:
        return self.graph.words(n)

    def contains(self, word: Sequence) -> bool:
        return self.graph.contains(word)


class ForbiddenWordsShift(GraphShift):
    """Two-sided shift of finite type avoiding a finite list of words."""

    def __init__(self, alphabet: Iterable, forbidden: Iterable[Sequence],
                 enumeration_cap: int = DEFAULT_ENUMERATION_CAP):
        symbols = tuple(sorted(set(alphabet), key=format_symbol))
        self.forbidden = tuple(sorted({tuple(f) for f in forbidden}, key=_word_key))
        if any(not f for f in self.forbidden):
            raise ParameterError("the empty word cannot be forbidden")
        order = max((len(f) for f in self.forbidden), default=1) - 1

        def allowed(word: Word) -> bool:
            return not any(f in factors(word, len(f)) for f in self.forbidden if len(f) <= len(word))

        vertices = [w for w in itertools.product(symbols, repeat=order) if allowed(w)]
        edges = [w for w in itertools.product(symbols, repeat=order + 1) if allowed(w)]
        super().__init__(TransferGraph(order, vertices, edges), "sft", enumeration_cap)
        self._alphabet = symbols

    @property
    def oracle_id(self) -> str:
        alphabet = "".join(format_symbol(s) for s in self.alphabet)
        forbidden = ",".join("".join(map(format_symbol, f)) for f in self.forbidden)
        return f"sft({alphabet};forbid={forbidden})"


class SubstitutionShift(LanguageOracle):
    """Subshift of a primitive substitution.

    ``L_2`` is the fixed point of "two-letter factors of images of two-letter
    factors"; ``L_n`` is read off the images ``σ^k(ab)`` for ``ab`` in
    ``L_2`` once every ``σ^k(c)`` has length at least ``n``.
    """

    def __init__(self, rules: Mapping[str, Sequence], seed: Optional[Sequence] = None,
                 enumeration_cap: int = DEFAULT_ENUMERATION_CAP):
        self.rules = {a: tuple(image) for a, image in rules.items()}
        super().__init__(self.rules.keys(), enumeration_cap)
        for a, image in self.rules.items():
            if not image or any(s not in self.rules for s in image):
                raise ParameterError(f"image of {a!r} uses symbols without rules")
        self._check_primitive()
        self.two_factors = self._two_factors()
        self.seed = tuple(seed) if seed else min(self.two_factors, key=_word_key)

    @property
    def oracle_id(self) -> str:
        rules = ",".join(f"{a}->{''.join(map(format_symbol, self.rules[a]))}" for a in self.alphabet)
        return f"substitution({rules})"

    def _check_primitive(self) -> None:
        index = {a: i for i, a in enumerate(self.alphabet)}
        size = len(index)
        matrix = np.zeros((size, size), dtype=bool)
        for a, image in self.rules.items():
            for s in image:
                matrix[index[a], index[s]] = True
        power = matrix.copy()
        for _ in range((size - 1) ** 2):
            if power.all():
                break
            power = (power.astype(np.int64) @ matrix.astype(np.int64)) > 0
        if not power.all():
            raise ParameterError("substitution must be primitive")
        if all(len(image) == 1 for image in self.rules.values()):
            raise ParameterError("substitution must be expanding")

    def apply(self, word: Sequence, times: int = 1) -> Word:
        result = tuple(word)
        for _ in range(times):
            result = tuple(itertools.chain.from_iterable(self.rules[s] for s in result))
        return result

    def _two_factors(self) -> Set[Word]:
        found = set()
        for image in self.rules.values():
            found |= factors(image, 2)
        frontier = set(found)
        while frontier:
            discovered = set()
            for pair in frontier:
                discovered |= factors(self.apply(pair), 2)
            frontier = discovered - found
            found |= frontier
        return found

    def _power_for(self, n: int) -> int:
        k = 0
        while min(len(self.apply((a,), k)) for a in self.alphabet) < n:
            k += 1
        return k

    def _enumerate(self, n: int) -> Iterable[Word]:
        if n == 0:
            return {()}
        if n == 1:
            return {(a,) for a in self.alphabet}
        k = self._power_for(n)
        result: Set[Word] = set()
        for pair in self.two_factors:
            result |= factors(self.apply(pair, k), n)
        return result

    def sample(self, length: int) -> Word:
        """A length-``length`` factor read from ``σ^k(seed)``."""
        k = 0
        while len(self.apply(self.seed, k)) < length:
            k += 1
        return self.apply(self.seed, k)[:length]


class SturmianShift(LanguageOracle):
    """Coding of the rotation by ``alpha`` with ``[0, 1-alpha) -> 0`` and ``[1-alpha, 1) -> 1``.

    ``alpha`` is an exact rational approximant ``p/q``; the orbit of
    ``1/(2q)`` visits every cell of the ``1/q`` lattice once per period, so
    ``q + n - 1`` symbols carry every length-n factor of the coding. The
    language agrees with the irrational rotation's for ``n < q``.
    """

    def __init__(self, alpha: Fraction, irrational: Optional[str] = None,
                 enumeration_cap: int = DEFAULT_ENUMERATION_CAP):
        alpha = Fraction(alpha)
        if not 0 < alpha < 1:
            raise ParameterError(f"rotation parameter must lie in (0, 1), got {alpha}")
        super().__init__(("0", "1"), enumeration_cap)
        self.alpha = alpha
        self.irrational = irrational

    @property
    def oracle_id(self) -> str:
        name = f";{self.irrational}" if self.irrational else ""
        return f"sturmian({self.alpha.numerator}/{self.alpha.denominator}{name})"

    def coding(self, length: int, start: int = 0) -> Word:
        """Symbols ``start .. start + length - 1`` of the coded orbit."""
        p, q = self.alpha.numerator, self.alpha.denominator
        modulus = 2 * q
        threshold = 2 * (q - p)
        return tuple("1" if (1 + 2 * p * i) % modulus >= threshold else "0"
                     for i in range(start, start + length))

    def _enumerate(self, n: int) -> Iterable[Word]:
        q = self.alpha.denominator
        if n >= q:
            self.logger.warning("Approximant %s is too coarse for length %d; language saturates",
                                self.alpha, n)
        return factors(self.coding(q + n - 1), n) if n else {()}


class PrefixStreamOracle(LanguageOracle):
    """Sample-based language of a stream: windows starting at ``0 .. horizon``.

    Answers are lower approximations of the orbit closure's language.
    """

    sample_based = True

    def __init__(self, stream: SymbolStream, horizon: int, name: str = "stream",
                 enumeration_cap: int = DEFAULT_ENUMERATION_CAP):
        if horizon < 0:
            raise ParameterError(f"horizon must be non-negative, got {horizon}")
        self.stream = stream
        self.horizon = horizon
        self.name = name
        super().__init__(stream.prefix(horizon + 1), enumeration_cap)

    @property
    def oracle_id(self) -> str:
        return f"{self.name}(horizon={self.horizon})"

    def _enumerate(self, n: int) -> Iterable[Word]:
        try:
            prefix = self.stream.prefix(self.horizon + n)
        except InsufficientDataError:
            raise InsufficientDataError(
                f"length-{n} windows need a prefix of {self.horizon + n} symbols")
        return {prefix[i:i + n] for i in range(self.horizon + 1)}


class ProductShift(LanguageOracle):
    """``X x Y`` over the paired alphabet."""

    def __init__(self, left: LanguageOracle, right: LanguageOracle,
                 enumeration_cap: int = DEFAULT_ENUMERATION_CAP):
        super().__init__(itertools.product(left.alphabet, right.alphabet), enumeration_cap)
        self.left = left
        self.right = right
        self.sample_based = left.sample_based or right.sample_based

    @property
    def oracle_id(self) -> str:
        return f"product({self.left.oracle_id},{self.right.oracle_id})"

    def _estimate(self, n: int) -> Optional[int]:
        return self.left.count(n) * self.right.count(n)

    def _enumerate(self, n: int) -> Iterable[Word]:
        for u in self.left.words(n):
            for v in self.right.words(n):
                yield tuple(zip(u, v))

    def contains(self, word: Sequence) -> bool:
        if not all(isinstance(s, tuple) and len(s) == 2 for s in word):
            return False
        u = tuple(s[0] for s in word)
        v = tuple(s[1] for s in word)
        return self.left.contains(u) and self.right.contains(v)


def product_oracle(left: LanguageOracle, right: LanguageOracle) -> ProductShift:
    return ProductShift(left, right, min(left.enumeration_cap, right.enumeration_cap))


def sft_approximation(oracle: LanguageOracle, m: int) -> TransferGraph:
    """Order-m transfer graph with vertices ``L_m(X)`` and edges ``L_{m+1}(X)``."""
    if m < 0:
        raise ParameterError(f"approximation order must be non-negative, got {m}")
    graph = TransferGraph(m, oracle.words(m), oracle.words(m + 1))
    logger.debug("SFT approximation of %s at order %d: %s", oracle.oracle_id, m, graph.summary())
    return graph


def is_factor_closed(oracle: LanguageOracle, n: int) -> bool:
    """Front and back (n-1)-segments of every n-word lie in ``L_{n-1}``."""
    if n == 0:
        return True
    shorter = oracle.words(n - 1)
    return all(w[:-1] in shorter and w[1:] in shorter for w in oracle.words(n))


def is_extendable(oracle: LanguageOracle, n: int) -> bool:
    """Every n-word is a front segment of some (n+1)-word."""
    fronts = {w[:-1] for w in oracle.words(n + 1)}
    return oracle.words(n) <= fronts
