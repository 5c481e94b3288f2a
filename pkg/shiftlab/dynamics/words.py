"""
Word arithmetic: finite and streamed symbol sequences, shifts, the weighted
norm on [0,1]-valued words, quantization and the sup distance.

Words are plain tuples. Discrete symbols are strings; real symbols are
``int``, ``Fraction`` (exact, usually dyadic) or ``float``. Positions are
0-based: ``b`` occurs in ``a`` at ``i`` when ``a[i + j] == b[j]`` for every
``j < len(b)``.
"""

import logging
import math
from abc import ABC, abstractmethod
from fractions import Fraction
from numbers import Rational
from pathlib import Path
from typing import Any, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from ..core.exceptions import (
    AlphabetError,
    InsufficientDataError,
    LengthMismatchError,
    ParameterError,
)

logger = logging.getLogger(__name__)

# Product systems use pairs of symbols.
Symbol = Union[str, int, Fraction, float, Tuple[Any, ...]]
Word = Tuple[Symbol, ...]
Real = Union[Fraction, float]

DEFAULT_EXACT_CAP = 65536
FLOAT_TERMS = 64


def word_str(word: Sequence[Symbol]) -> str:
    """Compact text for discrete words, space-separated text otherwise."""
    if all(isinstance(s, str) and len(s) == 1 for s in word):
        return "".join(word)  # type: ignore[arg-type]
    return " ".join(format_symbol(s) for s in word)


def shift(x: Sequence[Symbol], n: int) -> Word:
    """Drop the first ``n`` symbols; saturates to the empty word."""
    if n < 0:
        raise ParameterError(f"shift count must be non-negative, got {n}")
    return tuple(x[n:])


def concat(*words: Sequence[Symbol]) -> Word:
    result: List[Symbol] = []
    for word in words:
        result.extend(word)
    return tuple(result)


def is_front_segment(prefix: Sequence[Symbol], word: Sequence[Symbol]) -> bool:
    return len(prefix) <= len(word) and tuple(word[:len(prefix)]) == tuple(prefix)


def subword(word: Sequence[Symbol], i: int, n: int) -> Word:
    """The length-``n`` subword of ``word`` aligned at ``i``."""
    if i < 0 or i + n > len(word):
        raise InsufficientDataError(f"subword [{i}, {i + n}) outside a word of length {len(word)}")
    return tuple(word[i:i + n])


def occurrences(word: Sequence[Symbol], pattern: Sequence[Symbol]) -> List[int]:
    """All alignments of ``pattern`` in ``word`` (overlapping ones included)."""
    n = len(pattern)
    if n == 0:
        return list(range(len(word) + 1))
    pattern = tuple(pattern)
    first = pattern[0]
    found = []
    for i in range(len(word) - n + 1):
        if word[i] == first and tuple(word[i:i + n]) == pattern:
            found.append(i)
    return found


def factors(word: Sequence[Symbol], n: int) -> set:
    """Distinct length-``n`` subwords."""
    return {tuple(word[i:i + n]) for i in range(len(word) - n + 1)}


# ---------------------------------------------------------------------------
# Real-valued words
# ---------------------------------------------------------------------------

def is_real_symbol(symbol: Symbol) -> bool:
    return isinstance(symbol, (Rational, float)) and not isinstance(symbol, bool)


def is_exact_symbol(symbol: Symbol) -> bool:
    return isinstance(symbol, Rational) and not isinstance(symbol, bool)


def require_real(x: Sequence[Symbol]) -> None:
    """AlphabetError for a non-real symbol, ParameterError for one outside [0, 1]."""
    for i, symbol in enumerate(x):
        if not is_real_symbol(symbol):
            raise AlphabetError(f"symbol {symbol!r} at position {i} is not a real number")
        if not 0 <= symbol <= 1:  # type: ignore[operator]
            raise ParameterError(f"symbol {symbol} at position {i} lies outside [0, 1]")


def is_exact(x: Sequence[Symbol]) -> bool:
    return all(is_exact_symbol(s) for s in x)


def _dyadic_exponent(value: Rational) -> Optional[int]:
    """q with denominator 2^q, or None for non-dyadic rationals."""
    denominator = value.denominator
    if denominator & (denominator - 1):
        return None
    return denominator.bit_length() - 1


def _dyadic_numerators(x: Sequence[Symbol]) -> Optional[Tuple[List[int], int]]:
    """Integer numerators over a common denominator 2^Q, or None."""
    exponents = []
    for symbol in x:
        q = _dyadic_exponent(symbol)  # type: ignore[arg-type]
        if q is None:
            return None
        exponents.append(q)
    top = max(exponents, default=0)
    numerators = [s.numerator << (top - q) for s, q in zip(x, exponents)]  # type: ignore[union-attr]
    return numerators, top


def _float_norm(x: Sequence[Symbol]) -> float:
    return math.fsum(abs(float(s)) * 2.0 ** -(i + 1) for i, s in enumerate(x[:FLOAT_TERMS]))


def weighted_norm(x: Sequence[Symbol], exact_cap: int = DEFAULT_EXACT_CAP) -> Real:
    """Return ``sum |x(i)| 2^-i`` (1-based ``i``).

    Exact (a Fraction) when every symbol is rational and ``len(x)`` is within
    ``exact_cap``; otherwise a float accurate to 2^-64.
    """
    require_real(x)
    if not x:
        return Fraction(0)

    if not is_exact(x):
        return _float_norm(x)

    if len(x) > exact_cap:
        logger.debug("Norm of a %d-symbol word computed in float mode", len(x))
        return _float_norm(x)

    dyadic = _dyadic_numerators(x)
    if dyadic is not None:
        numerators, top = dyadic
        acc = 0
        for p in numerators:
            acc = 2 * acc + abs(p)
        return Fraction(acc, 1 << (top + len(x)))

    norm = Fraction(0)
    for symbol in reversed(x):
        norm = (abs(Fraction(symbol)) + norm) / 2  # type: ignore[arg-type]
    return norm


def suffix_norms(x: Sequence[Symbol]) -> List[Real]:
    """``[‖x[k:]‖ for k in 0..len(x)]`` in linear passes.

    Exact words are handled with integer numerators over a common power of
    two, so the result is exact without rebuilding Fractions per step.
    """
    require_real(x)
    length = len(x)
    norms: List[Real] = [Fraction(0)] * (length + 1)
    if not x:
        return norms

    if not is_exact(x):
        acc = 0.0
        floats: List[Real] = [0.0] * (length + 1)
        for k in range(length - 1, -1, -1):
            acc = (abs(float(x[k])) + acc) / 2
            floats[k] = acc
        return floats

    dyadic = _dyadic_numerators(x)
    if dyadic is None:
        acc_q = Fraction(0)
        for k in range(length - 1, -1, -1):
            acc_q = (abs(Fraction(x[k])) + acc_q) / 2  # type: ignore[arg-type]
            norms[k] = acc_q
        return norms

    numerators, top = dyadic
    total = 0
    for k in range(length - 1, -1, -1):
        total += abs(numerators[k]) << (length - 1 - k)
        norms[k] = Fraction(total, 1 << (top + length - k))
    return norms


def _step_for(eps: Real, x: Sequence[Symbol]) -> Real:
    if isinstance(eps, float) and is_exact(x):
        return Fraction(repr(eps))
    return eps


def quantize(a: Sequence[Symbol], eps: Real, tolerance: float = 1e-9) -> Word:
    """Floor every coordinate to the grid ``{0, eps, 2 eps, ...}``.

    Exact words with a float step use the step's decimal value; float words
    absorb rounding noise up to ``tolerance`` grid steps.
    """
    if not eps > 0 or eps > 1:
        raise ParameterError(f"quantization step must lie in (0, 1], got {eps}")
    require_real(a)
    step = _step_for(eps, a)

    if isinstance(step, float):
        return tuple(math.floor(float(s) / step + tolerance) * step for s in a)
    return tuple(math.floor(Fraction(s) / step) * step for s in a)  # type: ignore[arg-type]


def sup_distance(a: Sequence[Symbol], b: Sequence[Symbol]) -> Real:
    """``max |a(i) - b(i)|``; 0 for empty words."""
    if len(a) != len(b):
        raise LengthMismatchError(f"sup distance needs equal lengths, got {len(a)} and {len(b)}")
    require_real(a)
    require_real(b)
    return max((abs(x - y) for x, y in zip(a, b)), default=Fraction(0))  # type: ignore[operator]


# ---------------------------------------------------------------------------
# Word files
# ---------------------------------------------------------------------------

def parse_symbol(token: str, real: bool = False) -> Symbol:
    """Parse one token of the word file format.

    ``p/2^q`` and ``p/q`` give Fractions, decimals give exact Fractions, and
    bare tokens stay discrete unless ``real`` is set.
    """
    if "/" in token:
        numerator, _, denominator = token.partition("/")
        try:
            if "^" in denominator:
                base, _, power = denominator.partition("^")
                if base.strip() != "2":
                    raise ValueError(token)
                return Fraction(int(numerator), 2 ** int(power))
            return Fraction(int(numerator), int(denominator))
        except (ValueError, ZeroDivisionError):
            raise AlphabetError(f"malformed rational symbol {token!r}")
    if real or "." in token:
        try:
            return Fraction(token)
        except ValueError:
            raise AlphabetError(f"malformed real symbol {token!r}")
    return token


def format_symbol(symbol: Symbol) -> str:
    if isinstance(symbol, str):
        return symbol
    if isinstance(symbol, tuple):
        return "(" + ",".join(format_symbol(s) for s in symbol) + ")"
    if isinstance(symbol, float):
        return repr(symbol)
    value = Fraction(symbol)  # type: ignore[arg-type]
    if value.denominator == 1:
        return str(value.numerator)
    q = _dyadic_exponent(value)
    if q is not None:
        return f"{value.numerator}/2^{q}"
    return f"{value.numerator}/{value.denominator}"


def format_word(word: Sequence[Symbol]) -> str:
    return " ".join(format_symbol(s) for s in word)


def parse_word(line: str, real: bool = False) -> Word:
    return tuple(parse_symbol(token, real) for token in line.split())


def read_words(path: Union[str, Path], real: bool = False) -> List[Word]:
    """Read one word per line; blank lines are empty words, ``#`` lines are skipped."""
    words = []
    with Path(path).open("r", encoding="utf-8") as f:
        for line in f:
            if line.lstrip().startswith("#"):
                continue
            words.append(parse_word(line, real))
    return words


def write_words(words: Iterable[Sequence[Symbol]], path: Union[str, Path]) -> None:
    with Path(path).open("w", encoding="utf-8") as f:
        for word in words:
            f.write(format_word(word) + "\n")


def sorted_words(words: Iterable[Sequence[Symbol]]) -> List[Word]:
    """Lexicographic order on symbol text, the order used for language dumps."""
    return sorted((tuple(w) for w in words), key=lambda w: tuple(format_symbol(s) for s in w))


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

def de_bruijn(alphabet: Sequence[Symbol], n: int) -> Word:
    """A word containing every length-``n`` word over ``alphabet`` exactly once.

    Prefer-highest greedy construction: start from ``n`` copies of the
    smallest symbol and always append the largest symbol that creates an
    unseen window.
    """
    if n < 0:
        raise ParameterError(f"window length must be non-negative, got {n}")
    symbols = sorted(set(alphabet), key=format_symbol)
    if n == 0 or not symbols:
        return ()

    sequence = [symbols[0]] * n
    seen = {tuple(sequence)}
    while True:
        tail = tuple(sequence[len(sequence) - n + 1:]) if n > 1 else ()
        for candidate in reversed(symbols):
            window = tail + (candidate,)
            if window not in seen:
                seen.add(window)
                sequence.append(candidate)
                break
        else:
            return tuple(sequence)


# ---------------------------------------------------------------------------
# Streams
# ---------------------------------------------------------------------------

class SymbolStream(ABC):
    """Pull-based symbol producer with deterministic random access.

    Positions are 0-based. ``prefix`` is stateless; ``take`` advances this
    consumer's cursor. Concurrent consumers must ``clone``.
    """

    def __init__(self) -> None:
        self._cursor = 0

    @property
    def length(self) -> Optional[int]:
        """Number of symbols, or None for an infinite stream."""
        return None

    @abstractmethod
    def symbol_at(self, i: int) -> Symbol:
        pass

    def prefix(self, n: int) -> Word:
        if n < 0:
            raise ParameterError(f"prefix length must be non-negative, got {n}")
        if self.length is not None and n > self.length:
            raise InsufficientDataError(f"stream holds {self.length} symbols, {n} requested")
        return tuple(self.symbol_at(i) for i in range(n))

    def take(self, n: int) -> Word:
        start = self._cursor
        if self.length is not None and start + n > self.length:
            raise InsufficientDataError(f"stream exhausted at {self.length} symbols")
        self._cursor += n
        return tuple(self.symbol_at(i) for i in range(start, start + n))

    def __iter__(self) -> Iterator[Symbol]:
        i = 0
        while self.length is None or i < self.length:
            yield self.symbol_at(i)
            i += 1

    @abstractmethod
    def clone(self) -> 'SymbolStream':
        pass


class WordStream(SymbolStream):
    """A finite stream over a fixed word."""

    def __init__(self, word: Sequence[Symbol]):
        super().__init__()
        self.word = tuple(word)

    @property
    def length(self) -> Optional[int]:
        return len(self.word)

    def symbol_at(self, i: int) -> Symbol:
        if not 0 <= i < len(self.word):
            raise InsufficientDataError(f"index {i} outside a stream of {len(self.word)} symbols")
        return self.word[i]

    def prefix(self, n: int) -> Word:
        if n < 0:
            raise ParameterError(f"prefix length must be non-negative, got {n}")
        if n > len(self.word):
            raise InsufficientDataError(f"stream holds {len(self.word)} symbols, {n} requested")
        return self.word[:n]

    def clone(self) -> 'WordStream':
        return WordStream(self.word)


class PeriodicStream(SymbolStream):
    """The infinite repetition ``period period period ...``."""

    def __init__(self, period: Sequence[Symbol]):
        super().__init__()
        if not period:
            raise ParameterError("periodic stream needs a non-empty period")
        self.period = tuple(period)

    def symbol_at(self, i: int) -> Symbol:
        return self.period[i % len(self.period)]

    def prefix(self, n: int) -> Word:
        if n < 0:
            raise ParameterError(f"prefix length must be non-negative, got {n}")
        repeats, rest = divmod(n, len(self.period))
        return self.period * repeats + self.period[:rest]

    def clone(self) -> 'PeriodicStream':
        return PeriodicStream(self.period)
