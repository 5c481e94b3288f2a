"""
Generator and analyzer for the everywhere non-invertible, zero-entropy
construction on ``[0,1]^N``.

Starting from a strictly positive seed ``x_0`` of length ``L_0`` the stages
are built as

    x_{n+1} = x_n ... x_n (M_n copies) y_n

where ``y_n`` concatenates ``w_{b,k} = tau_b(w_k)`` over ``0 <= k < L_n``
(major) and ``b`` in ``{0,1}^D`` (lexicographic minor), ``w_k`` being the
back segment ``x_n[k:]``. ``tau_b`` prepends the symbols
``theta_0(x) = |x|/8`` or ``theta_1(x) = |x|/4`` right to left over ``b``.

Layouts (lengths, depths, multiplicities) are closed-form integers, so any
symbol of ``x_*`` can be addressed without building later stages.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import psutil

from ..core.exceptions import (
    BudgetExceededError,
    DecompositionError,
    ExactCapError,
    InsufficientDataError,
    NotFoundError,
    NotInLanguageError,
    ParameterError,
    ScheduleError,
)
from .words import (
    DEFAULT_EXACT_CAP,
    Real,
    Symbol,
    SymbolStream,
    Word,
    WordStream,
    is_exact,
    occurrences,
    require_real,
    suffix_norms,
    weighted_norm,
)

logger = logging.getLogger(__name__)

THETA_FACTOR = {0: Fraction(1, 8), 1: Fraction(1, 4)}
DEFAULT_SEED: Word = (Fraction(1, 2), Fraction(1))
COPY = "COPY"
DECAYING = "DECAYING"

# Rough in-memory cost of one stored symbol.
BYTES_PER_EXACT_SYMBOL = 160
BYTES_PER_FLOAT_SYMBOL = 32

_LITERAL_DEPTH_LIMIT = 40


def _bits(b: Union[str, Sequence]) -> Tuple[int, ...]:
    bits = tuple(int(c) for c in b)
    if any(bit not in (0, 1) for bit in bits):
        raise ParameterError(f"b must be a bit word, got {b!r}")
    return bits


def theta(bit: int, x: Sequence[Symbol], exact_cap: int = DEFAULT_EXACT_CAP) -> Real:
    """``|x|/8`` for bit 0, ``|x|/4`` for bit 1."""
    norm = weighted_norm(x, exact_cap)
    factor = THETA_FACTOR[bit]
    return norm * factor if isinstance(norm, Fraction) else norm * float(factor)


def _theta_chain(bits: Sequence[int], norm: Real) -> List[Real]:
    """Symbols prepended by ``tau_b`` to a word of norm ``norm``, in word order."""
    exact = isinstance(norm, Fraction)
    prepended = []
    for bit in reversed(bits):
        factor = THETA_FACTOR[bit] if exact else float(THETA_FACTOR[bit])
        symbol = factor * norm
        prepended.append(symbol)
        norm = symbol / 2 + norm / 2
    prepended.reverse()
    return prepended


def tau(b: Union[str, Sequence], x: Sequence[Symbol], exact_cap: int = DEFAULT_EXACT_CAP) -> Word:
    """``tau_{b_M...b_1}(x)``: apply ``theta_{b_1}`` first, ``theta_{b_M}`` last.

    Only ``|x|`` is computed from scratch; each step updates the norm by
    ``|theta x| = theta/2 + |x|/2``.
    """
    bits = _bits(b)
    require_real(x)
    if is_exact(x) and len(x) + len(bits) > exact_cap:
        raise ExactCapError(
            f"tau on {len(x) + len(bits)} symbols exceeds the exact cap of {exact_cap}",
            required=len(x) + len(bits), limit=exact_cap,
        )
    norm = weighted_norm(x, exact_cap)
    return tuple(_theta_chain(bits, norm)) + tuple(x)


# ---------------------------------------------------------------------------
# Schedules and layouts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstructionSchedule:
    """All parameters of the stage recursion."""
    x0: Word = DEFAULT_SEED
    d_max: int = 8
    depth_mode: str = "scaled"
    multiplicity: Tuple[int, ...] = ()
    precision: str = "exact"
    stages: int = 3

    def __post_init__(self) -> None:
        if not self.x0:
            raise ScheduleError("seed word must not be empty")
        try:
            require_real(self.x0)
        except ParameterError:
            raise ScheduleError("seed symbols must lie in (0, 1]")
        if any(v <= 0 for v in self.x0):  # type: ignore[operator]
            raise ScheduleError("seed must be strictly positive")
        if self.d_max < 1:
            raise ScheduleError("d_max must be at least 1")
        if self.depth_mode not in ("scaled", "literal"):
            raise ScheduleError(f"unknown depth mode {self.depth_mode!r}")
        if self.precision not in ("exact", "float"):
            raise ScheduleError(f"unknown precision {self.precision!r}")
        if self.stages < 1:
            raise ScheduleError("at least one stage is required")
        for n, m in enumerate(self.multiplicity):
            if m < 2 ** n or m < 1:
                raise ScheduleError(f"M_{n} = {m} is below 2^{n}")

    @property
    def seed(self) -> Word:
        if self.precision == "float":
            return tuple(float(v) for v in self.x0)  # type: ignore[arg-type]
        return tuple(Fraction(v) for v in self.x0)  # type: ignore[arg-type]

    @property
    def epsilon_last(self) -> Symbol:
        """Last letter of the seed; every ``x_n`` ends with it."""
        return self.seed[-1]

    def depth(self, n: int, length: int) -> Optional[int]:
        """``D(n)``: ``min(3^L_n, d_max)`` when scaled, ``3^L_n`` (None if astronomical) otherwise."""
        if self.depth_mode == "literal":
            return 3 ** length if length <= _LITERAL_DEPTH_LIMIT else None
        if length >= 64:
            return self.d_max
        return min(3 ** length, self.d_max)

    def multiplicity_for(self, n: int, length: int, len_y: int) -> int:
        """Override if given, else the smallest power of two >= max(2^n, max(n,1)^2 len_y / L_n)."""
        if n < len(self.multiplicity):
            return self.multiplicity[n]
        scale = max(n, 1) ** 2
        target = max(2 ** n, -(-scale * len_y // length))
        return 1 << (target - 1).bit_length()


def y_length(length: int, depth: int) -> int:
    """``len(y_n) = 2^D (L(L+1)/2 + D L)``."""
    return (1 << depth) * (length * (length + 1) // 2 + depth * length)


@dataclass
class StageRecord:
    """Lengths and occurrence counters of one stage."""
    n: int
    length: int
    depth: Optional[int]
    multiplicity: Optional[int]
    len_y: Optional[int]
    next_length: Optional[int]
    i_counts: Dict[str, int] = field(default_factory=dict)

    @property
    def astronomical(self) -> bool:
        return self.depth is None

    @property
    def summability(self) -> Optional[Fraction]:
        """``len(y_n) / (M_n L_n)``."""
        if self.len_y is None or self.multiplicity is None:
            return None
        return Fraction(self.len_y, self.multiplicity * self.length)

    def block_offset(self, k: int) -> int:
        """Offset of the ``w_{b,k}`` block inside ``y_n``."""
        assert self.depth is not None
        return (1 << self.depth) * (k * (self.length + self.depth) - k * (k - 1) // 2)

    def word_start(self, k: int, b_index: int) -> int:
        """Offset of ``w_{b,k}`` inside ``x_{n+1}``."""
        assert self.depth is not None and self.multiplicity is not None
        word_length = self.length - k + self.depth
        return self.multiplicity * self.length + self.block_offset(k) + b_index * word_length

    def to_dict(self) -> Dict[str, object]:
        return {
            "n": self.n,
            "L_n": self.length,
            "D_n": self.depth,
            "M_n": self.multiplicity,
            "len_y": self.len_y,
            "L_next": self.next_length,
            "i_counts": dict(sorted(self.i_counts.items())),
        }


def stage_record(schedule: ConstructionSchedule, n: int, length: int) -> StageRecord:
    depth = schedule.depth(n, length)
    if depth is None:
        return StageRecord(n, length, None, None, None, None)
    len_y = y_length(length, depth)
    multiplicity = schedule.multiplicity_for(n, length, len_y)
    return StageRecord(n, length, depth, multiplicity, len_y, multiplicity * length + len_y)


def _check_memory(n: int, symbols: int, exact: bool, limit: int) -> None:
    per_symbol = BYTES_PER_EXACT_SYMBOL if exact else BYTES_PER_FLOAT_SYMBOL
    required = symbols * per_symbol
    available = psutil.virtual_memory().available
    budget = min(limit, available)
    if required > budget:
        raise BudgetExceededError(
            f"stage {n + 1} needs about {required} bytes, budget is {budget}",
            required=required, limit=budget,
        )


def build_stage(x_n: Sequence[Symbol], schedule: ConstructionSchedule, n: int,
                exact_cap: int = DEFAULT_EXACT_CAP,
                memory_limit: int = 2 * 1024 ** 3) -> Tuple[Word, StageRecord]:
    """Build ``x_{n+1}`` eagerly from ``x_n``."""
    x_n = tuple(x_n)
    record = stage_record(schedule, n, len(x_n))
    if record.astronomical:
        raise BudgetExceededError(f"stage {n} depth 3^{len(x_n)} cannot be materialized")
    assert record.depth is not None and record.multiplicity is not None and record.next_length is not None

    exact = is_exact(x_n)
    if exact and record.next_length > exact_cap:
        raise ExactCapError(
            f"x_{n + 1} has {record.next_length} symbols, above the exact cap of {exact_cap}",
            required=record.next_length, limit=exact_cap,
        )
    _check_memory(n, record.next_length, exact, memory_limit)

    norms = suffix_norms(x_n)
    y: List[Symbol] = []
    for k in range(len(x_n)):
        tail = x_n[k:]
        for b_index in range(1 << record.depth):
            bits = [(b_index >> (record.depth - 1 - i)) & 1 for i in range(record.depth)]
            y.extend(_theta_chain(bits, norms[k]))
            y.extend(tail)

    assert len(y) == record.len_y
    logger.info("Built stage %d: L=%d, D=%d, M=%d, len(y)=%d",
                n + 1, record.next_length, record.depth, record.multiplicity, len(y))
    return x_n * record.multiplicity + tuple(y), record


# ---------------------------------------------------------------------------
# The system
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    """A piece of a stage decomposition; positions are absolute in ``x_*``."""
    start: int
    length: int
    kind: str
    head: int = 0

    @property
    def end(self) -> int:
        return self.start + self.length


class NonInvertibleSystem:
    """Schedule, stage layouts, materialized stages and random access into ``x_*``."""

    def __init__(self, schedule: ConstructionSchedule, exact_cap: int = DEFAULT_EXACT_CAP,
                 stream_budget: int = 10 ** 7, memory_limit: int = 2 * 1024 ** 3,
                 materialize_cap: Optional[int] = None):
        self.schedule = schedule
        self.exact_cap = exact_cap
        self.stream_budget = stream_budget
        self.memory_limit = memory_limit
        self.materialize_cap = exact_cap if materialize_cap is None else materialize_cap
        self.logger = logging.getLogger(__name__)

        self.records: List[StageRecord] = []
        length = len(schedule.x0)
        for n in range(schedule.stages):
            record = stage_record(schedule, n, length)
            self.records.append(record)
            if record.astronomical:
                self.logger.warning("Stage %d is astronomical; later stages are not laid out", n)
                break
            assert record.next_length is not None
            length = record.next_length

        self.stages: List[Word] = [schedule.seed]
        while len(self.stages) <= len(self.records):
            n = len(self.stages) - 1
            record = self.records[n]
            if record.astronomical or record.next_length > self.materialize_cap:  # type: ignore[operator]
                break
            x_next, _ = build_stage(self.stages[n], schedule, n, self.exact_cap, self.memory_limit)
            self.stages.append(x_next)

        self._norms: Dict[int, List[Real]] = {}
        self._theta_cache: Dict[Tuple[int, int, int], List[Real]] = {}

    # -- layout -----------------------------------------------------------

    def length(self, n: int) -> Optional[int]:
        """``L_n`` when known."""
        if n == 0:
            return len(self.schedule.x0)
        if n - 1 < len(self.records):
            return self.records[n - 1].next_length
        return None

    @property
    def materialized(self) -> int:
        """Index of the last stage held in memory."""
        return len(self.stages) - 1

    def stage(self, n: int) -> Word:
        if n > self.materialized:
            raise BudgetExceededError(f"x_{n} is not materialized (cap {self.materialize_cap} symbols)")
        return self.stages[n]

    def norms(self, n: int) -> List[Real]:
        """Suffix norms ``|x_n[k:]|`` of a materialized stage."""
        if n not in self._norms:
            self._norms[n] = suffix_norms(self.stage(n))
        return self._norms[n]

    def theta_chain(self, n: int, k: int, b_index: int) -> List[Real]:
        """Head symbols of ``w_{b,k}`` at stage ``n``."""
        key = (n, k, b_index)
        if key not in self._theta_cache:
            depth = self.records[n].depth
            assert depth is not None
            bits = [(b_index >> (depth - 1 - i)) & 1 for i in range(depth)]
            if len(self._theta_cache) > 65536:
                self._theta_cache.clear()
            self._theta_cache[key] = _theta_chain(bits, self.norms(n)[k])
        return self._theta_cache[key]

    def locate_in_y(self, n: int, q: int) -> Tuple[int, int, int]:
        """``(k, b_index, offset)`` of position ``q`` inside ``y_n``."""
        record = self.records[n]
        assert record.depth is not None
        lo, hi = 0, record.length
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if record.block_offset(mid) <= q:
                lo = mid
            else:
                hi = mid
        k = lo
        b_index, offset = divmod(q - record.block_offset(k), record.length - k + record.depth)
        return k, b_index, offset

    def _stage_for(self, p: int) -> int:
        """Smallest stage whose word contains position ``p``.

        Past an astronomical stage the next word is an endless repetition of
        the current one as far as any reachable position is concerned.
        """
        n = 0
        while True:
            length = self.length(n)
            if length is not None and p < length:
                return n
            if n >= len(self.records):
                raise BudgetExceededError(f"position {p} lies beyond the {len(self.records)} laid-out stages")
            if self.records[n].astronomical:
                return n + 1
            n += 1

    def _symbol(self, m: int, p: int) -> Symbol:
        """Symbol ``p`` of ``x_m``."""
        while True:
            if m <= self.materialized:
                return self.stages[m][p]
            n = m - 1
            record = self.records[n]
            if record.astronomical:
                # M_n is astronomically large: x_m starts with x_n repeated.
                p %= record.length
                m = n
                continue
            assert record.multiplicity is not None and record.depth is not None
            head = record.multiplicity * record.length
            if p < head:
                p %= record.length
                m = n
                continue
            k, b_index, offset = self.locate_in_y(n, p - head)
            if offset < record.depth:
                return self.theta_chain(n, k, b_index)[offset]
            p = k + offset - record.depth
            m = n

    def symbol_at(self, p: int) -> Symbol:
        if p < 0:
            raise ParameterError(f"position must be non-negative, got {p}")
        return self._symbol(self._stage_for(p), p)

    def _chunk(self, m: int, lo: int, hi: int) -> List[Symbol]:
        """Symbols ``lo .. hi-1`` of ``x_m``."""
        if m <= self.materialized:
            return list(self.stages[m][lo:hi])
        n = m - 1
        record = self.records[n]
        length = record.length
        if record.astronomical:
            head = hi
        else:
            assert record.multiplicity is not None
            head = record.multiplicity * length
        result: List[Symbol] = []
        position = lo
        while position < min(hi, head):
            offset = position % length
            stop = min(hi, head, position - offset + length)
            result.extend(self._chunk(n, offset, offset + stop - position))
            position = stop
        for q in range(max(lo, head), hi):
            result.append(self._symbol(m, q))
        return result

    def window(self, start: int, count: int) -> Word:
        """``x_*[start : start + count]``; the end must stay within the stream budget."""
        if start < 0 or count < 0:
            raise ParameterError("window start and size must be non-negative")
        if start + count > self.stream_budget:
            raise BudgetExceededError(
                f"window ending at {start + count} exceeds the stream budget {self.stream_budget}",
                required=start + count, limit=self.stream_budget,
            )
        if count == 0:
            return ()
        m = self._stage_for(start + count - 1)
        return tuple(self._chunk(m, start, start + count))

    def prefix(self, count: int) -> Word:
        """The first ``count`` symbols of ``x_*``."""
        return self.window(0, count)

    def stream(self) -> 'ConstructionStream':
        return ConstructionStream(self)

    # -- cylinder bookkeeping --------------------------------------------

    def record_cylinder(self, name: str, cylinder: 'CylinderSet') -> None:
        """Fill ``I(x_s)`` for every materialized stage."""
        for record in self.records:
            if record.n <= self.materialized:
                record.i_counts[name] = cylinder.count_in(self.stages[record.n])

    # -- decomposition ----------------------------------------------------

    def segments(self, m: int, n: int, lo: int, hi: int, base: int = 0) -> Iterator[Segment]:
        """Stage-n segments of ``x_m`` overlapping ``[lo, hi)``, shifted by ``base``."""
        if m == n:
            length = self.length(n)
            assert length is not None
            if lo < length and hi > 0:
                yield Segment(base, length, COPY)
            return
        record = self.records[m - 1]
        length = record.length
        if record.astronomical:
            multiplicity = -(-hi // length)
            head = multiplicity * length
        else:
            assert record.multiplicity is not None
            multiplicity = record.multiplicity
            head = multiplicity * length

        copy = lo // length if lo < head else multiplicity
        while copy < multiplicity and copy * length < hi:
            start = copy * length
            yield from self.segments(m - 1, n, max(lo - start, 0), min(hi - start, length), base + start)
            copy += 1

        if hi <= head or record.depth is None:
            return
        depth = record.depth
        k, b_index, _ = self.locate_in_y(m - 1, max(lo, head) - head)
        while k < length:
            word_start = record.word_start(k, b_index)
            if word_start >= hi:
                return
            tail_start = word_start + depth
            # x_{m-1}[q] sits at absolute position inner_base + q inside this word
            inner_base = base + tail_start - k
            first = next(self.segments(m - 1, n, k, k + 1, inner_base))
            if first.start == base + tail_start:
                yield Segment(base + word_start, depth, DECAYING, depth)
                yield first
            else:
                consumed = base + tail_start - first.start
                remaining_head = max(first.head - consumed, 0) if first.kind == DECAYING else 0
                yield Segment(base + word_start, depth + first.end - base - tail_start, DECAYING,
                              depth + remaining_head)
            inner_lo = max(lo - tail_start + k, k)
            inner_hi = min(hi - tail_start + k, length)
            if inner_lo < inner_hi:
                for segment in self.segments(m - 1, n, inner_lo, inner_hi, inner_base):
                    if segment.start > first.start:
                        yield segment
            b_index += 1
            if b_index == 1 << depth:
                b_index = 0
                k += 1

    def decompose(self, n: int, start: int, length: int) -> List['SegmentReport']:
        """Stage-n segments covering ``x_*[start : start + length]``, each verified."""
        if self.length(n) is None:
            raise DecompositionError(f"stage {n} is not laid out")
        if start < 0 or length <= 0:
            raise ParameterError("decomposition window must be non-empty and start at 0 or later")
        stop = start + length
        m = max(self._stage_for(stop - 1), n)
        reports = []
        for segment in self.segments(m, n, start, stop):
            if segment.end <= start or segment.start >= stop:
                continue
            reports.append(self._verify_segment(segment, n, start, stop))
        return reports

    def _verify_segment(self, segment: Segment, n: int, lo: int, hi: int) -> 'SegmentReport':
        stage_length = self.length(n)
        assert stage_length is not None
        complete = segment.start >= lo and segment.end <= hi
        report = SegmentReport(segment, complete)
        if segment.kind != DECAYING:
            return report

        first = max(segment.start, lo)
        last = min(segment.start + segment.head, hi)
        envelope = Fraction(1, 4)
        for p in range(first, last):
            j = p - segment.start + 1
            bound = envelope * Fraction(5, 8) ** (segment.head - j)
            value = self.symbol_at(p)
            if value > bound:  # type: ignore[operator]
                report.envelope_ok = False
                report.envelope_violation = j
                break

        ratio_stop = min(segment.start + segment.length - stage_length, hi - 1)
        checked = violated = 0
        for p in range(first, ratio_stop):
            current, following = self.symbol_at(p), self.symbol_at(p + 1)
            checked += 1
            if current > Fraction(7, 8) * following:  # type: ignore[operator]
                violated += 1
        report.ratio_checked = checked
        report.ratio_violations = violated
        return report


@dataclass
class SegmentReport:
    segment: Segment
    complete: bool
    envelope_ok: bool = True
    envelope_violation: Optional[int] = None
    ratio_checked: int = 0
    ratio_violations: int = 0

    def to_dict(self) -> Dict[str, object]:
        return {
            "start": self.segment.start,
            "length": self.segment.length,
            "kind": self.segment.kind,
            "head": self.segment.head,
            "complete": self.complete,
            "envelope_ok": self.envelope_ok,
            "ratio_checked": self.ratio_checked,
            "ratio_violations": self.ratio_violations,
        }


class ConstructionStream(SymbolStream):
    """Lazy ``x_*``: random access through the stage layouts."""

    def __init__(self, system: NonInvertibleSystem):
        super().__init__()
        self.system = system

    def symbol_at(self, i: int) -> Symbol:
        return self.system.symbol_at(i)

    def prefix(self, n: int) -> Word:
        if n < 0:
            raise ParameterError(f"prefix length must be non-negative, got {n}")
        return self.system.prefix(n)

    def take(self, n: int) -> Word:
        symbols = self.system.window(self._cursor, n)
        self._cursor += n
        return symbols

    def clone(self) -> 'ConstructionStream':
        return ConstructionStream(self.system)


def prefix_stream(system: NonInvertibleSystem, count: int) -> WordStream:
    """The first ``count`` symbols of ``x_*`` as a finite stream."""
    return WordStream(system.prefix(count))


def decompose(prefix: Sequence[Symbol], system: NonInvertibleSystem, n: int) -> List[SegmentReport]:
    """Decompose a prefix of ``x_*`` into stage-n segments."""
    stage_length = system.length(n)
    if stage_length is None or len(prefix) < stage_length:
        raise DecompositionError(f"prefix of {len(prefix)} symbols is too short for stage {n}")
    if tuple(prefix) != system.prefix(len(prefix)):
        raise DecompositionError("word is not a prefix of the constructed point")
    return system.decompose(n, 0, len(prefix))


def mixture_statistic(system: NonInvertibleSystem, n: int, start: int, length: int,
                      window: Optional[Sequence[Symbol]] = None) -> Fraction:
    """Share of window indices lying in COPY segments of the stage-n decomposition."""
    if length <= 0:
        raise ParameterError("window must be non-empty")
    if window is not None and tuple(window) != tuple(system.symbol_at(p) for p in range(start, start + length)):
        raise DecompositionError(f"window does not match x_* at {start}")
    covered = 0
    for report in system.decompose(n, start, length):
        segment = report.segment
        if segment.kind == COPY:
            covered += min(segment.end, start + length) - max(segment.start, start)
    return Fraction(covered, length)


# ---------------------------------------------------------------------------
# Non-invertibility witnesses
# ---------------------------------------------------------------------------

@dataclass
class PreimageWitness:
    word: Word
    r: Real
    r_prime: Real
    position: int
    position_prime: int
    norm: Real

    @property
    def gap(self) -> Real:
        return abs(self.r - self.r_prime)  # type: ignore[operator]

    @property
    def holds(self) -> bool:
        return self.gap >= self.norm / 16  # type: ignore[operator]

    def to_dict(self) -> Dict[str, object]:
        return {
            "length": len(self.word),
            "r": str(self.r),
            "r_prime": str(self.r_prime),
            "positions": [self.position, self.position_prime],
            "gap": str(self.gap),
            "bound": str(self.norm / 16),  # type: ignore[operator]
        }


def preimage_witness(prefix: Sequence[Symbol], a: Sequence[Symbol]) -> PreimageWitness:
    """Two symbols preceding occurrences of ``a`` that differ by at least ``|a|/16``.

    NotFoundError means the prefix is too short to show the pair.
    """
    a = tuple(a)
    positions = [i for i in occurrences(prefix, a) if i > 0]
    if not positions:
        raise NotInLanguageError("word does not occur after the first position of the prefix")
    low = min(positions, key=lambda i: prefix[i - 1])  # type: ignore[arg-type,return-value]
    high = max(positions, key=lambda i: prefix[i - 1])  # type: ignore[arg-type,return-value]
    witness = PreimageWitness(a, prefix[low - 1], prefix[high - 1], low - 1, high - 1,  # type: ignore[arg-type]
                              weighted_norm(a))
    if not witness.holds:
        raise NotFoundError(f"prefix of {len(prefix)} symbols shows no preimage pair for this word")
    return witness


@dataclass
class StageWitness:
    """Occurrences of ``a = x_n[j:j+len(a)]`` inside ``y_n`` after ``theta_0`` and ``theta_1``."""
    word: Word
    stage: int
    index: int
    positions: Tuple[int, int]
    r: Real
    r_prime: Real
    tail_norm: Real
    norm: Real

    @property
    def gap(self) -> Real:
        return self.r_prime - self.r  # type: ignore[operator]

    @property
    def holds(self) -> bool:
        return self.gap >= self.norm / 16  # type: ignore[operator]

    def to_dict(self) -> Dict[str, object]:
        return {
            "stage": self.stage,
            "index": self.index,
            "length": len(self.word),
            "positions": list(self.positions),
            "r": str(self.r),
            "r_prime": str(self.r_prime),
            "gap": str(self.gap),
            "bound": str(self.norm / 16),  # type: ignore[operator]
            "holds": self.holds,
        }


def stage_witness(system: NonInvertibleSystem, n: int, j: int, length: int) -> StageWitness:
    """Re-read the construction's two occurrences of ``x_n[j:j+length]`` from the stream."""
    x_n = system.stage(n)
    if j < 0 or j + length > len(x_n):
        raise InsufficientDataError(f"subword [{j}, {j + length}) lies outside x_{n}")
    record = system.records[n]
    if record.astronomical:
        raise BudgetExceededError(f"stage {n} is astronomical")
    a = x_n[j:j + length]

    found = []
    for b_index in (0, 1):
        word_start = record.word_start(j, b_index)
        tail = word_start + record.depth  # type: ignore[operator]
        read = tuple(system.symbol_at(p) for p in range(tail, tail + length))
        if read != a:
            raise NotInLanguageError(f"stream does not hold x_{n}[{j}:] after w_(b,{j})")
        found.append((tail, system.symbol_at(tail - 1)))

    (p0, r), (p1, r_prime) = found
    return StageWitness(a, n, j, (p0, p1), r, r_prime, system.norms(n)[j], weighted_norm(a))


@dataclass
class ZeroPointWitness:
    """``epsilon_last`` followed by a run of small symbols, the second preimage of the zero point."""
    stage: int
    epsilon_last: Symbol
    position: int
    run_length: int
    run_sup: Real

    def to_dict(self) -> Dict[str, object]:
        return {
            "stage": self.stage,
            "epsilon_last": str(self.epsilon_last),
            "position": self.position,
            "run_length": self.run_length,
            "run_sup": str(self.run_sup),
        }


def zero_point_witness(system: NonInvertibleSystem, n: int) -> ZeroPointWitness:
    """The start of ``y_n``: the last seed letter, then the head of ``tau_{0...0}(x_n)``."""
    record = system.records[n]
    if record.astronomical:
        raise BudgetExceededError(f"stage {n} is astronomical")
    assert record.depth is not None
    start = record.word_start(0, 0)
    epsilon = system.symbol_at(start - 1)
    run = [system.symbol_at(p) for p in range(start, start + record.depth)]
    return ZeroPointWitness(n, epsilon, start - 1, record.depth, max(run))  # type: ignore[type-var]


# ---------------------------------------------------------------------------
# Cylinder frequencies
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    low: Fraction
    high: Fraction
    low_closed: bool = True
    high_closed: bool = False

    def __contains__(self, value: object) -> bool:
        v = value  # type: ignore[assignment]
        above = v >= self.low if self.low_closed else v > self.low  # type: ignore[operator]
        below = v <= self.high if self.high_closed else v < self.high  # type: ignore[operator]
        return bool(above and below)

    def __str__(self) -> str:
        left = "[" if self.low_closed else "("
        right = "]" if self.high_closed else ")"
        return f"{left}{self.low},{self.high}{right}"

    @classmethod
    def parse(cls, text: str) -> 'Interval':
        text = text.strip()
        if len(text) < 5 or text[0] not in "[(" or text[-1] not in "])" or "," not in text:
            raise ParameterError(f"malformed interval {text!r}")
        low_text, high_text = text[1:-1].split(",", 1)
        try:
            low, high = Fraction(low_text.strip()), Fraction(high_text.strip())
        except (ValueError, ZeroDivisionError):
            raise ParameterError(f"malformed interval {text!r}")
        if not 0 <= low <= high <= 1:
            raise ParameterError(f"interval {text!r} must lie inside [0, 1]")
        return cls(low, high, text[0] == "[", text[-1] == "]")


@dataclass(frozen=True)
class CylinderSet:
    """``[U]`` for a box ``U`` in the first ``k`` coordinates."""
    intervals: Tuple[Interval, ...]

    @property
    def k(self) -> int:
        return len(self.intervals)

    @classmethod
    def parse(cls, text: str) -> 'CylinderSet':
        """``"[3/4,1]"`` or ``"(1/2,1] x [0,1/4)"``."""
        parts = [p for p in text.replace("×", "x").split(" x ") if p.strip()]
        if not parts:
            raise ParameterError("cylinder needs at least one interval")
        return cls(tuple(Interval.parse(p) for p in parts))

    def __str__(self) -> str:
        return " x ".join(str(i) for i in self.intervals)

    def contains(self, word: Sequence[Symbol]) -> bool:
        if len(word) < self.k:
            raise InsufficientDataError(f"cylinder of dimension {self.k} needs {self.k} coordinates")
        return all(word[i] in interval for i, interval in enumerate(self.intervals))

    def hits(self, word: Sequence[Symbol], count: int) -> List[bool]:
        """Membership of ``sigma^i word`` for ``i < count``."""
        if len(word) < count + self.k - 1:
            raise InsufficientDataError(f"{count} windows need {count + self.k - 1} symbols")
        return [all(word[i + d] in interval for d, interval in enumerate(self.intervals))
                for i in range(count)]

    def count_in(self, word: Sequence[Symbol]) -> int:
        """``I(word)``: windows lying inside ``word`` that belong to ``[U]``."""
        windows = len(word) - self.k + 1
        return sum(self.hits(word, windows)) if windows > 0 else 0


@dataclass
class RatioCheck:
    s: int
    p_s: Fraction
    p_next: Fraction
    alpha: Optional[Fraction]
    beta: Optional[Fraction]
    skipped: Optional[str] = None

    @property
    def ratio(self) -> Optional[Fraction]:
        return self.p_next / self.p_s if self.p_s else None

    @property
    def holds(self) -> Optional[bool]:
        if self.skipped or self.alpha is None or self.beta is None or self.ratio is None:
            return None
        return self.alpha <= self.ratio <= self.beta

    def to_dict(self) -> Dict[str, object]:
        return {
            "s": self.s,
            "p_s": str(self.p_s),
            "p_next": str(self.p_next),
            "ratio": None if self.ratio is None else str(self.ratio),
            "alpha": None if self.alpha is None else str(self.alpha),
            "beta": None if self.beta is None else str(self.beta),
            "holds": self.holds,
            "skipped": self.skipped,
        }


@dataclass
class FrequencyReport:
    cylinder: str
    series: List[Tuple[int, int, Fraction]]
    ratios: List[RatioCheck] = field(default_factory=list)

    def frequency(self, m: int) -> Fraction:
        for checkpoint, _, p in self.series:
            if checkpoint == m:
                return p
        raise InsufficientDataError(f"no checkpoint at {m}")

    def to_dict(self) -> Dict[str, object]:
        return {
            "cylinder": self.cylinder,
            "series": [{"m": m, "hits": hits, "p": str(p)} for m, hits, p in self.series],
            "ratios": [check.to_dict() for check in self.ratios],
        }


def ratio_bounds(record: StageRecord, k: int, occurrences_in_stage: int) -> Tuple[Fraction, Fraction]:
    """``(alpha_s, beta_s)`` from a stage record and ``I(x_s)``."""
    assert record.len_y is not None and record.multiplicity is not None
    i_count = Fraction(occurrences_in_stage)
    growth = 1 + Fraction(record.len_y, record.multiplicity * record.length)
    alpha = 1 / ((1 + k / i_count) * growth)
    beta = (1 + k / i_count + Fraction(record.len_y + k, record.multiplicity * occurrences_in_stage)) / growth
    return alpha, beta


def cylinder_frequency(stream: SymbolStream, cylinder: CylinderSet, checkpoints: Sequence[int],
                       records: Sequence[StageRecord] = (), name: Optional[str] = None,
                       stream_budget: int = 10 ** 7) -> FrequencyReport:
    """``p(m) = (1/m) #{0 <= i < m : sigma^i x in [U]}`` at each checkpoint.

    Stage lengths ``L_s`` from ``records`` are added as checkpoints and the
    ratio ``p(L_{s+1}) / p(L_s)`` is compared with ``alpha_s`` and ``beta_s``
    using the records' ``I`` counter for ``name``. Records whose ``L_{s+1}``
    lies past ``stream_budget`` are left out.
    """
    key = name or str(cylinder)
    marks = set(checkpoints)
    usable = []
    for record in records:
        if record.next_length is None:
            continue
        if record.next_length + cylinder.k - 1 > stream_budget:
            logger.info("Ratio check at stage %d skipped: L_%d = %d exceeds the stream budget %d",
                        record.n, record.n + 1, record.next_length, stream_budget)
            continue
        usable.append(record)
    for record in usable:
        marks.update((record.length, record.next_length))  # type: ignore[arg-type]
    marks.discard(0)
    if not marks:
        raise ParameterError("no checkpoints given")
    top = max(marks)
    prefix = stream.prefix(top + cylinder.k - 1)
    flags = cylinder.hits(prefix, top)

    series = []
    running = 0
    ordered = sorted(marks)
    cursor = 0
    for i, flag in enumerate(flags, start=1):
        running += flag
        while cursor < len(ordered) and ordered[cursor] == i:
            series.append((i, running, Fraction(running, i)))
            cursor += 1

    report = FrequencyReport(str(cylinder), series)
    for record in usable:
        p_s = report.frequency(record.length)
        p_next = report.frequency(record.next_length)  # type: ignore[arg-type]
        count = record.i_counts.get(key)
        if count is None:
            report.ratios.append(RatioCheck(record.n, p_s, p_next, None, None, "no I(x_s) counter"))
            continue
        if count == 0:
            logger.info("Ratio check at stage %d skipped: I(x_s) = 0", record.n)
            report.ratios.append(RatioCheck(record.n, p_s, p_next, None, None, "I(x_s) = 0"))
            continue
        alpha, beta = ratio_bounds(record, cylinder.k, count)
        report.ratios.append(RatioCheck(record.n, p_s, p_next, alpha, beta))
    return report
