"""
Entropy calculus for partitions of a finite weighted sample: Shannon and
conditional entropy, the Rohlin metric ``d(P,Q) = H(P|Q) + H(Q|P)`` and
truncation ``P^(n)``.
"""

import csv
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, Hashable, List, Sequence, Tuple, Union

import numpy as np

from ..core.exceptions import ParameterError, SampleMismatchError

logger = logging.getLogger(__name__)

Mass = Union[Fraction, float]
MASS_TOLERANCE = 1e-12
TAIL_ATOM = "tail"


def _atom_key(atom: Hashable) -> Tuple[int, object, str]:
    if isinstance(atom, int) and not isinstance(atom, bool):
        return (0, atom, "")
    return (1, 0, str(atom))


@dataclass(frozen=True)
class WeightedSample:
    """Finitely many points carrying non-negative masses that sum to 1."""
    points: Tuple[Hashable, ...]
    masses: Tuple[Mass, ...]

    def __post_init__(self) -> None:
        if len(self.points) != len(self.masses):
            raise ParameterError("every sample point needs exactly one mass")
        if len(set(self.points)) != len(self.points):
            raise ParameterError("sample points must be distinct")
        if any(m < 0 for m in self.masses):
            raise ParameterError("masses must be non-negative")
        if self.exact:
            if sum(self.masses, Fraction(0)) != 1:
                raise ParameterError(f"masses sum to {sum(self.masses, Fraction(0))}, not 1")
        elif abs(math.fsum(float(m) for m in self.masses) - 1.0) > MASS_TOLERANCE:
            raise ParameterError("masses do not sum to 1 within 1e-12")

    @property
    def exact(self) -> bool:
        return all(isinstance(m, Fraction) for m in self.masses)

    @property
    def size(self) -> int:
        return len(self.points)

    @classmethod
    def uniform(cls, size: int) -> 'WeightedSample':
        if size < 1:
            raise ParameterError("a sample needs at least one point")
        return cls(tuple(range(size)), tuple(Fraction(1, size) for _ in range(size)))

    @classmethod
    def geometric(cls, size: int) -> 'WeightedSample':
        """Masses ``2^-1, 2^-2, ..., 2^-(size-1)`` and a last point closing the total at 1."""
        if size < 2:
            raise ParameterError("geometric sample needs at least two points")
        masses = [Fraction(1, 2 ** k) for k in range(1, size)]
        masses.append(Fraction(1, 2 ** (size - 1)))
        return cls(tuple(range(size)), tuple(masses))


class Partition:
    """Atom label per sample point; atoms are ordered by their labels."""

    def __init__(self, sample: WeightedSample, labels: Sequence[Hashable]):
        if len(labels) != sample.size:
            raise ParameterError(f"partition labels {len(labels)} points, sample has {sample.size}")
        self.sample = sample
        self.labels = tuple(labels)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Partition) and self.sample == other.sample and self.labels == other.labels

    def __hash__(self) -> int:
        return hash((self.sample, self.labels))

    def __repr__(self) -> str:
        return f"Partition({len(self.atoms)} atoms)"

    @property
    def atoms(self) -> List[Hashable]:
        return sorted(set(self.labels), key=_atom_key)

    def atom_masses(self) -> Dict[Hashable, Mass]:
        masses: Dict[Hashable, Mass] = {}
        for label, mass in zip(self.labels, self.sample.masses):
            masses[label] = masses.get(label, 0) + mass
        return {atom: masses[atom] for atom in self.atoms}

    def mass_vector(self) -> np.ndarray:
        return np.array([float(m) for m in self.atom_masses().values()], dtype=float)

    @classmethod
    def trivial(cls, sample: WeightedSample) -> 'Partition':
        return cls(sample, [0] * sample.size)

    @classmethod
    def discrete(cls, sample: WeightedSample) -> 'Partition':
        return cls(sample, list(range(sample.size)))


def _require_same_sample(p: Partition, q: Partition) -> None:
    if p.sample != q.sample:
        raise SampleMismatchError("partitions live on different samples")


def shannon_entropy(p: Partition) -> float:
    """``-sum mu(P_i) log mu(P_i)`` with ``0 log 0 = 0``."""
    masses = p.mass_vector()
    masses = masses[masses > 0]
    terms = np.sort(-masses * np.log(masses))
    return max(math.fsum(terms.tolist()), 0.0)


def join(p: Partition, q: Partition) -> Partition:
    """Common refinement ``P v Q``; atoms are label pairs."""
    _require_same_sample(p, q)
    codes = {pair: i for i, pair in enumerate(sorted(set(zip(p.labels, q.labels)),
                                                     key=lambda pq: (_atom_key(pq[0]), _atom_key(pq[1]))))}
    return Partition(p.sample, [codes[pair] for pair in zip(p.labels, q.labels)])


def conditional_entropy(p: Partition, q: Partition) -> float:
    """``H(P|Q) = H(P v Q) - H(Q)``."""
    _require_same_sample(p, q)
    return max(shannon_entropy(join(p, q)) - shannon_entropy(q), 0.0)


def mutual_information(p: Partition, q: Partition) -> float:
    return max(shannon_entropy(p) - conditional_entropy(p, q), 0.0)


def rohlin_distance(p: Partition, q: Partition) -> float:
    """``d(P,Q) = H(P|Q) + H(Q|P) = 2 H(P v Q) - H(P) - H(Q)``."""
    _require_same_sample(p, q)
    joined = shannon_entropy(join(p, q))
    return max(2 * joined - shannon_entropy(p) - shannon_entropy(q), 0.0)


def truncate(p: Partition, n: int) -> Partition:
    """``P^(n) = (P_1, ..., P_n, union of the rest)``."""
    if n < 1:
        raise ParameterError(f"truncation needs n >= 1, got {n}")
    atoms = p.atoms
    if len(atoms) <= n:
        return p
    kept = set(atoms[:n])
    return Partition(p.sample, [label if label in kept else TAIL_ATOM for label in p.labels])


def equivalent(p: Partition, q: Partition) -> bool:
    """Same atoms once zero-mass points are ignored."""
    _require_same_sample(p, q)
    pairs = [(a, b) for a, b, m in zip(p.labels, q.labels, p.sample.masses) if m > 0]
    forward: Dict[Hashable, Hashable] = {}
    backward: Dict[Hashable, Hashable] = {}
    for a, b in pairs:
        if forward.setdefault(a, b) != b or backward.setdefault(b, a) != a:
            return False
    return True


@dataclass
class PartitionSummary:
    h_p: float
    h_q: float
    h_p_given_q: float
    h_q_given_p: float
    distance: float
    mutual_information: float

    def to_dict(self) -> Dict[str, float]:
        return {
            "H(P)": self.h_p,
            "H(Q)": self.h_q,
            "H(P|Q)": self.h_p_given_q,
            "H(Q|P)": self.h_q_given_p,
            "d(P,Q)": self.distance,
            "I(P;Q)": self.mutual_information,
        }


def summarize(p: Partition, q: Partition) -> PartitionSummary:
    return PartitionSummary(
        shannon_entropy(p), shannon_entropy(q),
        conditional_entropy(p, q), conditional_entropy(q, p),
        rohlin_distance(p, q), mutual_information(p, q),
    )


def _parse_mass(token: str) -> Mass:
    token = token.strip()
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParameterError(f"malformed mass {token!r}")


def _parse_atom(token: str) -> Hashable:
    token = token.strip()
    return int(token) if token.lstrip("-").isdigit() else token


def load_partitions(path: Union[str, Path]) -> Tuple[Partition, Partition]:
    """Read ``point,mass,atomP,atomQ`` rows; a header row and ``#`` lines are skipped."""
    points: List[str] = []
    masses: List[Mass] = []
    p_labels: List[Hashable] = []
    q_labels: List[Hashable] = []
    with open(path, newline="", encoding="utf-8") as f:
        for row in csv.reader(f):
            if not row or row[0].lstrip().startswith("#"):
                continue
            if len(row) != 4:
                raise ParameterError(f"partition rows need 4 columns, got {len(row)}")
            if not points and row[0].strip().lower() == "point":
                continue
            points.append(row[0].strip())
            masses.append(_parse_mass(row[1]))
            p_labels.append(_parse_atom(row[2]))
            q_labels.append(_parse_atom(row[3]))
    sample = WeightedSample(tuple(points), tuple(masses))
    logger.debug("Loaded %d sample points from %s", sample.size, path)
    return Partition(sample, p_labels), Partition(sample, q_labels)
