"""Streaming detection of chain, weak, strong and marginal records.

Marks are points of the unit cube compared by the componentwise partial
order: ``x`` beats ``y`` when the two points differ and every coordinate
of ``x`` is at or below the matching coordinate of ``y``.  A chain record
beats the most recent chain record, a weak record is beaten by no earlier
mark (it is Pareto-minimal in the history), a strong record beats every
earlier mark, and a marginal record is a classical strict lower record in
one fixed coordinate.  Index 1 is a record of every kind.

The detector is streaming: it keeps the last chain-record value, the
current Pareto-minimal front and the running coordinate minima, never the
full history.  Exact duplicates of an earlier minimal point are records of
no kind (ties have probability zero under any continuous law, but the
detector must stay deterministic on arbitrary input).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Point = Sequence[float]


def dominates(x: Point, y: Point) -> bool:
    """True when ``x`` beats ``y``: the points differ and x[i] <= y[i] for all i."""
    if len(x) != len(y):
        raise ValueError(f"dimension mismatch: {len(x)} vs {len(y)}")
    strict = False
    for a, b in zip(x, y):
        if a > b:
            return False
        if a < b:
            strict = True
    return strict


def _weakly_below(x: Point, y: Point) -> bool:
    # componentwise <=, equality allowed
    return all(a <= b for a, b in zip(x, y))


def height(x: Point) -> float:
    """Product of the coordinates: the volume of the lower section at ``x``."""
    return math.prod(x)


def log_transform(marks: Iterable[Point]) -> list[tuple[float, ...]]:
    """Map every mark to its componentwise negative logarithm.

    Lower chain records of the input correspond exactly to upper chain
    records of the image (pass ``upper=True`` to
    :func:`chain_record_indices`), which gives an independent route for
    cross-checking the detector.  Raises on nonpositive coordinates.
    """
    out = []
    for i, m in enumerate(marks, 1):
        if any(c <= 0.0 for c in m):
            raise ValueError(f"mark {i}: nonpositive coordinate, log transform undefined")
        out.append(tuple(-math.log(c) for c in m))
    return out


@dataclass(frozen=True)
class RecordFlags:
    """Record classification of a single mark; ``index`` is 1-based."""

    index: int
    chain: bool
    weak: bool
    strong: bool
    marginal: tuple[bool, ...]

    @property
    def marginal_any(self) -> bool:
        return any(self.marginal)

    @property
    def marginal_mask(self) -> str:
        """Per-coordinate marginal flags as a 0/1 string (e.g. ``"10"``)."""
        return "".join("1" if m else "0" for m in self.marginal)


@dataclass
class RecordCounts:
    """Running totals per record type; marginal counts are per coordinate."""

    chain: int = 0
    weak: int = 0
    strong: int = 0
    marginal: list[int] = field(default_factory=list)


class RecordDetector:
    """Single-pass detector for all four record types.

    Memory is constant except for the Pareto front, whose expected size is
    ~(log n)^(d-1)/(d-1)!; front maintenance is a linear scan per mark.
    Instances are mutable stream state and not thread-safe; use one
    detector per stream.
    """

    def __init__(self, dim: int):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        self.dim = dim
        self.index = 0
        self.counts = RecordCounts(marginal=[0] * dim)
        self._last_chain: tuple[float, ...] | None = None
        self._front: list[tuple[float, ...]] = []
        self._mins = [math.inf] * dim

    @property
    def last_chain_record(self) -> tuple[float, ...] | None:
        return self._last_chain

    @property
    def pareto_front(self) -> tuple[tuple[float, ...], ...]:
        """Current minimal elements of the processed history, insertion order."""
        return tuple(self._front)

    @property
    def component_mins(self) -> tuple[float, ...]:
        return tuple(self._mins)

    def process(self, mark: Point) -> RecordFlags:
        """Classify the next mark and update the stream state."""
        if len(mark) != self.dim:
            raise ValueError(
                f"dimension mismatch at index {self.index + 1}: "
                f"got {len(mark)}, expected {self.dim}"
            )
        x = tuple(float(c) for c in mark)
        self.index += 1
        first = self.index == 1

        chain = first or dominates(x, self._last_chain)
        # Some earlier mark beats x iff some current minimal element does
        # (transitivity); equality with a front point also blocks, so exact
        # duplicates are records of no kind.
        weak = first or not any(_weakly_below(f, x) for f in self._front)
        strong = first or all(c < m for c, m in zip(x, self._mins))
        marginal = tuple(first or c < m for c, m in zip(x, self._mins))

        if chain:
            self._last_chain = x
            self.counts.chain += 1
        if weak:
            self._front = [f for f in self._front if not _weakly_below(x, f)]
            self._front.append(x)
            self.counts.weak += 1
        if strong:
            self.counts.strong += 1
        for i, flag in enumerate(marginal):
            if flag:
                self.counts.marginal[i] += 1
            if x[i] < self._mins[i]:
                self._mins[i] = x[i]
        return RecordFlags(self.index, chain, weak, strong, marginal)


def classify_sequence(marks: Iterable[Point]) -> list[RecordFlags]:
    """Classify a whole finite sequence; a pure function of the input.

    Raises on an empty sequence or inhomogeneous dimensions.
    """
    marks = list(marks)
    if not marks:
        raise ValueError("empty sequence")
    detector = RecordDetector(len(marks[0]))
    return [detector.process(m) for m in marks]


def chain_record_indices(points: Iterable[Point], upper: bool = False) -> list[int]:
    """1-based chain-record indices of a raw point sequence.

    With ``upper=True`` the reversed order is used (a point beats the
    current record when every coordinate is at or above it); this is the
    order under which :func:`log_transform` images must reproduce the
    lower chain records of the original marks.
    """
    out: list[int] = []
    rec: tuple[float, ...] | None = None
    for i, p in enumerate(points, 1):
        q = tuple(p)
        if rec is None or (dominates(rec, q) if upper else dominates(q, rec)):
            rec = q
            out.append(i)
    return out
