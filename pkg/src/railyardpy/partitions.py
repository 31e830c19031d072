"""Integer partitions: storage, conjugation, interlacing and enumeration.

Partitions are immutable tuples of positive parts in weakly decreasing order.
Trailing zeros are dropped on construction, so ``Partition([2, 0, 0])`` and
``Partition([2])`` compare equal.

"""
from functools import lru_cache

from railyardpy.exceptions import CellOutsideDiagram

_KINDS = ("row", "column")


class Partition(tuple):
    """
    Weakly decreasing sequence of positive integers.

    """

    def __new__(cls, parts=()):
        parts = [int(p) for p in parts]
        while parts and parts[-1] == 0:
            parts.pop()
        for a, b in zip(parts, parts[1:]):
            if a < b:
                raise ValueError("parts must be weakly decreasing, got {}".format(parts))
        if parts and parts[-1] < 0:
            raise ValueError("parts must be nonnegative, got {}".format(parts))
        return super().__new__(cls, parts)

    def __repr__(self):
        return "Partition({})".format(list(self))

    @classmethod
    def from_json(cls, data):
        """
        Build a partition from a JSON array such as ``[3, 1, 1]``.

        """
        if not isinstance(data, (list, tuple)):
            raise ValueError("a partition is a JSON array, got {!r}".format(data))
        return cls(data)

    def to_list(self):
        return list(self)

    @property
    def size(self):
        return sum(self)

    @property
    def length(self):
        return len(self)

    def part(self, i):
        """
        ``λ_i`` with 1-based ``i``; zero beyond the length.

        """
        return self[i - 1] if 1 <= i <= len(self) else 0

    def conjugate(self):
        return conjugate(self)

    def cells(self):
        """
        Cells ``(row, col)`` of the Young diagram, 1-based, row by row.

        """
        return [(i + 1, j + 1) for i, p in enumerate(self) for j in range(p)]

    def contains(self, other):
        return len(other) <= len(self) and all(
            a >= b for a, b in zip(self, other)
        )

    def is_even(self):
        """
        True when every part is even.

        """
        return all(p % 2 == 0 for p in self)


EMPTY = Partition()


@lru_cache(maxsize=None)
def conjugate(lam):
    """
    Conjugate (transposed) partition.

    Parameters
    ----------
    lam : ~railyardpy.partitions.Partition

    Returns
    -------
    ~railyardpy.partitions.Partition
        ``λ'_i = |{j : λ_j >= i}|``.

    """
    lam = Partition(lam)
    if not lam:
        return EMPTY
    return Partition([sum(1 for p in lam if p >= i) for i in range(1, lam[0] + 1)])


def _row_interlaces(mu, lam):
    # λ_1 >= μ_1 >= λ_2 >= μ_2 >= ...
    n = max(len(lam), len(mu) + 1)
    for i in range(1, n + 1):
        if lam.part(i) < mu.part(i):
            return False
        if mu.part(i) < lam.part(i + 1):
            return False
    return True


def interlaces(mu, lam, kind="row"):
    """
    Interlacing test ``μ ≺ λ`` (row) or ``μ ≺' λ`` (column).

    Parameters
    ----------
    mu, lam : ~railyardpy.partitions.Partition
    kind : str
        ``"row"`` for a horizontal strip ``λ/μ``, ``"column"`` for a
        vertical strip.

    Returns
    -------
    bool

    Raises
    ------
    ValueError : If kind is not 'row' or 'column'.

    """
    mu, lam = Partition(mu), Partition(lam)
    if kind == "row":
        return _row_interlaces(mu, lam)
    elif kind == "column":
        return _row_interlaces(conjugate(mu), conjugate(lam))
    raise ValueError("kind should be either 'row' or 'column', got {!r}".format(kind))


def horizontal_strip(lam, mu):
    """True if ``λ/μ`` is a horizontal strip."""
    return interlaces(mu, lam, "row")


def vertical_strip(lam, mu):
    """True if ``λ/μ`` is a vertical strip."""
    return interlaces(mu, lam, "column")


def arm_leg(lam, cell):
    """
    Arm and leg lengths of a cell.

    Parameters
    ----------
    lam : ~railyardpy.partitions.Partition
    cell : tuple
        ``(row, col)``, 1-based.

    Returns
    -------
    tuple
        ``(arm, leg)`` with ``arm = λ_row - col`` and ``leg = λ'_col - row``.

    Raises
    ------
    CellOutsideDiagram : If the cell is not in the diagram of ``lam``.

    """
    lam = Partition(lam)
    i, j = cell
    if i < 1 or j < 1 or j > lam.part(i):
        raise CellOutsideDiagram("cell {} is outside {}".format(cell, lam))
    return lam.part(i) - j, conjugate(lam).part(j) - i


def _partitions_of(n, max_length, max_part):
    # Largest first part first, so each size comes out in decreasing lex order.
    if n == 0:
        yield ()
        return
    if max_length == 0:
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions_of(n - first, max_length - 1, first):
            yield (first,) + rest


def enumerate_partitions(max_size, max_length=None, max_part=None):
    """
    All partitions inside the given bounds, graded by size.

    Within one size the order is decreasing lexicographic, so ``(2)`` comes
    before ``(1, 1)``.

    Parameters
    ----------
    max_size : int
    max_length : int or None
        Bound on the number of parts; ``None`` for no bound.
    max_part : int or None
        Bound on the largest part; ``None`` for no bound.

    Returns
    -------
    list
        List of :class:`Partition`.

    """
    if max_size < 0:
        raise ValueError("max_size must be nonnegative, got {}".format(max_size))
    max_length = max_size if max_length is None else max_length
    max_part = max_size if max_part is None else max_part
    if max_length < 0 or max_part < 0:
        raise ValueError("bounds must be nonnegative")
    out = []
    for n in range(max_size + 1):
        out.extend(Partition(p) for p in _partitions_of(n, max_length, max_part))
    return out


def partitions_of(n, max_length=None, max_part=None):
    """Partitions of exactly ``n`` in decreasing lexicographic order."""
    max_length = n if max_length is None else max_length
    max_part = n if max_part is None else max_part
    return [Partition(p) for p in _partitions_of(n, max_length, max_part)]


def maya_diagram(lam, offset=0):
    """
    Particle positions ``λ_i - i + offset`` of the first ``ℓ(λ) + 1`` rows.

    Rows beyond the length continue the particle sea ``-i + offset``.

    """
    lam = Partition(lam)
    return [lam.part(i) - i + offset for i in range(1, len(lam) + 2)]


def durfee_size(lam):
    """Side of the largest square fitting in the diagram."""
    lam = Partition(lam)
    return sum(1 for i, p in enumerate(lam, start=1) if p >= i)


def _row_strips(mu, up, max_size, max_length, max_part, max_strip):
    # ranges for each part of the new partition
    if up:
        n = min(len(mu) + 1, max_length)
        ranges = []
        for i in range(1, n + 1):
            hi = max_part if i == 1 else mu.part(i - 1)
            ranges.append((mu.part(i), min(hi, max_part)))
        if len(mu) > max_length:
            return
        budget = min(max_size - mu.size, max_strip)
    else:
        ranges = [(mu.part(i + 1), mu.part(i)) for i in range(1, len(mu) + 1)]
        budget = max_strip
        if mu.size - max_strip > max_size:
            return
    if budget < 0:
        return

    def rec(i, room):
        if i == len(ranges):
            yield ()
            return
        lo, hi = ranges[i]
        if up:
            values = range(lo, min(hi, lo + room) + 1)
        else:
            values = range(max(lo, hi - room), hi + 1)
        for v in values:
            for rest in rec(i + 1, room - (v - lo if up else hi - v)):
                yield (v,) + rest

    for parts in rec(0, budget):
        lam = Partition(parts)
        if lam.size <= max_size:
            yield lam


def strip_neighbors(
    mu, kind="row", up=True, max_size=None, max_length=None, max_part=None, max_strip=None
):
    """
    Partitions differing from ``μ`` by a horizontal (row) or vertical (column) strip.

    Parameters
    ----------
    mu : ~railyardpy.partitions.Partition
    kind : str
        ``"row"`` or ``"column"``.
    up : bool
        ``True`` for ``λ`` with ``μ ≺ λ`` (``μ ≺' λ``), ``False`` for ``λ ≺ μ``.
    max_size, max_length, max_part : int or None
        Caps on the neighbours; ``None`` leaves the direction uncapped
        (``max_part`` and ``max_length`` must then be finite for ``up``).
    max_strip : int or None
        Cap on the number of boxes in the strip.

    Returns
    -------
    list
        Neighbours in the order of generation, ``μ`` itself included.

    """
    mu = Partition(mu)
    if kind not in _KINDS:
        raise ValueError("kind should be either 'row' or 'column', got {!r}".format(kind))
    inf = float("inf")
    if up and kind == "row" and max_part is None and max_size is None:
        raise ValueError("an upward row strip needs max_part or max_size")
    if up and kind == "column" and max_length is None and max_size is None:
        raise ValueError("an upward column strip needs max_length or max_size")
    if max_size is None:
        max_size = mu.size + (0 if not up else (max_part if kind == "row" else max_length))
    max_strip = inf if max_strip is None else max_strip
    if kind == "row":
        return list(
            _row_strips(
                mu,
                up,
                max_size,
                inf if max_length is None else max_length,
                max_size if max_part is None else max_part,
                max_strip,
            )
        )
    conj = _row_strips(
        conjugate(mu),
        up,
        max_size,
        inf if max_part is None else max_part,
        max_size if max_length is None else max_length,
        max_strip,
    )
    return [conjugate(lam) for lam in conj]
