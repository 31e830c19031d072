"""Particle-hole encoding, height functions and the (q, t)-charge.

Row ``j`` of an odd column holds the vertex at height ``j + 1/2``. A vertex
is a particle when it is matched to its left and a hole when it is matched
to its right; ``λ`` puts its particles at ``λ_i - i``, so every row below
``-ℓ(λ)`` is a particle and every row from ``λ_1`` up is a hole.

"""
import csv
import io
import logging
import math

import numpy as np

from railyardpy.exceptions import ColumnOutOfRange
from railyardpy.partitions import Partition

logger = logging.getLogger(__name__)

_BASELINES = ("reference", "empty")


def particles(lam):
    """Rows ``λ_i - i`` of the first ``ℓ(λ)`` particles."""
    lam = Partition(lam)
    return {p - i for i, p in enumerate(lam, start=1)}


def is_particle(lam, j, _cache=None):
    lam = Partition(lam)
    if j < -len(lam):
        return True
    return j in (particles(lam) if _cache is None else _cache)


def _window(*lams):
    lo = -max(len(lam) for lam in lams) - 2
    hi = max(lam.part(1) for lam in lams) + 2
    return lo, hi


def _column_rows(a, b, lam, nxt, lo, hi):
    # (Lh, Rh, D) indicators of the even vertex on each row of [lo, hi)
    p1, p2 = particles(lam), particles(nxt)
    n1 = [is_particle(lam, j, p1) for j in range(lo, hi)]
    n2 = [is_particle(nxt, j, p2) for j in range(lo, hi)]
    diag = [0] * (hi - lo)
    run = 0
    for k in range(hi - lo):
        run += n1[k] - n2[k]
        if b == "+":
            diag[k] = run
        elif k + 1 < hi - lo:
            diag[k + 1] = -run
    if any(d not in (0, 1) for d in diag):
        raise ValueError("{} and {} do not interlace as ({}, {})".format(lam, nxt, a, b))
    rows = []
    for k in range(hi - lo):
        if a == "L":
            rh = int(n2[k])
            lh = 1 - rh - diag[k]
        else:
            lh = 1 - int(n1[k])
            rh = 1 - lh - diag[k]
        rows.append((lh, rh, diag[k]))
    return rows


def _column_data(spec, s, m):
    if not spec.l <= m <= spec.r:
        raise ColumnOutOfRange("column {} outside [{}, {}]".format(m, spec.l, spec.r))
    a, b, _ = spec.column(m)
    lam, nxt = s.at(spec, m), s.at(spec, m + 1)
    lo, hi = _window(lam, nxt)
    return a, b, lo, _column_rows(a, b, lam, nxt, lo, hi)


def diagonal_edges(spec, s, m):
    """
    Rows of the even vertices at abscissa ``2m`` that carry a present diagonal edge.

    Parameters
    ----------
    spec : ~railyardpy.railyard.spec.RailYardSpec
    s : ~railyardpy.railyard.spec.DimerState
    m : int
        Column index in ``[l, r]``.

    Returns
    -------
    list
        Sorted rows ``j``; the vertex sits at height ``j + 1/2``.

    """
    _, _, lo, rows = _column_data(spec, s, m)
    return [lo + k for k, (_, _, d) in enumerate(rows) if d]


def _crossing(b, j):
    # height at which the diagonal of even row j crosses x = 2m ± 1/2
    return j + 1 if b == "+" else j


def parse_column(x):
    """
    Split a half-integer abscissa into ``(m, side)``.

    ``side`` is ``"odd"`` for ``x = 2m - 1/2`` and ``"even"`` for
    ``x = 2m + 1/2``, naming the parity of the vertices on the left.

    """
    x2 = 2 * x
    if x2 != int(x2) or int(x2) % 2 == 0:
        raise ColumnOutOfRange("{} is not a half-integer abscissa".format(x))
    x2 = int(x2)
    if (x2 + 1) % 4 == 0:
        return (x2 + 1) // 4, "odd"
    return (x2 - 1) // 4, "even"


class HeightProfile:
    """
    Step function ``y ↦ h_M(x, y)`` on a vertical line ``x = 2m ± 1/2``.

    Stored as the finitely many jumps inside a window; above the window the
    height rises by 2 at every row, below it the height is zero.

    """

    def __init__(self, column, jumps, top, baseline="reference"):
        if baseline not in _BASELINES:
            raise ValueError("baseline must be one of {}, got {!r}".format(_BASELINES, baseline))
        self.column = column
        self.jumps = sorted(jumps)
        self.top = top
        self.baseline = baseline

    def __repr__(self):
        return "HeightProfile(column={}, jumps={}, baseline={!r})".format(
            self.column, len(self.jumps), self.baseline
        )

    @staticmethod
    def _rows_below(start, y):
        # rows j >= start with j + 1/2 < y
        return max(0, math.ceil(y - 0.5) - start)

    def __call__(self, y):
        h = sum(d for height, d in self.jumps if height < y)
        h += 2 * self._rows_below(self.top, y)
        if self.baseline == "empty":
            h -= 2 * self._rows_below(0, y)
        return h

    def sample(self, y_window, step=0.25):
        """
        Values on a grid of ``y_window`` offset from every jump height.

        Returns
        -------
        tuple
            ``(y, h)`` as numpy arrays.

        """
        lo, hi = y_window
        if hi <= lo:
            raise ValueError("empty window {}".format(y_window))
        ys = np.arange(math.floor(lo), math.ceil(hi), step) + step / 2
        ys = ys[(ys >= lo) & (ys <= hi)]
        return ys, np.array([self(y) for y in ys])

    def to_csv(self, y_window, stream=None):
        """
        Write ``y,h`` rows; returns the text when ``stream`` is ``None``.

        """
        out = io.StringIO() if stream is None else stream
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["y", "h"])
        for y, h in zip(*self.sample(y_window)):
            writer.writerow(["{:.6g}".format(y), int(h)])
        if stream is None:
            return out.getvalue()


def height_profile(spec, s, column, baseline="reference"):
    """
    Height function on the vertical line ``x = column``.

    On ``x = 2m - 1/2`` the height is twice the number of present horizontal
    and diagonal edges crossed below ``y``; on ``x = 2m + 1/2`` it is twice
    the absent horizontal edges minus the present diagonal edges crossed below
    ``y``. Both are normalized against the configuration with every odd
    vertex matched to its left.

    Parameters
    ----------
    spec : ~railyardpy.railyard.spec.RailYardSpec
    s : ~railyardpy.railyard.spec.DimerState
    column : float or Fraction
        Half-integer abscissa ``2m ± 1/2`` with ``m`` in ``[l, r]``.
    baseline : str
        ``"reference"`` (default) or ``"empty"``, which subtracts the
        profile of the all-empty state.

    Returns
    -------
    ~railyardpy.railyard.height.HeightProfile

    Raises
    ------
    ColumnOutOfRange
        For a non half-integer abscissa or ``m`` outside ``[l, r]``.

    """
    m, side = parse_column(column)
    a, b, lo, rows = _column_data(spec, s, m)
    jumps = []
    for k, (lh, rh, d) in enumerate(rows):
        j = lo + k
        if side == "odd":
            if lh:
                jumps.append((j + 0.5, 2))
            if d and a == "L":
                jumps.append((_crossing(b, j), 2))
        else:
            if not rh:
                jumps.append((j + 0.5, 2))
            if d and a == "R":
                jumps.append((_crossing(b, j), -2))
    return HeightProfile(column, jumps, lo + len(rows), baseline=baseline)


def _charge_at(lam, axis, r):
    # rows below -ℓ(λ) are particles too
    above = sum(1 for p in particles(lam) if p >= axis) + max(0, -len(lam) - axis)
    holes = sum(1 for j in range(-len(lam), axis) if not is_particle(lam, j))
    return above - r * holes


def _holes(lam):
    cache = particles(lam)
    j = -len(lam)
    while True:
        if j not in cache:
            yield j
        j += 1


def _least_axis(lam, r):
    # least n with the n-th highest particle below the ⌊n/r⌋-th lowest hole
    holes, found = [], _holes(lam)

    def hole(k):
        while len(holes) < k:
            holes.append(next(found))
        return holes[k - 1]

    n = 1
    while True:
        k = math.floor(n / r + 1e-12)
        particle = lam.part(n) - n
        if k >= 1 and particle < hole(k):
            break
        n += 1
    prev = math.floor((n - 1) / r + 1e-12)
    top = particle if prev < 1 else max(particle, hole(prev))
    return top + 1


def charge_axis(lam, r, translate=True):
    """
    Axis row and charge ``(#particles above) - r (#holes below)``.

    The untranslated axis sits between rows ``-1`` and ``0``. With
    ``translate`` the axis goes immediately above the higher of the ``n``-th
    highest particle and the ``⌊(n - 1)/r⌋``-th lowest hole, ``n`` the least
    index whose particle lies below the ``⌊n/r⌋``-th lowest hole; the charge
    then lies in ``[-1, r]``.

    Parameters
    ----------
    lam : ~railyardpy.partitions.Partition
    r : float
        ``log q / log t``, positive.

    Returns
    -------
    tuple
        ``(axis, charge)``: rows ``>= axis`` are above the axis.

    """
    lam = Partition(lam)
    if not translate:
        return 0, _charge_at(lam, 0, r)
    if not r > 0:
        raise ValueError("r must be positive, got {}".format(r))
    axis = _least_axis(lam, r)
    return axis, _charge_at(lam, axis, r)


def charge(spec, s, m, qt, translate=True):
    """
    (q, t)-charge of the particle-hole configuration on column ``2m - 1``.

    Parameters
    ----------
    spec : ~railyardpy.railyard.spec.RailYardSpec
    s : ~railyardpy.railyard.spec.DimerState
    m : int
        In ``[l, r + 1]``.
    qt : ~railyardpy.macdonald.params.QTParams
    translate : bool
        Move the axis so that ``-1 <= c <= log q / log t``.

    Returns
    -------
    float

    Raises
    ------
    ColumnOutOfRange

    """
    if not spec.l <= m <= spec.r + 1:
        raise ColumnOutOfRange("column {} outside [{}, {}]".format(m, spec.l, spec.r + 1))
    return charge_axis(s.at(spec, m), qt.log_ratio, translate=translate)[1]


class DeformedProfile:
    """
    Height on ``x = 2m - 1/2`` in the deformed vertical coordinate.

    Particles occupy unit intervals on which the height is constant; holes
    occupy intervals of length ``r = log q / log t`` across which the height
    rises linearly by 2. The axis of the translated charge sits at
    ``ỹ = 0``.

    Attributes
    ----------
    knots : numpy.ndarray
        ``(n, 2)`` array of ``(ỹ, h)`` corners, ``h = 0`` at the first knot.
    r : float
    c : float
        Charge used for the placement.

    """

    def __init__(self, knots, r, c):
        self.knots = np.asarray(knots, dtype=float)
        self.r = r
        self.c = c

    @property
    def slope(self):
        return 2.0 / self.r

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        ys, hs = self.knots[:, 0], self.knots[:, 1]
        inside = np.interp(y, ys, hs, left=0.0)
        above = hs[-1] + self.slope * (y - ys[-1])
        return np.where(y > ys[-1], above, inside)


def deformed_profile(lam, qt, translate=True):
    """
    :class:`DeformedProfile` of a partition at parameters ``qt``.

    """
    lam = Partition(lam)
    r = qt.log_ratio
    _, c = charge_axis(lam, r, translate=translate)
    y = c - len(lam)
    h = 0.0
    knots = [(y, h)]
    cache = particles(lam)
    for j in range(-len(lam), lam.part(1)):
        if is_particle(lam, j, cache):
            y += 1.0
        else:
            y += r
            h += 2.0
        knots.append((y, h))
    logger.debug("deformed profile of %s: %d knots, charge %.6g", lam, len(knots), c)
    return DeformedProfile(knots, r, c)


def column_deformed_profile(spec, s, m, qt, translate=True):
    """Deformed profile of ``μ^(m)``, ``m`` in ``[l, r + 1]``."""
    if not spec.l <= m <= spec.r + 1:
        raise ColumnOutOfRange("column {} outside [{}, {}]".format(m, spec.l, spec.r + 1))
    return deformed_profile(s.at(spec, m), qt, translate=translate)
