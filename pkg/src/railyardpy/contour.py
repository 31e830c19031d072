"""Trapezoid quadrature of contour integrals over unions of circles.

On a circle the trapezoid rule converges geometrically for analytic
integrands, so the integral is refined by doubling the node count until two
successive values agree. The values of the previous level are reused: the
new nodes sit halfway between the old ones.

"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from railyardpy import constant
from railyardpy.exceptions import (
    ContourCrossesSingularity,
    ContoursNotDisjoint,
    QuadratureNotConverged,
)

logger = logging.getLogger(__name__)


class ContourSpec:
    """
    A positively oriented union of disjoint circles.

    Parameters
    ----------
    radius : float
        Radius of a single circle; ignored when ``circles`` is given.
    center : complex
    n_nodes : int
        Initial number of trapezoid nodes per circle, even.
    circles : list or None
        ``(center, radius)`` pairs.

    """

    def __init__(self, radius=None, center=0.0, n_nodes=constant.QUADRATURE_MIN_NODES, circles=None):
        if circles is None:
            if radius is None:
                raise ValueError("either radius or circles must be given")
            circles = [(center, radius)]
        circles = [(complex(c), float(r)) for c, r in circles]
        if not circles:
            raise ValueError("a contour needs at least one circle")
        for c, r in circles:
            if not r > 0:
                raise ValueError("circle radius must be positive, got {}".format(r))
        for i, (c1, r1) in enumerate(circles):
            for c2, r2 in circles[i + 1 :]:
                if abs(c1 - c2) <= r1 + r2:
                    raise ValueError(
                        "circles ({}, {}) and ({}, {}) overlap".format(c1, r1, c2, r2)
                    )
        if n_nodes < 2 or n_nodes % 2:
            raise ValueError("n_nodes must be even and at least 2, got {}".format(n_nodes))
        self.circles = circles
        self.n_nodes = int(n_nodes)

    @classmethod
    def from_dict(cls, data):
        def _complex(z):
            if isinstance(z, (list, tuple)):
                return complex(z[0], z[1])
            return complex(z)

        circles = data.get("circles")
        if circles is not None:
            circles = [(_complex(c), r) for c, r in circles]
        return cls(
            data.get("radius"),
            _complex(data.get("center", 0.0)),
            data.get("n_nodes", constant.QUADRATURE_MIN_NODES),
            circles,
        )

    def to_dict(self):
        return {
            "circles": [[[c.real, c.imag], r] for c, r in self.circles],
            "n_nodes": self.n_nodes,
        }

    def __repr__(self):
        return "ContourSpec(circles={!r}, n_nodes={})".format(self.circles, self.n_nodes)

    @property
    def center(self):
        return self.circles[0][0]

    @property
    def radius(self):
        return self.circles[0][1]

    def scaled(self, factor):
        """Every radius multiplied by ``factor``, centers kept."""
        return ContourSpec(circles=[(c, r * factor) for c, r in self.circles], n_nodes=self.n_nodes)

    def conjugate(self):
        return ContourSpec(
            circles=[(c.conjugate(), r) for c, r in self.circles], n_nodes=self.n_nodes
        )

    def nodes(self, n=None, offset=0.0):
        """
        Trapezoid nodes and weights.

        Parameters
        ----------
        n : int
            Nodes per circle; defaults to ``n_nodes``.
        offset : float
            Shift of the angular grid in units of the node spacing.

        Returns
        -------
        tuple
            ``(w, weights)`` such that ``Σ f(w) weights`` approximates
            ``(1/2πi) ∮ f(w) dw``.

        """
        n = self.n_nodes if n is None else n
        theta = 2 * np.pi * (np.arange(n) + offset) / n
        ws, weights = [], []
        for c, r in self.circles:
            w = c + r * np.exp(1j * theta)
            ws.append(w)
            weights.append((w - c) / n)
        return np.concatenate(ws), np.concatenate(weights)

    def encloses(self, z):
        z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
        inside = np.zeros(z.shape, dtype=bool)
        for c, r in self.circles:
            inside |= np.abs(z - c) < r
        return inside

    def real_crossings(self):
        """Points where the circles meet the real axis."""
        out = []
        for c, r in self.circles:
            if abs(c.imag) < r:
                half = math.sqrt(r * r - c.imag * c.imag)
                out += [c.real - half, c.real + half]
        return np.array(out)

    def clearance(self, points):
        """
        Smallest distance from ``points`` to the contour, relative to the radius.

        """
        points = np.atleast_1d(np.asarray(points, dtype=np.complex128))
        if points.size == 0:
            return math.inf
        return min(float(np.min(np.abs(np.abs(points - c) - r))) / r for c, r in self.circles)

    def check(self, points, margin=constant.CONTOUR_MARGIN):
        """
        Raise if any of ``points`` lies within ``margin * radius`` of the contour.

        Raises
        ------
        ContourCrossesSingularity

        """
        gap = self.clearance(points)
        if gap < margin:
            raise ContourCrossesSingularity(
                "a singularity lies at relative distance {:.3g} < {} from {!r}".format(
                    gap, margin, self
                )
            )
        return gap


def separating_radius(inner, outer, margin=constant.CONTOUR_MARGIN):
    """
    Radius of a centred circle between two sets of singular moduli.

    The geometric mean of the largest inner and the smallest outer modulus.

    Parameters
    ----------
    inner, outer : array_like
        Moduli that must lie inside and outside the circle.
    margin : float
        Relative gap required on both sides.

    Returns
    -------
    float

    Raises
    ------
    ContourCrossesSingularity
        If the two sets are not separated by the margin.

    """
    inner = np.abs(np.atleast_1d(np.asarray(inner, dtype=np.complex128)))
    outer = np.abs(np.atleast_1d(np.asarray(outer, dtype=np.complex128)))
    r_in = float(np.max(inner)) if inner.size else 0.0
    r_out = float(np.min(outer)) if outer.size else math.inf
    if r_in == 0 and math.isinf(r_out):
        return 1.0
    if r_in == 0:
        r = r_out / 2
    elif math.isinf(r_out):
        r = 2 * r_in
    else:
        r = math.sqrt(r_in * r_out)
    if r_in > r * (1 - margin) or r_out < r * (1 + margin):
        raise ContourCrossesSingularity(
            "no centred circle separates |inner| <= {:.6g} from |outer| >= {:.6g}".format(r_in, r_out)
        )
    return r


def _clusters(points, blockers):
    """Maximal runs of sorted ``points`` with no blocker in between."""
    blockers = np.sort(np.asarray(blockers, dtype=float))
    out = []
    for x in sorted(points):
        if out and not np.any((blockers > out[-1][-1]) & (blockers < x)):
            out[-1].append(x)
        else:
            out.append([x])
    return out


def _merge(circles):
    """Merge overlapping circles on the real axis into enclosing ones."""
    circles = sorted(circles, key=lambda c: c[0] - c[1])
    out = []
    for c, r in circles:
        if out and c - r <= out[-1][0] + out[-1][1]:
            lo = min(out[-1][0] - out[-1][1], c - r)
            hi = max(out[-1][0] + out[-1][1], c + r)
            out[-1] = ((lo + hi) / 2, (hi - lo) / 2)
        else:
            out.append((c, r))
    return out


def separating_contour(inner, outer, margin=constant.CONTOUR_MARGIN, n_nodes=constant.QUADRATURE_MIN_NODES):
    """
    A contour enclosing ``inner`` and none of ``outer``.

    A centred circle is used when the two sets are separated in modulus;
    otherwise a union of circles around runs of consecutive inner points,
    each padded by half the gap to the nearest outer point.

    Parameters
    ----------
    inner, outer : array_like
        Points; the union of circles needs them all on the real axis.
    margin : float
    n_nodes : int

    Returns
    -------
    ~railyardpy.contour.ContourSpec

    Raises
    ------
    ContourCrossesSingularity
        If an outer point coincides with an inner one, or if no centred
        circle works and some point is off the real axis.

    """
    inner = np.atleast_1d(np.asarray(inner, dtype=np.complex128))
    outer = np.atleast_1d(np.asarray(outer, dtype=np.complex128))
    try:
        return ContourSpec(separating_radius(inner, outer, margin), n_nodes=n_nodes)
    except ContourCrossesSingularity:
        points = np.concatenate([inner, outer])
        if np.any(np.abs(points.imag) > 1e-12 * np.maximum(1.0, np.abs(points))):
            raise
    inner, outer = inner.real, outer.real
    circles = []
    for run in _clusters(inner, outer):
        lo, hi = run[0], run[-1]
        left = outer[outer < lo]
        right = outer[outer > hi]
        gap_l = lo - left.max() if left.size else math.inf
        gap_r = right.min() - hi if right.size else math.inf
        pad = min(gap_l, gap_r) / 2
        if math.isinf(pad):
            pad = max(1.0, hi - lo)
        if pad <= 0 or np.any((outer >= lo) & (outer <= hi)):
            raise ContourCrossesSingularity("an excluded point lies in [{}, {}]".format(lo, hi))
        circles.append(((lo + hi) / 2, (hi - lo) / 2 + pad))
    circles = _merge(circles)
    logger.debug("separating contour: %d circles", len(circles))
    return ContourSpec(circles=circles, n_nodes=n_nodes)


def _evaluate(f, w, workers):
    if workers is None or workers <= 1 or w.shape[0] < 2 * workers:
        return np.asarray(f(w), dtype=np.complex128)
    chunks = np.array_split(w, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(f, chunks))
    return np.concatenate([np.asarray(p, dtype=np.complex128) for p in parts])


def contour_integral(
    f,
    contour,
    tol=constant.QUADRATURE_TOL,
    max_nodes=constant.QUADRATURE_MAX_NODES,
    workers=None,
    full_output=False,
):
    """
    ``(1/2πi) ∮ f(w) dw`` over a :class:`ContourSpec`.

    Parameters
    ----------
    f : callable
        Vectorized integrand taking a complex array.
    contour : ~railyardpy.contour.ContourSpec
    tol : float
        Two successive refinements must agree to ``tol * max(1, |I|)``.
    max_nodes : int
        Largest number of nodes per circle.
    workers : int or None
        Threads over chunks of nodes; the chunks are summed in node order.
    full_output : bool
        Also return the node count used.

    Returns
    -------
    complex or tuple

    Raises
    ------
    QuadratureNotConverged

    """
    n = contour.n_nodes
    w, weights = contour.nodes(n)
    raw_sum = complex(np.sum(_evaluate(f, w, workers) * weights * n))
    value = raw_sum / n
    while 2 * n <= max_nodes:
        w, weights = contour.nodes(n, offset=0.5)
        raw_sum += complex(np.sum(_evaluate(f, w, workers) * weights * n))
        n *= 2
        new = raw_sum / n
        delta = abs(new - value)
        logger.debug("contour integral at %d nodes: change %.3g", n, delta)
        value = new
        if delta < tol * max(1.0, abs(value)):
            return (value, n) if full_output else value
    raise QuadratureNotConverged(
        "contour integral not converged with {} nodes per circle (last change above {:.3g})".format(
            max_nodes, tol
        )
    )


def check_nested(inner, outer):
    """
    Raise unless every circle of ``inner`` lies strictly inside a circle of ``outer``.

    Raises
    ------
    ContoursNotDisjoint

    """
    for c1, r1 in inner.circles:
        if not any(abs(c1 - c2) + r1 < r2 for c2, r2 in outer.circles):
            raise ContoursNotDisjoint(
                "circle ({}, {}) is not strictly inside {!r}".format(c1, r1, outer)
            )


def double_contour_integral(
    f,
    inner,
    outer,
    tol=constant.QUADRATURE_TOL,
    max_nodes=constant.DOUBLE_QUADRATURE_MAX_NODES,
    chunk=256,
):
    """
    ``(1/2πi)^2 ∮∮ f(z, w) dz dw`` with ``z`` on ``inner`` and ``w`` on ``outer``.

    The tensor trapezoid rule is refined by doubling both grids.

    Parameters
    ----------
    f : callable
        Broadcasting integrand ``f(z[:, None], w[None, :])``.
    inner, outer : ~railyardpy.contour.ContourSpec
        The ``inner`` contour must be nested inside ``outer``.

    Returns
    -------
    complex

    Raises
    ------
    ContoursNotDisjoint
    QuadratureNotConverged

    """
    check_nested(inner, outer)
    n = max(inner.n_nodes, outer.n_nodes)
    previous = None
    while n <= max_nodes:
        z, wz = inner.nodes(n)
        w, ww = outer.nodes(n)
        value = 0j
        for start in range(0, z.shape[0], chunk):
            zs = z[start : start + chunk]
            block = np.asarray(f(zs[:, None], w[None, :]), dtype=np.complex128)
            value += complex(wz[start : start + chunk] @ block @ ww)
        logger.debug("double contour integral at %d nodes: %.12g", n, abs(value))
        if previous is not None and abs(value - previous) < tol * max(1.0, abs(value)):
            return value
        previous = value
        n *= 2
    raise QuadratureNotConverged(
        "double contour integral not converged with {} nodes per circle".format(max_nodes)
    )
