"""The master equation ``G_χ(w) Π_{k <= K} F_{u,v,k}(w) = e^{-nκ}`` and the limit shape.

With a rational Jack parameter ``α = a/b`` the equation is raised to the
power ``b`` and cleared of denominators; the resulting polynomial is solved
by :func:`numpy.polynomial.polynomial.polyroots` and its roots are filtered
back onto the branch of ``Φ`` used throughout the package. Without ``R``
columns ``Φ`` is rational and no power is needed.

"""
import logging
import math
import warnings
from fractions import Fraction

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import brentq

from railyardpy import constant
from railyardpy.asymptotics.gfactors import f_depth, f_uvk_product, master_product
from railyardpy.asymptotics.ledger import PoleZeroLedger
from railyardpy.exceptions import (
    AlphaIrrationalUnsupportedExact,
    NoConvergenceInK,
    PoleHit,
)

logger = logging.getLogger(__name__)

#: Largest denominator accepted for an exactly cleared ``α``.
MAX_ALPHA_DENOMINATOR = 12

#: ``|Im w| / max(1, |w|)`` above which a root counts as nonreal.
IMAG_TOL = 1e-9


def rational_alpha(alpha, max_denominator=MAX_ALPHA_DENOMINATOR):
    """``α`` as a :class:`~fractions.Fraction`, or ``None`` if it is not one with a small denominator."""
    frac = Fraction(alpha).limit_denominator(max_denominator)
    if abs(float(frac) - alpha) > 1e-12:
        return None
    return frac


class RootReport:
    """
    Roots of the master equation at one ``(χ, κ)``.

    Attributes
    ----------
    roots : numpy.ndarray
        Every root of the cleared polynomial (bracketing mode: every root found).
    solutions : numpy.ndarray
        Roots that solve ``Φ(w) = e^{-nκ}`` on the branch of ``Φ``.
    w_plus : complex or None
        The solution in the upper half plane when it is unique.
    K : int
    stable : bool or None
        ``w_plus`` moved by less than the tolerance under ``K -> K + 1``.
    degree : int or None
        Degree of the cleared polynomial.
    mode : str
        ``"exact"`` or ``"bracket"``.

    """

    def __init__(self, chi, kappa, roots, solutions, K, product, degree=None, mode="exact", stable=None):
        self.chi = chi
        self.kappa = kappa
        self.roots = np.asarray(roots, dtype=np.complex128)
        self.solutions = np.asarray(solutions, dtype=np.complex128)
        self.K = K
        self.product = product
        self.degree = degree
        self.mode = mode
        self.stable = stable

    def __repr__(self):
        return "RootReport(chi={}, kappa={}, K={}, classification={!r}, w_plus={})".format(
            self.chi, self.kappa, self.K, self.classification, self.w_plus
        )

    @property
    def upper(self):
        s = self.solutions
        return s[s.imag > IMAG_TOL * np.maximum(1.0, np.abs(s))]

    @property
    def nonreal(self):
        s = self.solutions
        return s[np.abs(s.imag) > IMAG_TOL * np.maximum(1.0, np.abs(s))]

    @property
    def classification(self):
        pairs = self.upper.shape[0]
        if pairs == 0:
            return "all-real"
        if pairs == 1:
            return "one-conjugate-pair"
        return "multiple-pairs"

    @property
    def w_plus(self):
        upper = self.upper
        return complex(upper[0]) if upper.shape[0] == 1 else None

    def to_dict(self):
        w = self.w_plus
        return {
            "chi": self.chi,
            "kappa": self.kappa,
            "K": self.K,
            "mode": self.mode,
            "degree": self.degree,
            "classification": self.classification,
            "w_plus": None if w is None else [w.real, w.imag],
            "stable": self.stable,
            "solutions": [[z.real, z.imag] for z in self.solutions],
        }


def cleared_polynomial(product, target, alpha=None):
    """
    Ascending coefficients of the cleared form of ``Φ(w)^b - target^b``.

    Parameters
    ----------
    product : ~railyardpy.asymptotics.gfactors.GProduct
    target : float
    alpha : ~fractions.Fraction or None
        ``a/b``; ignored when ``product`` has no ``α`` atoms.

    Returns
    -------
    numpy.ndarray

    Raises
    ------
    AlphaIrrationalUnsupportedExact

    """
    if product.has_alpha:
        if alpha is None:
            raise AlphaIrrationalUnsupportedExact(
                "alpha={} is not a fraction with denominator <= {}".format(product.alpha, MAX_ALPHA_DENOMINATOR)
            )
        mult_plain, mult_alpha = alpha.denominator, alpha.numerator
    else:
        mult_plain, mult_alpha = 1, 0
    counts = {}
    for a in product.atoms:
        key = (a.coef, a.degree)
        counts[key] = counts.get(key, 0) + a.power * (mult_alpha if a.alpha else mult_plain)
    num, den = np.array([1.0]), np.array([1.0])
    w_power = 0
    for (c, e), mult in counts.items():
        if mult == 0:
            continue
        factor = np.array([-c, 1.0]) if e < 0 else np.array([1.0, -c])
        if e < 0:
            w_power -= mult
        if mult > 0:
            num = P.polymul(num, P.polypow(factor, mult))
        else:
            den = P.polymul(den, P.polypow(factor, -mult))
    rhs = target ** mult_plain
    shift = np.zeros(abs(w_power) + 1)
    shift[-1] = 1.0
    if w_power >= 0:
        return P.polysub(P.polymul(num, shift), rhs * den)
    return P.polysub(num, rhs * P.polymul(den, shift))


def _newton(product, target, w, steps=3):
    for _ in range(steps):
        r = product(w) / target
        step = (r - 1) / (r * product.log_derivative(w))
        w = w - step
        if abs(step) < 1e-15 * max(1.0, abs(w)):
            break
    return w


def _residual(product, target, w):
    try:
        return abs(product(w) / target - 1)
    except (PoleHit, ZeroDivisionError, FloatingPointError):
        return math.inf


def _solve_exact(product, target, alpha, tol=1e-7):
    coeffs = cleared_polynomial(product, target, alpha)
    nonzero = np.nonzero(coeffs)[0]
    if nonzero.size == 0:
        raise NoConvergenceInK("the master equation is degenerate at target {}".format(target))
    coeffs = coeffs[: nonzero[-1] + 1]
    roots = P.polyroots(coeffs) if coeffs.shape[0] > 1 else np.array([], dtype=np.complex128)
    solutions = []
    for w in roots:
        if w == 0 or _residual(product, target, w) > 1e-2:
            continue
        with np.errstate(all="ignore"):
            try:
                polished = _newton(product, target, complex(w))
            except PoleHit:
                continue
        if _residual(product, target, polished) < tol:
            solutions.append(polished)
    solutions = np.array(solutions, dtype=np.complex128)
    # symmetric under conjugation: the coefficients are real
    nonreal = np.abs(solutions.imag) > IMAG_TOL * np.maximum(1.0, np.abs(solutions))
    solutions[~nonreal] = solutions[~nonreal].real
    return roots, solutions, coeffs.shape[0] - 1


def _real_brackets(product, target, samples=200):
    points = np.concatenate([[0.0], np.real(product.inner_points()), np.real(product.outer_points())])
    points = np.unique(points)
    scale = max(1.0, float(np.max(np.abs(points)))) * 1e3
    edges = np.concatenate([[-scale], points, [scale]])
    found = []

    def h(x):
        value = product(complex(x))
        if abs(value.imag) > 1e-9 * max(1.0, abs(value)):
            return math.nan
        return value.real - target

    for lo, hi in zip(edges, edges[1:]):
        width = hi - lo
        if width <= 0:
            continue
        xs = lo + width * (0.5 - 0.5 * np.cos(np.linspace(0, np.pi, samples)[1:-1]))
        with np.errstate(all="ignore"):
            values = []
            for x in xs:
                try:
                    values.append(h(x))
                except PoleHit:
                    values.append(math.nan)
        for x0, x1, y0, y1 in zip(xs, xs[1:], values, values[1:]):
            if math.isnan(y0) or math.isnan(y1) or y0 * y1 > 0:
                continue
            root = brentq(h, x0, x1, xtol=1e-14)
            if _residual(product, target, root) < 1e-7:
                found.append(complex(root))
    return found


def _solve_bracket(product, target, start=None):
    """Real roots by bracketing and nonreal ones by Newton from a grid of starts."""
    roots = _real_brackets(product, target)
    points = np.abs(np.concatenate([product.inner_points(), product.outer_points()]))
    points = points[points > 0]
    lo = float(points.min()) / 4 if points.size else 0.25
    hi = float(points.max()) * 4 if points.size else 4.0
    starts = [r * np.exp(1j * theta) for r in np.geomspace(lo, hi, 24) for theta in np.linspace(np.pi / 12, 11 * np.pi / 12, 6)]
    if start is not None:
        starts.insert(0, start)
    complex_roots = []
    for w in starts:
        with np.errstate(all="ignore"):
            try:
                w = _newton(product, target, complex(w), steps=60)
            except PoleHit:
                continue
        if not np.isfinite(w) or w.imag <= IMAG_TOL * max(1.0, abs(w)):
            continue
        if _residual(product, target, w) > 1e-9:
            continue
        if all(abs(w - z) > 1e-8 * max(1.0, abs(w)) for z in complex_roots):
            complex_roots.append(w)
    roots += complex_roots + [z.conjugate() for z in complex_roots]
    return np.array(roots, dtype=np.complex128)


def _solve_once(profile, chi, kappa, K, form, mode, start=None):
    product = master_product(profile, chi, K, form)
    target = math.exp(-profile.n * kappa)
    if mode != "bracket":
        alpha = rational_alpha(profile.alpha)
        try:
            roots, solutions, degree = _solve_exact(product, target, alpha)
            return RootReport(chi, kappa, roots, solutions, K, product, degree, "exact")
        except AlphaIrrationalUnsupportedExact:
            if mode == "exact":
                raise
            warnings.warn(
                "alpha={} is irrational; falling back to bracketing".format(profile.alpha), RuntimeWarning
            )
    found = _solve_bracket(product, target, start)
    return RootReport(chi, kappa, found, found, K, product, None, "bracket")


def solve_master(
    profile,
    chi,
    kappa,
    K=None,
    form="derived",
    mode="auto",
    tol=constant.ROOT_K_TOL,
    max_k=constant.ROOT_MAX_K,
):
    """
    Solve the master equation and classify its roots.

    Parameters
    ----------
    profile : ~railyardpy.asymptotics.profile.AsymptoticProfile
    chi, kappa : float
    K : int or None
        Number of boundary factors. ``None`` increases ``K`` until ``w_+``
        moves by less than ``tol``.
    form : str
        ``"derived"`` or ``"printed"`` boundary factors.
    mode : str
        ``"exact"`` (polynomial clearing, rational ``α`` required),
        ``"bracket"`` or ``"auto"`` (exact, bracketing as a fallback).
    tol : float
    max_k : int

    Returns
    -------
    RootReport

    Raises
    ------
    AlphaIrrationalUnsupportedExact
        In ``"exact"`` mode with an irrational ``α`` and ``R`` columns.
    NoConvergenceInK

    """
    if mode not in ("auto", "exact", "bracket"):
        raise ValueError("mode must be 'auto', 'exact' or 'bracket', got {!r}".format(mode))
    if K is not None:
        report = _solve_once(profile, chi, kappa, K, form, mode)
        following = _solve_once(profile, chi, kappa, K + 1, form, mode, report.w_plus)
        report.stable = _moved(report, following) < tol
        return report
    floor = f_depth(profile, chi, form=form, max_k=max_k)
    report = _solve_once(profile, chi, kappa, 0, form, mode)
    for k in range(1, max_k + 1):
        if len(f_uvk_product(profile, k, form)) == 0:
            report.stable = True
            return report
        following = _solve_once(profile, chi, kappa, k, form, mode, report.w_plus)
        moved = _moved(report, following)
        logger.debug("K=%d: w_plus moved by %.3g", k, moved)
        if moved < tol and (following.w_plus is not None or k >= floor):
            following.stable = True
            return following
        report = following
    raise NoConvergenceInK("w_plus did not settle within K={} boundary factors".format(max_k))


def _moved(a, b):
    if a.w_plus is None and b.w_plus is None:
        return 0.0
    if a.w_plus is None or b.w_plus is None:
        return math.inf
    return abs(a.w_plus - b.w_plus) / max(1.0, abs(b.w_plus))


def _require_interior(profile, chi):
    if not profile.interior(chi):
        raise ValueError("chi={} must lie in ({}, {}) away from the transition points".format(chi, profile.V[0], profile.V[-1]))


def _chordal(a, b):
    """Chordal distance on the Riemann sphere; infinite entries are the point at ∞."""
    a, b = np.broadcast_arrays(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))
    inf_a, inf_b = np.isinf(a), np.isinf(b)
    out = np.zeros(a.shape)
    finite = ~inf_a & ~inf_b
    out[finite] = np.abs(a[finite] - b[finite]) / np.sqrt(
        (1 + np.abs(a[finite]) ** 2) * (1 + np.abs(b[finite]) ** 2)
    )
    out[inf_a & ~inf_b] = 1 / np.sqrt(1 + np.abs(b[inf_a & ~inf_b]) ** 2)
    out[inf_b & ~inf_a] = 1 / np.sqrt(1 + np.abs(a[inf_b & ~inf_a]) ** 2)
    return out


def _track_d_roots(product, d_points, log_target, alpha, step=0.25, min_step=1e-6):
    """
    Follow the roots attached to the points of ``D_χ`` from ``e^{-nκ} = ∞``.

    As the right-hand side grows every such root approaches its point of
    ``D_χ``; the roots are continued down to ``log_target`` by nearest
    matching in the chordal metric.

    """
    d_points = np.asarray(d_points, dtype=np.complex128)
    if d_points.size == 0:
        return d_points

    degree = [0]

    def roots_at(level):
        roots = P.polyroots(_trimmed(cleared_polynomial(product, math.exp(level), alpha)))
        degree[0] = max(degree[0], roots.shape[0])
        # roots lost with the leading coefficient sit at infinity
        missing = degree[0] - roots.shape[0]
        return np.concatenate([roots, np.full(missing, complex(np.inf, 0.0))])

    start = log_target
    for _ in range(8):
        start += 20.0
        current = roots_at(start)
        tracked = np.array([current[np.argmin(_chordal(current, xi))] for xi in d_points])
        if np.all(_chordal(tracked, d_points) < 1e-3) and len(set(tracked)) == len(tracked):
            break
    level, h = start, step
    while level > log_target:
        nxt = max(log_target, level - h)
        roots = roots_at(nxt)
        dist = _chordal(tracked[:, None], roots[None, :])
        choice = np.argmin(dist, axis=1)
        ordered = np.sort(dist, axis=1)
        ambiguous = len(set(choice)) < len(choice) or (
            ordered.shape[1] > 1 and np.any(ordered[:, 0] > 0.3 * ordered[:, 1])
        )
        if ambiguous and h > min_step:
            h /= 2
            continue
        tracked = roots[choice]
        level = nxt
        h = min(step, 2 * h)
    return tracked


def _trimmed(coeffs):
    nonzero = np.nonzero(coeffs)[0]
    return coeffs[: nonzero[-1] + 1]


def _frozen_slope(profile, chi, kappa, report, form):
    target = math.exp(-profile.n * kappa)
    above = report.product.value_at_zero() > target
    ledger = PoleZeroLedger(profile, chi, report.K, form)
    alpha = rational_alpha(profile.alpha)
    tracked = _track_d_roots(report.product, ledger.d_chi, -profile.n * kappa, alpha)
    negative = int(np.sum((tracked.real < 0) & (np.abs(tracked.imag) <= IMAG_TOL * np.maximum(1.0, np.abs(tracked)))))
    value = (2.0 / profile.alpha) * (int(above) - negative)
    logger.debug("frozen slope at (%g, %g): indicator %d, %d negative roots", chi, kappa, above, negative)
    return value


def limit_shape_slope(profile, chi, kappa, K=None, form="derived", report=None):
    """
    Slope of the limiting height function in ``κ`` at ``(χ, κ)``.

    In the liquid region it is ``2/α - 2 arg(w_+) / (πα)``. In a frozen
    region it is ``0`` or ``2/α``, read off from the sign of
    ``G_χ(0) Π F(0) - e^{-nκ}`` and from the roots attached to ``D_χ``.

    Returns
    -------
    float

    """
    _require_interior(profile, chi)
    if report is None:
        report = solve_master(profile, chi, kappa, K, form)
    w = report.w_plus
    if w is not None:
        return 2.0 / profile.alpha - 2.0 * np.angle(w) / (math.pi * profile.alpha)
    return _frozen_slope(profile, chi, kappa, report, form)


def classify_point(profile, chi, kappa, K=None, form="derived", tol=1e-12):
    """
    ``"liquid"``, ``"frozen-0"``, ``"frozen-2/alpha"`` or ``"boundary"``.

    ``"boundary"`` is returned exactly when ``G_χ(0) Π F(0) = e^{-nκ}``.

    """
    _require_interior(profile, chi)
    report = solve_master(profile, chi, kappa, K, form)
    target = math.exp(-profile.n * kappa)
    at_zero = report.product.value_at_zero()
    if abs(at_zero - target) <= tol * max(at_zero, target):
        return "boundary"
    if report.w_plus is not None:
        return "liquid"
    slope = _frozen_slope(profile, chi, kappa, report, form)
    return "frozen-0" if slope < 1.0 / profile.alpha else "frozen-2/alpha"
