"""Laplace transform of the limiting height function and its relation to the slope."""
import logging
import math

import numpy as np
from scipy.integrate import quad

from railyardpy import constant
from railyardpy.asymptotics.gfactors import f_depth, master_product
from railyardpy.asymptotics.ledger import check_limit_contour, limit_contour
from railyardpy.asymptotics.master import limit_shape_slope, solve_master
from railyardpy.contour import contour_integral

logger = logging.getLogger(__name__)


def _product(profile, chi, K, form):
    if K is None:
        K = f_depth(profile, chi, form=form)
    return master_product(profile, chi, K, form)


def laplace_limit(profile, chi, gamma, contour=None, K=None, form="derived", tol=constant.QUADRATURE_TOL):
    """
    ``∫ e^{-nγκ} H(χ, κ) dκ`` through its contour integral representation.

    Evaluates ``(1 / (n² α γ² πi)) ∮ [G_χ(w) Π_{k <= K} F_{u,v,k}(w)]^γ dw / w``
    with a contour enclosing 0 and every singular point of negative degree.

    Parameters
    ----------
    profile : ~railyardpy.asymptotics.profile.AsymptoticProfile
    chi : float
    gamma : float
        Positive.
    contour : ~railyardpy.contour.ContourSpec or None
        Built by :func:`~railyardpy.asymptotics.ledger.limit_contour` when omitted.
    K : int or None
    form : str
    tol : float

    Returns
    -------
    float

    Raises
    ------
    ContourCrossesSingularity
    QuadratureNotConverged

    """
    if not gamma > 0:
        raise ValueError("gamma must be positive, got {}".format(gamma))
    product = _product(profile, chi, K, form)
    contour = limit_contour(product) if contour is None else check_limit_contour(product, contour)

    def integrand(w):
        return product.power(w, gamma) / w

    value = contour_integral(integrand, contour, tol)
    return 2.0 / (profile.n ** 2 * profile.alpha * gamma ** 2) * value.real


def _slope(profile, chi, K, form):
    return lambda kappa: limit_shape_slope(profile, chi, kappa, K, form)


def frozen_window(profile, chi, K=None, form="derived", max_steps=30):
    """
    ``(κ_lo, κ_hi)`` with slope ``0`` below ``κ_lo`` and ``2/α`` above ``κ_hi``.

    Found by stepping outwards from ``κ_0 = -(1/n) log[G_χ(0) Π F(0)]``.

    """
    slope = _slope(profile, chi, K, form)
    product = _product(profile, chi, K, form)
    center = -math.log(product.value_at_zero()) / profile.n
    full = 2.0 / profile.alpha
    lo, step = center - 1.0, 1.0
    for _ in range(max_steps):
        if slope(lo) < 1e-12:
            break
        step *= 2
        lo -= step
    hi, step = center + 1.0, 1.0
    for _ in range(max_steps):
        if abs(slope(hi) - full) < 1e-12:
            break
        step *= 2
        hi += step
    logger.debug("frozen window at chi=%g: [%g, %g]", chi, lo, hi)
    return lo, hi


def height_from_slope(profile, chi, kappa, kappa_lo=None, K=None, form="derived"):
    """
    ``H(χ, κ)`` as the integral of the slope from below the liquid region.

    The height vanishes for ``κ`` under ``κ_lo``.

    """
    if kappa_lo is None:
        kappa_lo, _ = frozen_window(profile, chi, K, form)
    if kappa <= kappa_lo:
        return 0.0
    value, _ = quad(_slope(profile, chi, K, form), kappa_lo, kappa, limit=200)
    return value


def laplace_from_slope(profile, chi, gamma, window=None, K=None, form="derived"):
    """
    ``∫ e^{-nγκ} H(χ, κ) dκ`` computed from the slope by parts.

    Equals ``(1/(nγ)) ∫ e^{-nγκ} ∂_κ H dκ``; the slope is integrated over the
    frozen window and the constant ``2/α`` tail above it in closed form.

    """
    lo, hi = frozen_window(profile, chi, K, form) if window is None else window
    rate = profile.n * gamma
    slope = _slope(profile, chi, K, form)
    product = _product(profile, chi, K, form)
    jump = -math.log(product.value_at_zero()) / profile.n
    points = [jump] if lo < jump < hi else None
    body, _ = quad(lambda k: math.exp(-rate * k) * slope(k), lo, hi, limit=200, points=points)
    tail = 2.0 / profile.alpha * math.exp(-rate * hi) / rate
    return (body + tail) / rate


def w_plus_map(profile, chis, kappas, K=None, form="derived"):
    """
    ``w_+(χ, κ)`` over a grid, with an injectivity diagnostic.

    Returns
    -------
    dict
        ``w_plus`` (complex array, ``nan`` outside the liquid region),
        ``liquid`` (count), ``min_separation`` (smallest distance between two
        images) and ``injective``.

    """
    chis = np.asarray(chis, dtype=float)
    kappas = np.asarray(kappas, dtype=float)
    out = np.full((chis.shape[0], kappas.shape[0]), np.nan + 0j)
    for i, chi in enumerate(chis):
        for j, kappa in enumerate(kappas):
            w = solve_master(profile, chi, kappa, K, form).w_plus
            if w is not None:
                out[i, j] = w
    images = out[np.isfinite(out)]
    separation = math.inf
    if images.shape[0] > 1:
        dist = np.abs(images[:, None] - images[None, :])
        np.fill_diagonal(dist, math.inf)
        separation = float(dist.min())
    return {
        "w_plus": out,
        "liquid": int(images.shape[0]),
        "min_separation": separation,
        "injective": separation > 1e-9,
    }
