"""Parametrisation of the frozen boundary by the real double roots of the master equation."""
import logging
import math

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import brentq

from railyardpy.asymptotics.gfactors import f_depth, f_uvk_product, g_chi_product, GProduct
from railyardpy.asymptotics.master import cleared_polynomial, rational_alpha
from railyardpy.exceptions import NoSolutionOnBranch, PoleHit

logger = logging.getLogger(__name__)


class FrozenBoundary:
    """
    Points ``(χ(w), κ(w))`` of the frozen boundary.

    Attributes
    ----------
    points : list
        ``(w, χ, κ)`` triples.
    defects : list
        Relative size of the cleared polynomial and its derivative at each
        double root.
    skipped : list
        ``(w, reason)`` for grid points without a solution.

    """

    def __init__(self, points, defects, skipped):
        self.points = points
        self.defects = defects
        self.skipped = skipped

    def __len__(self):
        return len(self.points)

    def __repr__(self):
        return "FrozenBoundary({} points, {} skipped)".format(len(self.points), len(self.skipped))

    def rows(self):
        return [(w, chi, kappa) for w, chi, kappa in self.points]


def double_root_defect(product, w, kappa, n):
    """
    ``|P(w)| / ||P|| + |w P'(w)| / ||P||`` for the cleared polynomial ``P``.

    Vanishes exactly when ``w`` is a double root of the master equation.

    """
    alpha = rational_alpha(product.alpha)
    coeffs = cleared_polynomial(product, math.exp(-n * kappa), alpha)
    scale = np.abs(coeffs) * np.maximum(1.0, abs(w)) ** np.arange(coeffs.shape[0])
    norm = float(np.sum(scale))
    value = abs(P.polyval(w, coeffs))
    slope = abs(w * P.polyval(w, P.polyder(coeffs)))
    return (value + slope) / norm


def frozen_boundary(profile, w_grid, K=None, form="derived", samples=200):
    """
    Frozen boundary points, one per sign change of the stationarity condition.

    For each real ``w`` the condition ``d/dw log[G_χ Π F](w) = 0`` is solved
    for ``χ`` by bisection on every bracket of a grid in each segment
    ``(V_{p-1}, V_p)``; then ``κ = -(1/n) log[G_χ Π F](w)``.

    Parameters
    ----------
    profile : ~railyardpy.asymptotics.profile.AsymptoticProfile
    w_grid : array_like
        Real, nonzero samples.
    K : int or None
        Number of boundary factors; chosen adaptively when ``None``.
    form : str
    samples : int
        Grid points per segment.

    Returns
    -------
    FrozenBoundary

    Raises
    ------
    NoSolutionOnBranch
        If no grid point yields a boundary point.

    """
    mid = (profile.V[0] + profile.V[-1]) / 2
    if K is None:
        K = f_depth(profile, mid, form=form)
    boundary = GProduct(alpha=profile.alpha)
    for k in range(1, K + 1):
        boundary = boundary * f_uvk_product(profile, k, form)

    def product_at(chi):
        return g_chi_product(profile, chi) * boundary

    points, defects, skipped = [], [], []
    for w in np.asarray(w_grid, dtype=float):
        if w == 0:
            skipped.append((w, "w = 0"))
            continue

        def stationarity(chi):
            return product_at(chi).log_derivative(w).real

        found = 0
        for lo, hi in zip(profile.V, profile.V[1:]):
            chis = np.linspace(lo, hi, samples + 2)[1:-1]
            values = []
            for chi in chis:
                try:
                    values.append(stationarity(chi))
                except PoleHit:
                    values.append(math.nan)
            for c0, c1, y0, y1 in zip(chis, chis[1:], values, values[1:]):
                if math.isnan(y0) or math.isnan(y1) or y0 * y1 > 0:
                    continue
                try:
                    chi = brentq(stationarity, c0, c1, xtol=1e-14)
                except PoleHit:
                    continue
                product = product_at(chi)
                # a sign change through a pole is not a root
                if abs(stationarity(chi)) > 1e-6 * max(1.0, 1.0 / abs(w)):
                    continue
                value = product(w)
                if abs(value.imag) > 1e-12 * abs(value) or value.real <= 0:
                    continue
                kappa = -math.log(value.real) / profile.n
                points.append((float(w), float(chi), kappa))
                defects.append(double_root_defect(product, w, kappa, profile.n))
                found += 1
        if not found:
            skipped.append((float(w), "no stationary chi"))
    logger.info("frozen boundary: %d points, %d grid values skipped", len(points), len(skipped))
    if not points:
        raise NoSolutionOnBranch("no grid value of w yields a frozen boundary point")
    return FrozenBoundary(points, defects, skipped)
