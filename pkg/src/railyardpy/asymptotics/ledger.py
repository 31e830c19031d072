"""Zero/pole bookkeeping of ``G_χ Π F`` and the contours built from it."""
import logging

import numpy as np

from railyardpy import constant
from railyardpy.asymptotics.gfactors import master_product
from railyardpy.contour import separating_contour
from railyardpy.exceptions import ContourCrossesSingularity

logger = logging.getLogger(__name__)

#: Points closer than this (relative) are one point with multiplicity.
MERGE_TOL = 1e-12


def _multiset_difference(plus, minus, tol=MERGE_TOL):
    left = sorted(plus)
    for x in minus:
        for i, y in enumerate(left):
            if abs(x - y) <= tol * max(1.0, abs(x)):
                del left[i]
                break
    return left


class PoleZeroLedger:
    """
    The labelled zero and pole sets of ``G_χ Π_{k <= K} F_{u,v,k}``.

    ``sets[name]`` maps ``"zero"`` and ``"pole"`` to lists of real points with
    multiplicity. Names are ``R_chi_1`` ... ``R_chi_4`` for ``G_χ`` and
    ``R_<5..8>_<k1>_<k2>`` for the boundary factors.

    Parameters
    ----------
    profile : ~railyardpy.asymptotics.profile.AsymptoticProfile
    chi : float
    K : int
        Number of boundary factors.
    form : str
        ``"derived"`` or ``"printed"`` second line of ``F``.

    """

    def __init__(self, profile, chi, K=0, form="derived"):
        self.profile = profile
        self.chi = float(chi)
        self.K = int(K)
        self.product = master_product(profile, chi, K, form)
        self.sets = self.product.labelled_points()

    def __repr__(self):
        return "PoleZeroLedger(chi={}, K={}, sets={})".format(self.chi, self.K, sorted(self.sets))

    def _collect(self, inner, role):
        return [
            a.point
            for a in self.product.atoms
            if (a.degree < 0) == inner and a.label[1] == role
        ]

    @property
    def d_chi(self):
        """Enclosed poles minus enclosed zeros, as a sorted multiset."""
        return _multiset_difference(self._collect(True, "pole"), self._collect(True, "zero"))

    @property
    def enclosed(self):
        """Every singular point of negative degree, together with 0."""
        return sorted([0.0] + list(self.product.inner_points()))

    @property
    def forbidden(self):
        """Singular points the moment contours must avoid enclosing."""
        return sorted(self.product.outer_points())

    def to_dict(self):
        return {
            "chi": self.chi,
            "K": self.K,
            "sets": {name: {k: sorted(v) for k, v in roles.items()} for name, roles in sorted(self.sets.items())},
            "d_chi": self.d_chi,
            "forbidden": self.forbidden,
        }


def check_limit_contour(product, contour, margin=constant.CONTOUR_MARGIN):
    """
    Raise unless ``contour`` encloses 0 and the inner points of ``product``,
    avoids its outer points and crosses the real axis off every cut.

    Raises
    ------
    ContourCrossesSingularity

    """
    inner = np.real(product.inner_points())
    outer = np.real(product.outer_points())
    points = np.concatenate([inner, outer])
    if points.size:
        contour.check(points, margin)
    if not np.all(contour.encloses(np.concatenate([[0.0], inner]))):
        raise ContourCrossesSingularity("contour {!r} misses an enclosed point".format(contour))
    if np.any(contour.encloses(outer)):
        raise ContourCrossesSingularity("contour {!r} encloses an excluded point".format(contour))
    for x in contour.real_crossings():
        if abs(product.cut_jump(x)) > 1e-12:
            raise ContourCrossesSingularity("contour {!r} crosses a cut at {:.6g}".format(contour, x))
    return contour


def limit_contour(product, margin=constant.CONTOUR_MARGIN, n_nodes=constant.QUADRATURE_MIN_NODES):
    """
    A contour enclosing 0 and the inner points of ``product`` but none of its outer ones.

    A centred circle is used when the two sets are separated in modulus;
    otherwise a union of circles around runs of consecutive inner points on
    the real line, each padded by a share of the gap to the nearest outer
    point. Every real crossing is checked against the cuts of ``Φ^γ``.

    Parameters
    ----------
    product : ~railyardpy.asymptotics.gfactors.GProduct
    margin : float
    n_nodes : int

    Returns
    -------
    ~railyardpy.contour.ContourSpec

    Raises
    ------
    ContourCrossesSingularity
        If no such union of circles exists.

    """
    inner = np.concatenate([[0.0], np.real(product.inner_points())])
    outer = np.real(product.outer_points())
    contour = separating_contour(inner, outer, margin, n_nodes)
    return check_limit_contour(product, contour, margin / 4)

