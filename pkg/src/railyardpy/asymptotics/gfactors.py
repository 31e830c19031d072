"""Limits of the G factors and of the boundary factors ``F_{u,v,k}``.

Every factor is a finite product of Möbius atoms ``(1 - c w^{±1})^{±1}``.
Atoms coming from ``R`` columns carry the exponent ``α``; :class:`GProduct`
keeps them in a separate ledger so that ``Φ = plain · alpha_part^α``.

Powers are taken through per-atom principal logarithms. For a zero and a
pole of equal degree the two cuts cancel outside the segment (or ray pair)
joining them, so ``Φ^γ`` is analytic away from a union of real intervals and
real-positive for large positive ``w``.

"""
import logging
import math

import numpy as np

from railyardpy.exceptions import PoleHit
from railyardpy.macdonald.products import MobiusLedger

logger = logging.getLogger(__name__)

WHICH = (">L", "<L", ">R", "<R")

#: Distance, relative to ``max(1, |w|)``, at which ``w`` counts as a pole.
POLE_TOL = 1e-13


class Atom:
    """
    ``(1 - coef * w**degree)^power`` together with its bookkeeping label.

    ``point`` is the zero (``power > 0``) or pole (``power < 0``) in ``w``.

    """

    __slots__ = ("coef", "degree", "power", "label", "alpha")

    def __init__(self, coef, degree, power, label, alpha=False):
        self.coef = float(coef)
        self.degree = int(degree)
        self.power = int(power)
        self.label = label
        self.alpha = bool(alpha)

    def __repr__(self):
        return "Atom(1 - {:.6g} w^{}, power={}, label={!r}{})".format(
            self.coef, self.degree, self.power, self.label, ", alpha" if self.alpha else ""
        )

    @property
    def point(self):
        return self.coef if self.degree < 0 else 1.0 / self.coef

    @property
    def is_pole(self):
        return self.power < 0

    def rescaled(self, scale, orientation, label):
        """
        The atom in the variable ``w'`` with ``w = scale * w'**orientation``.

        """
        return Atom(
            self.coef * scale ** self.degree,
            self.degree * orientation,
            self.power,
            label,
            self.alpha,
        )


def _pair(zero, pole, degree, label, alpha):
    """Zero and pole atoms of ``(1 - zero w^d) / (1 - pole w^d)``."""
    return [
        Atom(zero, degree, 1, (label, "zero"), alpha),
        Atom(pole, degree, -1, (label, "pole"), alpha),
    ]


def g_atoms(which, profile, chi):
    """
    Atoms of ``G_{>χ,L}``, ``G_{<χ,L}``, ``G_{>χ,R}`` or ``G_{<χ,R}``.

    Parameters
    ----------
    which : str
        One of ``">L"``, ``"<L"``, ``">R"``, ``"<R"``.
    profile : ~railyardpy.asymptotics.profile.AsymptoticProfile
    chi : float

    Returns
    -------
    list
        :class:`Atom` objects labelled ``("R_chi_<set>_<1|2>", role)``.

    """
    if which not in WHICH:
        raise ValueError("which must be one of {}, got {!r}".format(WHICH, which))
    V, tau = profile.V, profile.tau
    atoms = []
    for p in range(1, profile.m + 1):
        for j in range(1, profile.n + 1):
            t = tau[j - 1]
            if which == ">L" and V[p] > chi and profile.event(p, j, True, "L"):
                lo = max(V[p - 1], chi)
                atoms += _pair(math.exp(V[p]) / t, math.exp(lo) / t, -1, "R_chi_1", False)
            elif which == "<L" and V[p - 1] < chi and profile.event(p, j, False, "L"):
                hi = min(V[p], chi)
                atoms += _pair(math.exp(-V[p - 1]) * t, math.exp(-hi) * t, 1, "R_chi_2", False)
            elif which == ">R" and V[p] > chi and profile.event(p, j, True, "R"):
                lo = max(V[p - 1], chi)
                atoms += _pair(-math.exp(lo) / t, -math.exp(V[p]) / t, -1, "R_chi_3", True)
            elif which == "<R" and V[p - 1] < chi and profile.event(p, j, False, "R"):
                hi = min(V[p], chi)
                atoms += _pair(-math.exp(-hi) * t, -math.exp(-V[p - 1]) * t, 1, "R_chi_4", True)
    return atoms


class GProduct:
    """
    ``Φ(w) = Π_plain (1 - c w^e)^p · [Π_alpha (1 - c w^e)^p]^α``.

    Parameters
    ----------
    atoms : list
        :class:`Atom` objects.
    alpha : float

    """

    def __init__(self, atoms=(), alpha=1.0):
        self.atoms = [a for a in atoms if a.coef != 0]
        self.alpha = float(alpha)
        self._plain = MobiusLedger([(a.coef, a.degree, a.power) for a in self.atoms if not a.alpha])
        self._alpha = MobiusLedger([(a.coef, a.degree, a.power) for a in self.atoms if a.alpha])

    def __repr__(self):
        return "GProduct({} atoms, alpha={})".format(len(self.atoms), self.alpha)

    def __len__(self):
        return len(self.atoms)

    def __mul__(self, other):
        return GProduct(self.atoms + other.atoms, self.alpha)

    @property
    def plain(self):
        return self._plain

    @property
    def alpha_part(self):
        return self._alpha

    @property
    def has_alpha(self):
        return len(self._alpha) > 0

    def _check(self, w):
        w_arr = np.atleast_1d(np.asarray(w, dtype=np.complex128))
        for a in self.atoms:
            if a.is_pole and np.any(np.abs(w_arr - a.point) <= POLE_TOL * np.maximum(1.0, np.abs(w_arr))):
                raise PoleHit("w hits the pole {:.12g} of {!r}".format(a.point, a.label))
        if np.any(w_arr == 0) and any(a.degree < 0 for a in self.atoms):
            raise PoleHit("w = 0 is an essential point of a product with negative degrees")

    def log(self, w):
        """``log Φ(w)`` on the per-atom principal branch."""
        self._check(w)
        out = self._plain.log_evaluate(w)
        if self.has_alpha:
            out = out + self.alpha * self._alpha.log_evaluate(w)
        return out

    def __call__(self, w):
        return np.exp(self.log(w))

    def power(self, w, gamma):
        """``Φ(w)^γ``."""
        return np.exp(gamma * self.log(w))

    def log_derivative(self, w):
        """``Φ'(w) / Φ(w)``."""
        self._check(w)
        out = self._plain.log_derivative(w)
        if self.has_alpha:
            out = out + self.alpha * self._alpha.log_derivative(w)
        return out

    def value_at_zero(self):
        """
        ``lim_{w -> 0} Φ(w)``.

        Atoms of positive degree tend to 1; a zero/pole pair of degree ``-1``
        tends to the ratio of its two points.

        """
        plain = alpha = 0.0
        for a in self.atoms:
            if a.degree < 0:
                if a.alpha:
                    alpha += a.power * math.log(abs(a.coef))
                else:
                    plain += a.power * math.log(abs(a.coef))
        return math.exp(plain + self.alpha * alpha)

    def inner_points(self):
        """Zeros and poles that the moment contours enclose (negative degree)."""
        return np.array([a.point for a in self.atoms if a.degree < 0])

    def outer_points(self):
        """Zeros and poles the moment contours exclude (positive degree)."""
        return np.array([a.point for a in self.atoms if a.degree > 0])

    def cut_jump(self, x):
        """
        Jump of ``Im log Φ / 2π`` across the real axis at ``x``.

        A contour may cross the real axis only where this vanishes, otherwise
        ``Φ^γ`` is discontinuous on it.

        """
        jump = 0.0
        for a in self.atoms:
            weight = self.alpha if a.alpha else 1.0
            if a.degree < 0:
                inside = 0 < x / a.coef <= 1
                if inside:
                    jump -= math.copysign(1.0, a.coef) * a.power * weight
            else:
                beyond = x * a.coef >= 1
                if beyond:
                    jump += math.copysign(1.0, a.coef) * a.power * weight
        return jump

    def labelled_points(self):
        """``{label: {"zero": [...], "pole": [...]}}``."""
        out = {}
        for a in self.atoms:
            name, role = a.label
            out.setdefault(name, {"zero": [], "pole": []})[role].append(a.point)
        return out


def _require_point(profile, chi):
    if not profile.V[0] <= chi <= profile.V[-1]:
        raise ValueError("chi={} lies outside [{}, {}]".format(chi, profile.V[0], profile.V[-1]))


def g_factor(which, profile, chi, w):
    """
    One of the four limit G factors at ``w``.

    The ``R`` factors are returned without the exponent ``α``.

    Raises
    ------
    PoleHit

    """
    atoms = [Atom(a.coef, a.degree, a.power, a.label) for a in g_atoms(which, profile, chi)]
    return GProduct(atoms)(w)


def g_chi_product(profile, chi):
    """``G_χ = G_{>χ,L} G_{<χ,L} [G_{>χ,R} G_{<χ,R}]^α`` as a :class:`GProduct`."""
    _require_point(profile, chi)
    atoms = []
    for which in WHICH:
        atoms += g_atoms(which, profile, chi)
    return GProduct(atoms, profile.alpha)


def g_chi(profile, chi, w):
    return g_chi_product(profile, chi)(w)


def _scaled(profile, chi, families, scale, orientation, k1, k2, inner_tag, outer_tag):
    out = []
    for which in families:
        for a in g_atoms(which, profile, chi):
            new = a.rescaled(scale, orientation, None)
            family = inner_tag if new.degree < 0 else outer_tag
            if a.alpha:
                family += 2
            new.label = ("R_{}_{}_{}".format(family, k1, k2), a.label[1])
            out.append(new)
    return out


def f_atoms(profile, k, form="derived"):
    """
    Atoms of ``F_{u,v,k}``.

    The first line is ``G_{>V_0}(w / (uv)^{2k}) G_{<V_m}((uv)^{2k} w)``. The
    second line is ``G_{>V_0,L}(1 / (u^{2k} v^{2k-2} w)) G_{<V_m,L}(u^{2k-2}
    v^{2k} / w)`` for ``form="derived"`` and ``G_{>V_0,L}(w / (u^{2k-2}
    v^{2k})) G_{<V_m,L}(u^{2k} v^{2k-2} w)`` for ``form="printed"``, with the
    ``R`` factors following their ``L`` partners.

    Labels ``R_<family>_<k1>_<k2>`` carry the exponents of ``u^2`` and ``v^2``
    in the scale; families 5/6 are the enclosed/excluded ``L`` points and 7/8
    the ``R`` ones.

    """
    if k < 1:
        raise ValueError("k must be a positive integer, got {}".format(k))
    if form not in ("derived", "printed"):
        raise ValueError("form must be 'derived' or 'printed', got {!r}".format(form))
    u, v = profile.u, profile.v
    lo, hi = profile.V[0], profile.V[-1]
    upper = (">L", ">R")
    lower = ("<L", "<R")
    atoms = []
    uv = (u * v) ** (2 * k)
    if uv > 0:
        atoms += _scaled(profile, lo, upper, 1.0 / uv, 1, k, k, 5, 6)
        atoms += _scaled(profile, hi, lower, uv, 1, k, k, 5, 6)
    s = u ** (2 * k) * v ** (2 * k - 2)
    t = u ** (2 * k - 2) * v ** (2 * k)
    if form == "derived":
        if s > 0:
            atoms += _scaled(profile, lo, upper, 1.0 / s, -1, k, k - 1, 5, 6)
        if t > 0:
            atoms += _scaled(profile, hi, lower, t, -1, k - 1, k, 5, 6)
    else:
        if t > 0:
            atoms += _scaled(profile, lo, upper, 1.0 / t, 1, k - 1, k, 5, 6)
        if s > 0:
            atoms += _scaled(profile, hi, lower, s, 1, k, k - 1, 5, 6)
    return atoms


def f_uvk_product(profile, k, form="derived"):
    return GProduct(f_atoms(profile, k, form), profile.alpha)


def f_uvk(profile, k, w, form="derived"):
    """
    ``F_{u,v,k}(w)``.

    Raises
    ------
    PoleHit

    """
    return f_uvk_product(profile, k, form)(w)


def master_product(profile, chi, K, form="derived"):
    """``G_χ Π_{k <= K} F_{u,v,k}`` as one :class:`GProduct`."""
    out = g_chi_product(profile, chi)
    for k in range(1, K + 1):
        out = out * f_uvk_product(profile, k, form)
    return out


def f_depth(profile, chi, tol=1e-13, form="derived", max_k=64):
    """
    Smallest ``K`` whose next boundary factor differs from 1 by less than ``tol``.

    The defect is measured on a circle through the geometric mean of the
    singular moduli of ``G_χ``.

    """
    g = g_chi_product(profile, chi)
    moduli = np.abs(np.concatenate([g.inner_points(), g.outer_points()]))
    radius = float(np.exp(np.mean(np.log(moduli)))) if moduli.size else 1.0
    ring = radius * np.exp(2j * np.pi * (np.arange(16) + 0.25) / 16)
    for k in range(1, max_k + 1):
        f = f_uvk_product(profile, k, form)
        if len(f) == 0 or float(np.max(np.abs(f.log(ring)))) < tol:
            logger.debug("boundary factors truncated at K=%d", k - 1)
            return k - 1
    return max_k
