"""Finite-ε G factors as q-Pochhammer ratios and their ``ε -> 0`` asymptotics."""
import cmath
import logging
import math

import numpy as np

from railyardpy.asymptotics.gfactors import g_chi_product
from railyardpy.exceptions import ExcludedRegion
from railyardpy.macdonald.products import qpochhammer

logger = logging.getLogger(__name__)


def in_excluded_region(z, eps, theta=math.pi / 2, xi=0.5):
    """
    ``z`` lies within ``xi`` of ``[1, ∞)`` and in the sector ``|arg(z - (1 - ε))| <= θ``.

    """
    z = complex(z)
    if z.real >= 1:
        dist = abs(z.imag)
    else:
        dist = abs(z - 1)
    return dist <= xi and abs(cmath.phase(z - (1 - eps))) <= theta


def pochhammer_ratio_asym(z, eps, alpha, N, theta=math.pi / 2, xi=0.5):
    """
    Compare ``(z; e^{-ε})_N / (e^{-εα} z; e^{-ε})_N`` with ``((1 - z)/(1 - e^{-εN} z))^α``.

    Parameters
    ----------
    z : complex
    eps : float
    alpha : float
    N : int
    theta, xi : float
        Shape of the excluded region around ``[1, ∞)``.

    Returns
    -------
    tuple
        ``(exact, asymptotic, defect)`` with ``defect = |exact / asymptotic - 1|``.

    Raises
    ------
    ExcludedRegion

    """
    if not eps > 0:
        raise ValueError("eps must be positive, got {}".format(eps))
    if in_excluded_region(z, eps, theta, xi):
        raise ExcludedRegion("z={} lies in the excluded region near [1, inf)".format(z))
    z = complex(z)
    base = math.exp(-eps)
    exact = qpochhammer(z, base, int(N)) / qpochhammer(math.exp(-eps * alpha) * z, base, int(N))
    asym = cmath.exp(alpha * (cmath.log(1 - z) - cmath.log(1 - math.exp(-eps * N) * z)))
    return complex(exact), asym, abs(exact / asym - 1)


def finite_g_product(profile, chi, eps, w):
    """
    The ``L`` column factors of the finite moment integrand at scale ``ε``.

    ``Π (1 - q x/(t w)) / (1 - q x / w)`` over ``-`` columns right of ``χ``
    times ``Π (1 - x w / q) / (1 - t x w / q)`` over ``+`` columns left of
    it; for ``u = v = 0`` this tends to ``G_χ(w)^β``.

    """
    spec, _, qt = profile.finite_graph(eps)
    q, t = qt.q, qt.t
    i = profile.column_at(chi, eps)
    w = complex(w)
    log_value = 0j
    for col in spec.columns:
        a, b, x = spec.column(col)
        if a != "L":
            continue
        if b == "-" and col >= i:
            log_value += cmath.log(1 - q * x / (t * w)) - cmath.log(1 - q * x / w)
        elif b == "+" and col < i:
            log_value += cmath.log(1 - x * w / q) - cmath.log(1 - t * x * w / q)
    return cmath.exp(log_value)


def finite_g_defect(profile, chi, eps_ladder, w):
    """``|finite_g_product / G_χ(w)^β - 1|`` along a ladder of scales."""
    limit = g_chi_product(profile, chi).power(w, profile.beta)
    out = np.array([abs(finite_g_product(profile, chi, eps, w) / limit - 1) for eps in eps_ladder])
    logger.debug("finite G defects along %s: %s", list(eps_ladder), out)
    return out
