"""Moments of the observable ``γ_k`` and the Laplace transform of the height.

For a column ``i`` with ``a_i = L`` the first moment of ``γ_1(μ^(i))`` is a
single contour integral

    E γ_1(μ^(i)) = (1/2πi) ∮ H(ρ_R; σ_w) H(ρ_L; σ'_w)
                   Pair(ρ_R ∪ σ'_w, ρ_L ∪ σ_w) / Pair(ρ_R, ρ_L) dw / w

with ``ρ_L = X^+ ∪ u² X^-`` over the columns left of ``i``, ``ρ_R = X^- ∪
v² X^+`` over the others, ``σ_w = [q²/(tw)] - [q/(tw)]`` and
``σ'_w = [w] - [w/q]``. The contour encloses 0 and every singularity of
negative degree in ``w``.

"""
import logging
import math

import numpy as np
from scipy.integrate import quad

from railyardpy import constant
from railyardpy.asymptotics.gfactors import f_depth, master_product
from railyardpy.asymptotics.ledger import check_limit_contour, limit_contour
from railyardpy.contour import contour_integral, double_contour_integral, separating_contour
from railyardpy.exceptions import ColumnOutOfRange, ContourCrossesSingularity
from railyardpy.macdonald.pairing import pair_block
from railyardpy.macdonald.products import ledger_of
from railyardpy.macdonald.specialization import Letter, Specialization
from railyardpy.macdonald.theta import kernel_factors
from railyardpy.partition_function import float_params, pair_ledger
from railyardpy.partitions import Partition
from railyardpy.railyard.height import charge, column_deformed_profile
from railyardpy.sampler import exact_measure, mc_estimate

logger = logging.getLogger(__name__)


def gamma_k(lam, k, qt):
    """
    ``γ_k(λ) = (1 - t^{-k}) Σ_i q^{k λ_i} t^{k(1-i)} + t^{-k ℓ(λ)}``.

    Parameters
    ----------
    lam : ~railyardpy.partitions.Partition
    k : int
        Positive.
    qt : ~railyardpy.macdonald.params.QTParams

    Returns
    -------
    Fraction or float

    """
    if k < 1:
        raise ValueError("k must be a positive integer, got {}".format(k))
    q, t = qt.q, qt.t
    if t == 0 or t == 1:
        raise ValueError("gamma_k needs t different from 0 and 1, got {}".format(t))
    lam = Partition(lam)
    total = qt.one * 0
    for i, part in enumerate(lam, start=1):
        total = total + q ** (k * part) * t ** (k * (1 - i))
    return (1 - t ** (-k)) * total + t ** (-k * len(lam))


def _check_column(spec, i):
    if not spec.l <= i <= spec.r + 1:
        raise ColumnOutOfRange("column {} outside [{}, {}]".format(i, spec.l, spec.r + 1))


def expect_gamma_exact(spec, bc, qt, i, k=1, pol=None):
    """
    ``E γ_k(μ^(i))`` summed over the enumerated universe of :func:`~railyardpy.sampler.exact_measure`.

    Raises
    ------
    ColumnOutOfRange
    UniverseTooLarge

    """
    _check_column(spec, i)
    table = exact_measure(spec, bc, qt, pol)
    return table.expectation(lambda s: gamma_k(s.at(spec, i), k, qt))


def sigma_letters(qt):
    """``(σ_w, σ'_w)``: the two insertion alphabets in the contour variable."""
    q, t = qt.q, qt.t
    sigma = Specialization([Letter(q * q / t, sign=1, degree=-1), Letter(q / t, sign=-1, degree=-1)])
    sigma_prime = Specialization([Letter(1.0, sign=1, degree=1), Letter(1 / q, sign=-1, degree=1)])
    return sigma, sigma_prime


def moment_alphabets(spec, bc, i):
    """``(ρ_L, ρ_R)`` seen from the partition ``μ^(i)``."""
    left = range(spec.l, i)
    right = range(i, spec.r + 1)
    u2, v2 = float(bc.u) ** 2, float(bc.v) ** 2
    rho_l = spec.plus_letters(left) | spec.minus_letters(left).scaled(u2)
    rho_r = spec.minus_letters(right) | spec.plus_letters(right).scaled(v2)
    return rho_l, rho_r


def _split_points(ledger):
    inner, outer = [], []
    for point, side, _ in ledger.singular_points():
        (inner if side < 0 else outer).append(point)
    return np.array(inner, dtype=np.complex128), np.array(outer, dtype=np.complex128)


def _admissible(contour, ledger, margin=constant.CONTOUR_MARGIN):
    inner, outer = _split_points(ledger)
    contour.check(np.concatenate([inner, outer]), margin)
    if not np.all(contour.encloses(np.concatenate([[0.0], inner]))) or np.any(contour.encloses(outer)):
        raise ContourCrossesSingularity("{!r} does not separate the singularities in w".format(contour))


def moment_integrand(spec, bc, qt, i, contour=None, K=None, form="derived", tol=constant.PRODUCT_TOL):
    """
    Integrand ledger, contour and normalization of the first moment at column ``i``.

    Returns
    -------
    tuple
        ``(ledger, contour, normalization)``.

    """
    _check_column(spec, i)
    if i <= spec.r and spec.column(i)[0] != "L":
        raise ValueError("column {} is an R column; the moment formula needs a_i = L".format(i))
    qf = float_params(qt)
    rho_l, rho_r = moment_alphabets(spec, bc, i)
    sigma, sigma_prime = sigma_letters(qf)
    base = ledger_of(kernel_factors("H", rho_r, sigma, qf) + kernel_factors("H", rho_l, sigma_prime, qf))
    rho1, rho2 = rho_r | sigma_prime, rho_l | sigma
    u, v = float(bc.u), float(bc.v)
    if contour is None:
        first = base * ledger_of(pair_block(rho1, rho2, bc.c_l, bc.c_r, u, v, qf, 0, form))
        inner, outer = _split_points(first)
        contour = separating_contour(np.concatenate([[0.0], inner]), outer)
        margin = constant.CONTOUR_MARGIN if len(contour.circles) == 1 else constant.CONTOUR_MARGIN / 4
    else:
        margin = constant.CONTOUR_MARGIN
    nodes, _ = contour.nodes(16)
    pair, depth = pair_ledger(rho1, rho2, bc, qf, depth=K, tol=tol, nodes=nodes, form=form)
    ledger = base * pair
    _admissible(contour, ledger, margin)
    norm, _ = pair_ledger(rho_r, rho_l, bc, qf, depth=K, tol=tol, form=form)
    logger.debug("moment integrand at column %d: %d atoms, depth %d", i, len(ledger), depth)
    return ledger, contour, norm.evaluate(1.0).real


def expect_gamma_contour(
    spec, bc, qt, i, g=1, contour=None, K=None, form="derived", tol=constant.QUADRATURE_TOL, workers=None
):
    """
    ``E γ_1(μ^(i))`` by numerical quadrature of its contour integral.

    Parameters
    ----------
    spec : ~railyardpy.railyard.spec.RailYardSpec
    bc : ~railyardpy.railyard.spec.BoundaryCondition
    qt : ~railyardpy.macdonald.params.QTParams
    i : int
        In ``[l, r + 1]``; column ``i`` must be an ``L`` column when ``i <= r``.
    g : int
        Only ``g = 1`` is supported.
    contour : ~railyardpy.contour.ContourSpec or None
        A centred circle separating the singularities by default, or a
        union of circles around clusters of the enclosed ones when no centred
        circle does.
    K : int or None
        Reflection cycles of the pairing; adaptive when ``None``.
    form : str
    tol : float
    workers : int or None

    Returns
    -------
    float

    Raises
    ------
    ContourCrossesSingularity
    QuadratureNotConverged

    """
    if g != 1:
        raise NotImplementedError("only single insertions (g = 1) are supported")
    ledger, contour, norm = moment_integrand(spec, bc, qt, i, contour, K, form)

    def integrand(w):
        return ledger.evaluate(w) / w

    value = contour_integral(integrand, contour, tol, workers=workers)
    return value.real / norm


def laplace_height_exact(spec, s, m, k, qt):
    """
    ``∫ h(ỹ) t^{kỹ} dỹ`` over the deformed height profile of ``μ^(m)`` in closed form.

    Equals ``2 t^{k c} γ_k(μ^(m)) / (k² log t log q)`` with ``c`` the
    translated charge.

    Raises
    ------
    ColumnOutOfRange

    """
    qf = float_params(qt)
    c = charge(spec, s, m, qf)
    lam = s.at(spec, m)
    return 2 * qf.t ** (k * c) * float(gamma_k(lam, k, qf)) / (k * k * math.log(qf.t) * math.log(qf.q))


def laplace_height_numeric(spec, s, m, k, qt):
    """
    The integral of :func:`laplace_height_exact` by quadrature of the deformed profile.

    Each linear piece is integrated with :func:`scipy.integrate.quad`; the
    half-line above the last knot, where the height grows with slope
    ``2 / r``, is added in closed form.

    """
    qf = float_params(qt)
    profile = column_deformed_profile(spec, s, m, qf)
    a = k * math.log(qf.t)
    total = 0.0
    knots = profile.knots
    for (y0, _), (y1, _) in zip(knots, knots[1:]):
        piece, _ = quad(lambda y: float(profile(y)) * math.exp(a * y), y0, y1, epsabs=1e-14, epsrel=1e-12)
        total += piece
    y_end, h_end = knots[-1]
    total += math.exp(a * y_end) * (-h_end / a + profile.slope / (a * a))
    return total


def _limit_product(profile, chi, K, form):
    if K is None:
        K = f_depth(profile, chi, form=form)
    return master_product(profile, chi, K, form)


def expect_gamma_limit(profile, chi, g=1, contour=None, K=None, form="derived", tol=constant.QUADRATURE_TOL):
    """
    ``lim E γ_g(μ^(χ/ε)) = (1/2πi) ∮ [G_χ(w) Π F_{u,v,k}(w)]^{gβ} dw / w``.

    """
    product = _limit_product(profile, chi, K, form)
    contour = limit_contour(product) if contour is None else check_limit_contour(product, contour)
    gamma = g * profile.beta
    value = contour_integral(lambda w: product.power(w, gamma) / w, contour, tol)
    return value.real


def covariance_contours(product_d, product_h, factors=(1.05, 1.02, 1.01)):
    """
    Nested contours for :func:`covariance_contour`: the ``z`` one inside the ``w`` one.

    Both are built from the joint singular set; the outer one is a dilation
    of the inner one.

    """
    joint = product_d * product_h
    inner = limit_contour(joint)
    for factor in factors:
        outer = inner.scaled(factor)
        try:
            check_limit_contour(product_d, inner)
            check_limit_contour(product_h, outer, constant.CONTOUR_MARGIN / 4)
            return inner, outer
        except ContourCrossesSingularity:
            continue
    raise ContourCrossesSingularity("no nested pair of contours found around {!r}".format(inner))


def covariance_contour(
    profile,
    chi_d,
    chi_h,
    g_d=1,
    g_h=1,
    contours=None,
    K=None,
    form="derived",
    tol=constant.QUADRATURE_TOL,
):
    """
    Limiting covariance of the rescaled observables at ``χ_d <= χ_h``.

    ``(n² α β² g_d g_h / (2πi)²) ∬ Φ_{χ_d}(z)^{g_d β} Φ_{χ_h}(w)^{g_h β} / (z - w)² dz dw``
    with ``Φ_χ = G_χ Π F_{u,v,k}`` and the ``z`` contour inside the ``w`` one.

    Parameters
    ----------
    profile : ~railyardpy.asymptotics.profile.AsymptoticProfile
    chi_d, chi_h : float
    g_d, g_h : int
    contours : tuple or None
        ``(z contour, w contour)``.
    K : int or None
    form : str
    tol : float

    Returns
    -------
    float

    Raises
    ------
    ContoursNotDisjoint
    QuadratureNotConverged

    """
    if chi_d > chi_h:
        raise ValueError("need chi_d <= chi_h, got {} > {}".format(chi_d, chi_h))
    product_d = _limit_product(profile, chi_d, K, form)
    product_h = _limit_product(profile, chi_h, K, form)
    if contours is None:
        contours = covariance_contours(product_d, product_h)
    inner, outer = contours
    beta = profile.beta

    def integrand(z, w):
        fz = product_d.power(z.ravel(), g_d * beta).reshape(z.shape)
        fw = product_h.power(w.ravel(), g_h * beta).reshape(w.shape)
        return fz * fw / (z - w) ** 2

    value = double_contour_integral(integrand, inner, outer, tol)
    scale = profile.n ** 2 * profile.alpha * beta ** 2 * g_d * g_h
    return scale * value.real


def rescaled_gamma_variance(sampler, i_d, i_h, eps, n_samples, g=1, rng=None, workers=None):
    """
    Monte-Carlo ``Cov(γ_g(μ^(i_d)), γ_g(μ^(i_h))) / ε²``.

    Returns
    -------
    tuple
        ``(value, stderr)``; the error is the delta-method estimate from the
        sample fourth moments.

    """
    spec, qt = sampler.spec, sampler.qt

    def observable(s):
        return [float(gamma_k(s.at(spec, i_d), g, qt)), float(gamma_k(s.at(spec, i_h), g, qt))]

    est = mc_estimate(sampler, observable, n_samples, rng, workers)
    cov = est.covariance[0, 1]
    spread = math.sqrt(est.covariance[0, 0] * est.covariance[1, 1] + cov * cov)
    return cov / eps ** 2, spread / math.sqrt(n_samples) / eps ** 2


def mean_rescaled_height(sampler, m, kappas, eps, n_samples, rng=None, workers=None):
    """
    Monte-Carlo mean of ``ε h(κ / ε)`` on the deformed profile of ``μ^(m)``.

    Parameters
    ----------
    sampler : ~railyardpy.sampler.SequentialSampler
    m : int
        Column index.
    kappas : array_like
        Rescaled vertical coordinates.
    eps : float

    Returns
    -------
    tuple
        ``(mean, stderr)`` arrays shaped like ``kappas``.

    """
    if n_samples < 2:
        raise ValueError("n_samples must be at least 2, got {}".format(n_samples))
    ys = np.asarray(kappas, dtype=float) / eps
    states = sampler.sample(n_samples, rng, workers)
    values = np.array(
        [eps * column_deformed_profile(sampler.spec, s, m, sampler.qt)(ys) for s in states]
    )
    logger.debug("rescaled heights at column %d from %d samples", m, n_samples)
    return values.mean(axis=0), values.std(axis=0, ddof=1) / math.sqrt(n_samples)
