"""Reflection, Cauchy and exchange identities as pairs of truncated series.

Every function here returns ``(lhs, rhs)`` for one instance of an identity;
the two sides are computed independently (branching sums on one side, Θ / H
products on the other) and must agree coefficientwise. The identities are
checked with single-letter alphabets ``[x]`` or dual letters ``[x]'``
scaled by the formal variable ``s``.

"""
import logging
import math
from fractions import Fraction

from railyardpy.macdonald.coefficients import (
    b_total,
    boundary_allows,
    boundary_coweight,
    boundary_weight,
    skew_single,
)
from railyardpy.macdonald.oracle import oracle_for, power_norm
from railyardpy.macdonald.pairing import free_boundary_series, pair_factors
from railyardpy.macdonald.products import factors_series
from railyardpy.macdonald.series import FormalSeries
from railyardpy.macdonald.specialization import Specialization
from railyardpy.macdonald.theta import kernel_series, theta_series
from railyardpy.partitions import EMPTY, Partition, conjugate, enumerate_partitions

logger = logging.getLogger(__name__)

#: Marker used by the restricted (even / even-conjugate) sums.
RESTRICTED = {"oa": "eoa", "el": "deel"}


def _letter(x, dual):
    return Specialization.dual_of(x) if dual else Specialization.ordinary(x)


def _allowed(restriction):
    if restriction is None:
        return lambda lam: True
    return lambda lam: boundary_allows(lam, restriction)


def _up_sum(eta, kind, dual, x, degree, qt, weight, allowed, v=None):
    """``Σ_{λ ⊇ η} weight(λ) K_{λ/η}(x s) v^{|λ|}``."""
    eta = Partition(eta)
    coeffs = [qt.one * 0] * (degree + 1)
    for lam in enumerate_partitions(eta.size + degree):
        d = lam.size - eta.size
        if d < 0 or not allowed(lam):
            continue
        c = skew_single(kind, dual, lam, eta, qt.one, qt)
        if c == 0:
            continue
        term = weight(lam) * c * x ** d
        if v is not None:
            term = term * v ** lam.size
        coeffs[d] += term
    return FormalSeries(coeffs, degree)


def _down_sum(eta, kind, dual, x, degree, qt, weight, allowed, v=None):
    """``Σ_{μ ⊆ η} weight(μ) K_{η/μ}(v^2 x s) v^{|μ|}``."""
    eta = Partition(eta)
    coeffs = [qt.one * 0] * (degree + 1)
    scale = x if v is None else v * v * x
    for mu in enumerate_partitions(eta.size):
        d = eta.size - mu.size
        if d > degree or not allowed(mu):
            continue
        c = skew_single(kind, dual, eta, mu, qt.one, qt)
        if c == 0:
            continue
        term = weight(mu) * c * scale ** d
        if v is not None:
            term = term * v ** mu.size
        coeffs[d] += term
    return FormalSeries(coeffs, degree)


def _perturbed(weight, qt, enabled):
    if not enabled:
        return weight
    bump = qt.one + qt.one / 101

    def out(lam):
        w = weight(lam)
        return w * bump if Partition(lam) == Partition([1]) else w

    return out


def reflection(eta, marker, x, qt, degree, dual=False, restricted=False, v=None, perturb=False):
    """
    ``Σ_λ b^*_λ P_{λ/η}(x) v^{|λ|} = Θ(v x) Σ_μ b^*_μ Q_{η/μ}(v^2 x) v^{|μ|}``.

    With ``restricted`` the sums run over even partitions (``oa``, Θ_eoa) or
    partitions with even conjugate (``el``, Θ_deel). ``v=None`` is the
    fugacity-free form.

    """
    theta_marker = RESTRICTED[marker] if restricted else marker
    allowed = _allowed(theta_marker if restricted else None)
    weight = _perturbed(lambda lam: boundary_weight(lam, marker, qt), qt, perturb)
    lhs = _up_sum(eta, "P", dual, x, degree, qt, weight, allowed, v=v)
    vx = x if v is None else v * x
    rhs = theta_series(theta_marker, _letter(vx, dual), degree, qt) * _down_sum(
        eta, "Q", dual, x, degree, qt, weight, allowed, v=v
    )
    return lhs, rhs


def coreflection(eta, marker, x, qt, degree, dual=False, restricted=False, v=None, theta=None):
    """
    ``Σ_φ Q_{φ/η}(x) v^{|φ|} / b̄^*_φ = Θ(v x) Σ_μ P_{η/μ}(v^2 x) v^{|μ|} / b̄^*_μ``.

    ``theta`` overrides the Θ marker (used to run printed variants).

    """
    theta_marker = theta or (RESTRICTED[marker] if restricted else marker)
    allowed = _allowed(RESTRICTED[marker] if restricted else None)

    def weight(lam):
        return 1 / boundary_coweight(lam, marker, qt)

    lhs = _up_sum(eta, "Q", dual, x, degree, qt, weight, allowed, v=v)
    vx = x if v is None else v * x
    rhs = theta_series(theta_marker, _letter(vx, dual), degree, qt) * _down_sum(
        eta, "P", dual, x, degree, qt, weight, allowed, v=v
    )
    return lhs, rhs


def even_reflection(eta, x, qt, degree, weight_marker="oa", dual=False):
    """
    ``Σ_{ν even} b_ν P_{ν/η}(x) = Θ_eoa(x) Σ_{μ even} b_μ Q_{η/μ}(x)``.

    The odd-arm weight is the identity; ``weight_marker="el"`` runs the
    printed variant.

    """
    allowed = _allowed("eoa")

    def weight(lam):
        return boundary_weight(lam, weight_marker, qt)

    lhs = _up_sum(eta, "P", dual, x, degree, qt, weight, allowed)
    rhs = theta_series("eoa", _letter(x, dual), degree, qt) * _down_sum(
        eta, "Q", dual, x, degree, qt, weight, allowed
    )
    return lhs, rhs


def _sum_over(lams, term, degree, qt):
    coeffs = [qt.one * 0] * (degree + 1)
    for d, value in (term(lam) for lam in lams):
        if value != 0 and 0 <= d <= degree:
            coeffs[d] += value
    return FormalSeries(coeffs, degree)


def skew_cauchy(lam, mu, x, y, qt, degree, line=1, form="derived", perturb=False):
    """
    The three skew Cauchy identities, as series in the scale of ``x``.

    ``line=1``: ``Σ_φ P_{φ/λ}(x) Q_{φ/μ}(y) = Π(x, y) Σ_σ P_{μ/σ}(x) Q_{λ/σ}(y)``.

    ``line=2``: ``Σ_φ Q_{φ'/λ'}(x; t, q) Q_{φ/μ}(y)
    = Π0(x, y) Σ_σ Q_{μ'/σ'}(x; t, q) Q_{λ/σ}(y)``.

    ``line=3``: ``Σ_φ P_{φ/λ}(x) P_{φ'/μ'}(y; t, q)
    = Π0(x, y) Σ_σ P_{μ/σ}(x) P_{λ'/σ'}(y; t, q)``; ``form="printed"``
    puts ``λ'`` in place of ``μ'`` on the left.

    The ``(t, q)`` factors are computed from conjugate partitions with
    swapped parameters, independently of the dual-letter code path.

    """
    lam, mu = Partition(lam), Partition(mu)
    tq = qt.swap()
    one = qt.one
    bound = max(lam.size, mu.size) + degree
    universe = enumerate_partitions(bound)
    bump = (one + one / 101) if perturb else one

    def qtq(kind, big, small, z):
        # K_{big'/small'}(z; t, q)
        c = skew_single(kind, False, conjugate(big), conjugate(small), one, tq)
        return c * z ** (big.size - small.size) if c != 0 else c

    def single(kind, big, small, z):
        c = skew_single(kind, False, big, small, one, qt)
        return c * z ** (big.size - small.size) if c != 0 else c

    if line == 1:
        kernel = "Pi"

        def left(phi):
            return phi.size - lam.size, single("P", phi, lam, x) * single("Q", phi, mu, y) * (
                bump if phi == Partition([1]) else one
            )

        def right(sigma):
            return mu.size - sigma.size, single("P", mu, sigma, x) * single("Q", lam, sigma, y)

    elif line == 2:
        kernel = "Pi0"

        def left(phi):
            return phi.size - lam.size, qtq("Q", phi, lam, x) * single("Q", phi, mu, y)

        def right(sigma):
            return mu.size - sigma.size, qtq("Q", mu, sigma, x) * single("Q", lam, sigma, y)

    elif line == 3:
        kernel = "Pi0"
        lower = mu if form == "derived" else lam

        def left(phi):
            return phi.size - lam.size, single("P", phi, lam, x) * qtq("P", phi, lower, y)

        def right(sigma):
            return mu.size - sigma.size, single("P", mu, sigma, x) * qtq("P", lam, sigma, y)

    else:
        raise ValueError("line should be 1, 2 or 3, got {}".format(line))
    lhs = _sum_over(universe, left, degree, qt)
    sums = _sum_over(enumerate_partitions(max(lam.size, mu.size)), right, degree, qt)
    rho_x, rho_y = Specialization.ordinary(x), Specialization.ordinary(y)
    rhs = kernel_series(kernel, rho_x, rho_y, degree, qt) * sums
    return lhs, rhs


def exchange(lam, mu, x, y, qt, line=1):
    """
    Finite exchange identities (returned as scalars).

    ``line=1``: ``Σ_φ P_{φ/λ}(x) P_{μ/φ}(y) = Σ_ν P_{ν/λ}(y) P_{μ/ν}(x)``.

    ``line=2``: ``Σ_φ P_{φ/λ}(x) Q_{μ'/φ'}(y; t, q) = Σ_ν Q_{ν'/λ'}(y; t, q) P_{μ/ν}(x)``.

    """
    lam, mu = Partition(lam), Partition(mu)
    tq = qt.swap()
    one = qt.one
    inner = [p for p in enumerate_partitions(mu.size) if mu.contains(p) and p.contains(lam)]
    if line == 1:
        lhs = sum(
            (
                skew_single("P", False, phi, lam, x, qt) * skew_single("P", False, mu, phi, y, qt)
                for phi in inner
            ),
            one * 0,
        )
        rhs = sum(
            (
                skew_single("P", False, nu, lam, y, qt) * skew_single("P", False, mu, nu, x, qt)
                for nu in inner
            ),
            one * 0,
        )
    elif line == 2:
        lhs = sum(
            (
                skew_single("P", False, phi, lam, x, qt)
                * skew_single("Q", False, conjugate(mu), conjugate(phi), y, tq)
                for phi in inner
            ),
            one * 0,
        )
        rhs = sum(
            (
                skew_single("Q", False, conjugate(nu), conjugate(lam), y, tq)
                * skew_single("P", False, mu, nu, x, qt)
                for nu in inner
            ),
            one * 0,
        )
    else:
        raise ValueError("line should be 1 or 2, got {}".format(line))
    return lhs, rhs


def pairing(x, y, cl, cr, u, v, qt, degree, form="derived", perturb=False):
    """
    The pairing as a double sum against its product form.

    ``u`` and ``v`` carry one power of ``s`` each, so both sides are finite
    at every order. The letters are ``[x]`` and ``[y]``.

    """
    one = qt.one
    lhs_coeffs = [one * 0] * (degree + 1)
    universe = enumerate_partitions(degree)
    allow_l = _allowed(cl if cl in ("deel", "eoa") else None)
    allow_r = _allowed(cr if cr in ("deel", "eoa") else None)
    bump = (one + one / 101) if perturb else one
    for nu in enumerate_partitions(degree // 2):
        for lam in universe:
            if not allow_l(lam):
                continue
            p = skew_single("P", False, lam, nu, x, qt)
            if p == 0:
                continue
            w_l = boundary_weight(lam, cl, qt) * u ** lam.size
            if lam == Partition([1]):
                w_l = w_l * bump
            for phi in universe:
                d = lam.size + phi.size
                if d > degree or not allow_r(phi):
                    continue
                qv = skew_single("Q", False, phi, nu, y, qt)
                if qv == 0:
                    continue
                lhs_coeffs[d] += w_l * p * qv * v ** phi.size / boundary_coweight(phi, cr, qt)
    lhs = FormalSeries(lhs_coeffs, degree)
    rho1, rho2 = Specialization.ordinary(x), Specialization.ordinary(y)
    depth = degree // 2 + 1
    factors = pair_factors(rho1, rho2, cl, cr, u, v, qt, depth, form, u_degree=1, v_degree=1)
    rhs = factors_series(factors, degree, one) * free_boundary_series(
        cl, cr, u * v, qt, degree, grade=2
    )
    return lhs, rhs


def _p_monomials(coefs_linear, coefs_square, weight, one):
    """
    ``exp(Σ_k (c_k p_k + e_k p_k^2) / k)`` as ``{partition: coefficient}`` to p-weight ``weight``.

    """
    poly = {EMPTY: one}
    for k in range(1, weight + 1):
        c = coefs_linear.get(k, one * 0)
        e = coefs_square.get(k, one * 0)
        # exp(c p_k / k) exp(e p_k^2 / k) = Σ_j a_j p_k^j
        series = {}
        for i in range(weight // k + 1):
            for j in range((weight // k - i) // 2 + 1):
                n = i + 2 * j
                coef = (c / k) ** i / math.factorial(i) * (e / k) ** j / math.factorial(j)
                series[n] = series.get(n, one * 0) + coef * one
        nxt = {}
        for mu, a in poly.items():
            for n, b in series.items():
                if b == 0 or mu.size + n * k > weight:
                    continue
                key = Partition(sorted(list(mu) + [k] * n, reverse=True))
                nxt[key] = nxt.get(key, one * 0) + a * b
        poly = nxt
    return poly


def quadratic_scalar_product(d, s, u, qt, degree):
    """
    Quadratic-exponent scalar product rule, to p-weight ``degree``.

    ``<exp Σ (d_k p_k + s_k p_k^2)/k, exp Σ u_k p_k/k>`` against
    ``exp Σ [(1-q^k)/(1-t^k) d_k u_k + ((1-q^k)/(1-t^k))^2 s_k u_k^2] / k``,
    both as series in ``τ`` with ``p_μ`` of weight ``|μ|`` paired at
    ``τ^{|μ|}``.

    Parameters
    ----------
    d, s, u : dict
        ``k -> coefficient`` for ``k >= 1``.

    """
    one = qt.one
    left = _p_monomials(d, s, degree, one)
    right = _p_monomials(u, {}, degree, one)
    lhs_coeffs = [one * 0] * (degree + 1)
    for mu, a in left.items():
        b = right.get(mu)
        if b:
            lhs_coeffs[mu.size] += a * b * power_norm(mu, qt)
    exponent = [one * 0] * (degree + 1)
    for k in range(1, degree + 1):
        r = (1 - qt.q ** k) / (1 - qt.t ** k)
        exponent[k] += r * d.get(k, 0) * u.get(k, 0) / k
        if 2 * k <= degree:
            exponent[2 * k] += r * r * s.get(k, 0) * u.get(k, 0) ** 2 / k
    rhs = FormalSeries(exponent, degree).exp()
    return FormalSeries(lhs_coeffs, degree), rhs


def theta_forms(marker, rho, qt, degree):
    """Product form against exponential form of ``Θ_marker``."""
    return (
        theta_series(marker, rho, degree, qt, form="product"),
        theta_series(marker, rho, degree, qt, form="exponential"),
    )


def theta_el_printed_exponential(rho, qt, degree):
    """
    The printed exponential form of ``Θ_el`` with ``p_{2n-1}/(2n-1)`` weighted
    by ``(1-t^n)/(1-q^n)``, against the product form.

    """
    scaled = rho.scaled(1, shift=1)
    exponent = FormalSeries.constant(qt.one * 0, degree)
    for n in range(1, degree + 1):
        kappa = (1 - qt.t ** n) / (1 - qt.q ** n)
        odd = scaled.power_sum_series(2 * n - 1, qt, degree)
        p_n = scaled.power_sum_series(n, qt, degree)
        exponent = exponent + odd * (kappa / (2 * n - 1)) + p_n * p_n * (kappa / (2 * n))
    return theta_series("el", rho, degree, qt, form="product"), exponent.exp()


def theta_oracle_sum(marker, rho, qt, degree):
    """
    ``Θ_marker(sρ)`` against ``Σ_λ b^marker_λ P_λ(ρ) s^{|λ|}`` from the oracle.

    """
    oracle = oracle_for(qt)
    allowed = _allowed(marker if marker in ("deel", "eoa") else None)
    coeffs = [qt.one * 0] * (degree + 1)
    for lam in enumerate_partitions(degree):
        if allowed(lam):
            coeffs[lam.size] += boundary_weight(lam, marker, qt) * oracle.evaluate_P(lam, rho)
    return theta_series(marker, rho, degree, qt), FormalSeries(coeffs, degree)


def cauchy_oracle_sum(rho1, rho2, qt, degree):
    """``H(sρ1; ρ2)`` against ``Σ_λ P_λ(ρ1) Q_λ(ρ2) s^{|λ|}`` from the oracle."""
    oracle = oracle_for(qt)
    coeffs = [qt.one * 0] * (degree + 1)
    for lam in enumerate_partitions(degree):
        coeffs[lam.size] += oracle.evaluate_P(lam, rho1) * oracle.evaluate_Q(lam, rho2)
    return kernel_series("H", rho1, rho2, degree, qt), FormalSeries(coeffs, degree)


def b_family_products(lam, qt):
    """``(b^{el} b^{ol}, b^{oa} b^{ea})`` against ``(b_λ, b_λ)``."""
    return (
        (boundary_weight(lam, "el", qt) * boundary_coweight(lam, "el", qt), b_total(lam, qt)),
        (boundary_weight(lam, "oa", qt) * boundary_coweight(lam, "oa", qt), b_total(lam, qt)),
    )


DEFAULT_QT_SAMPLES = (
    (Fraction(1, 2), Fraction(1, 3)),
    (Fraction(2, 5), Fraction(1, 7)),
    (Fraction(1, 3), Fraction(3, 4)),
    (Fraction(3, 5), Fraction(2, 9)),
    (Fraction(1, 4), Fraction(1, 4)),
)
