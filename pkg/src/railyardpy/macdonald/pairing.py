"""The doubly-free-boundary pairing of two specializations.

For boundary markers ``cl, cr`` and fugacities ``u, v`` the pairing is

    Pair(ρ1, ρ2) = Σ_{λ, φ, ν} b^{cl}_λ / b̄^{cr}_φ u^{|λ|} v^{|φ|}
                   P_{λ/ν}(ρ1) Q_{φ/ν}(ρ2).

Two reflections (one at each boundary) and one skew Cauchy exchange turn it
into ``Pair((uv)^2 ρ1, (uv)^2 ρ2)`` times Θ and H factors, so it is an
infinite product times the free-boundary sum
``Σ_τ b^{cl}_τ / b̄^{cr}_τ (uv)^{|τ|}``.

"""
from railyardpy.macdonald.coefficients import (
    MARKERS,
    boundary_allows,
    boundary_coweight,
    boundary_weight,
)
from railyardpy.macdonald.series import FormalSeries
from railyardpy.macdonald.theta import kernel_factors, theta_factors
from railyardpy.partitions import enumerate_partitions

FORMS = ("derived", "printed")


def _scale(rho, c, shift):
    return rho.scaled(c, shift=shift)


def pair_block(rho1, rho2, cl, cr, u, v, qt, k, form="derived", u_degree=0, v_degree=0):
    """
    Factors of the ``k``-th reflection cycle of the pairing.

    Parameters
    ----------
    rho1, rho2 : ~railyardpy.macdonald.specialization.Specialization
    cl, cr : str
        Boundary markers.
    u, v : scalar
    qt : ~railyardpy.macdonald.params.QTParams
    k : int
        Cycle index, starting at 0.
    form : str
        ``"derived"`` or ``"printed"``; the printed form exchanges the two
        markers on the ``ρ2`` factors.
    u_degree, v_degree : int
        Degree of ``u`` and ``v`` in the formal variable.

    Returns
    -------
    list
        Θ and H factors.

    """
    if form not in FORMS:
        raise ValueError("form should be one of {}, got {!r}".format(FORMS, form))
    cyc = (u * v) ** (2 * k)
    dcyc = 2 * k * (u_degree + v_degree)
    m2_left, m2_right = (cr, cl) if form == "derived" else (cl, cr)
    out = []
    out += theta_factors(cl, _scale(rho1, u * cyc, u_degree + dcyc), qt)
    out += theta_factors(cr, _scale(rho1, u * u * v * cyc, 2 * u_degree + v_degree + dcyc), qt)
    out += theta_factors(m2_left, _scale(rho2, v * cyc, v_degree + dcyc), qt)
    out += theta_factors(m2_right, _scale(rho2, u * v * v * cyc, u_degree + 2 * v_degree + dcyc), qt)
    for j in (4 * k + 2, 4 * k + 4):
        scaled = _scale(rho1, (u * v) ** j, j * (u_degree + v_degree))
        out += kernel_factors("H", scaled, rho2, qt)
    return out


def pair_factors(rho1, rho2, cl, cr, u, v, qt, depth, form="derived", u_degree=0, v_degree=0):
    """
    Product part of the pairing, truncated after ``depth`` reflection cycles.

    """
    for m in (cl, cr):
        if m not in MARKERS:
            raise ValueError("marker should be one of {}, got {!r}".format(MARKERS, m))
    out = []
    for k in range(depth):
        out += pair_block(rho1, rho2, cl, cr, u, v, qt, k, form, u_degree, v_degree)
    return out


def free_boundary_terms(cl, cr, qt, max_size):
    """
    ``[(|τ|, b^{cl}_τ / b̄^{cr}_τ)]`` over partitions allowed by both markers.

    """
    out = []
    for tau in enumerate_partitions(max_size):
        if boundary_allows(tau, cl) and boundary_allows(tau, cr):
            out.append((tau.size, boundary_weight(tau, cl, qt) / boundary_coweight(tau, cr, qt)))
    return out


def free_boundary_series(cl, cr, uv, qt, degree, grade=1):
    """
    ``Σ_τ b^{cl}_τ / b̄^{cr}_τ (uv)^{|τ|} s^{grade |τ|}`` truncated at ``s^degree``.

    """
    coeffs = [qt.one * 0] * (degree + 1)
    if grade <= 0:
        raise ValueError("grade must be positive, got {}".format(grade))
    for size, w in free_boundary_terms(cl, cr, qt, degree // grade):
        coeffs[size * grade] += w * uv ** size
    return FormalSeries(coeffs, degree)
