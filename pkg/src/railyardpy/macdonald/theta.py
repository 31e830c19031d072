"""Θ boundary generating functions and the H / Π / Π0 kernels.

For a marker ``*`` the boundary generating function is
``Θ_*(ρ) = Σ_λ b^*_λ P_λ(ρ)``, summed over all partitions (``el``, ``oa``),
partitions with even conjugate (``deel``) or even partitions (``eoa``).
Each has a product form over the letters of ``ρ`` and an exponential form in
the power sums ``p_n(ρ)``. Both are available here, as truncated
:class:`~railyardpy.macdonald.series.FormalSeries` (exact or float) and as
float values through truncated q-Pochhammer products.

"""
import logging

from railyardpy import constant
from railyardpy.exceptions import PoleEncountered
from railyardpy.macdonald.coefficients import MARKERS
from railyardpy.macdonald.products import Binomial, QRatio, factors_series, ledger_of
from railyardpy.macdonald.series import FormalSeries
from railyardpy.macdonald.specialization import Specialization

logger = logging.getLogger(__name__)

KERNELS = ("H", "Pi", "Pi0")
_KERNEL_ALIASES = {"Π": "Pi", "Π0": "Pi0", "Π₀": "Pi0"}


def _check_marker(marker):
    if marker not in MARKERS:
        raise ValueError("marker should be one of {}, got {!r}".format(MARKERS, marker))


def _letter_factors(marker, a, qt):
    q, t = qt.q, qt.t
    c, x, e = a.sign, a.value, a.degree
    out = []
    if not a.dual:
        if c * (c - 1) // 2:
            out.append(QRatio(t, q, x * x, 2 * e, c * (c - 1) // 2))
        if marker == "el":
            out.append(QRatio(t, q, x, e, c))
        elif marker == "oa":
            out.append(Binomial(x, e, -c))
            out.append(QRatio(t / q, q * q, q * q * x * x, 2 * e, c))
        elif marker == "eoa":
            out.append(QRatio(q * t, q * q, x * x, 2 * e, c))
        return out
    if c * (c - 1) // 2:
        out.append(QRatio(q, t, x * x, 2 * e, c * (c - 1) // 2))
    out.append(QRatio(q * t, t * t, x * x, 2 * e, c))
    if marker == "el":
        out.append(Binomial(-x, e, c))
    elif marker == "oa":
        out.append(QRatio(1 / q, t, -q * x, e, c))
        out.append(QRatio(q / t, t * t, q * t * x * x, 2 * e, c))
    elif marker == "eoa":
        out.append(QRatio(1 / (q * t), t * t, q * t * x * x, 2 * e, c))
    return out


def _pair_factor(a, b, qt):
    """``H`` of two single letters, as one factor."""
    power = a.sign * b.sign
    coef = a.value * b.value
    degree = a.degree + b.degree
    if not a.dual and not b.dual:
        return QRatio(qt.t, qt.q, coef, degree, power)
    if a.dual and b.dual:
        return QRatio(qt.q, qt.t, coef, degree, power)
    return Binomial(-coef, degree, power)


def _pi0_factor(a, b, qt):
    power = a.sign * b.sign
    coef = a.value * b.value
    degree = a.degree + b.degree
    if not a.dual and not b.dual:
        return Binomial(-coef, degree, power)
    if a.dual and b.dual:
        raise ValueError("Π0 has no product form on two dual letters")
    return QRatio(qt.q, qt.t, coef, degree, power)


def theta_factors(marker, rho, qt):
    """
    Product form of ``Θ_marker(ρ)`` as a list of factors.

    Parameters
    ----------
    marker : str
        ``"el"``, ``"oa"``, ``"deel"`` or ``"eoa"``.
    rho : ~railyardpy.macdonald.specialization.Specialization
    qt : ~railyardpy.macdonald.params.QTParams

    Returns
    -------
    list
        :class:`~railyardpy.macdonald.products.QRatio` and
        :class:`~railyardpy.macdonald.products.Binomial` factors.

    """
    _check_marker(marker)
    letters = list(rho)
    out = []
    for idx, a in enumerate(letters):
        out.extend(_letter_factors(marker, a, qt))
        for b in letters[idx + 1 :]:
            out.append(_pair_factor(a, b, qt))
    return out


def _kernel_kind(kind):
    kind = _KERNEL_ALIASES.get(kind, kind)
    if kind not in KERNELS:
        raise ValueError("kind should be one of {}, got {!r}".format(KERNELS, kind))
    return kind


def kernel_factors(kind, rho1, rho2, qt):
    """
    Product form of ``H(ρ1; ρ2)``, ``Π(ρ1, ρ2)`` or ``Π0(ρ1, ρ2)``.

    ``Π`` is ``H`` restricted to ordinary alphabets.

    """
    kind = _kernel_kind(kind)
    if kind == "Pi" and any(a.dual for a in list(rho1) + list(rho2)):
        raise ValueError("Π is defined on ordinary alphabets, use 'H' for dual letters")
    make = _pi0_factor if kind == "Pi0" else _pair_factor
    return [make(a, b, qt) for a in rho1 for b in rho2]


def _ratio(num, den):
    if den == 0:
        raise PoleEncountered("vanishing (q, t) denominator in an exponential form")
    return num / den


def _theta_exponent(marker, rho, degree, qt):
    q, t, one = qt.q, qt.t, qt.one
    exponent = FormalSeries.constant(one * 0, degree)
    for n in range(1, degree + 1):
        kappa = _ratio(1 - t ** n, 1 - q ** n)
        p_n = rho.power_sum_series(n, qt, degree)
        p_2n = rho.power_sum_series(2 * n, qt, degree)
        exponent = exponent + (p_n * p_n - p_2n) * _ratio(kappa, 2 * n)
        if marker == "el":
            exponent = exponent + p_n * _ratio(kappa, n)
        elif marker == "oa":
            exponent = exponent + p_2n * _ratio(q ** n * (q ** n - t ** n), n * (1 - q ** (2 * n)))
            exponent = exponent + p_n * _ratio(one, n)
        elif marker == "eoa":
            exponent = exponent + p_2n * _ratio(1 - (t * q) ** n, n * (1 - q ** (2 * n)))
    return exponent


def theta_series(marker, rho, degree, qt, form="product"):
    """
    ``Θ_marker(sρ)`` as a series in the scale ``s``, truncated at ``s^degree``.

    Parameters
    ----------
    marker : str
    rho : ~railyardpy.macdonald.specialization.Specialization
        Every letter degree is raised by one before expanding.
    degree : int
    qt : ~railyardpy.macdonald.params.QTParams
    form : str
        ``"product"`` (q-binomial expansion of the product form) or
        ``"exponential"`` (power-sum exponent).

    Returns
    -------
    ~railyardpy.macdonald.series.FormalSeries

    Raises
    ------
    SeriesPoleAtZero : If a letter would need a non-positive power of ``s``.

    """
    _check_marker(marker)
    scaled = rho.scaled(1, shift=1)
    if form == "product":
        return factors_series(theta_factors(marker, scaled, qt), degree, qt.one)
    if form == "exponential":
        return _theta_exponent(marker, scaled, degree, qt).exp()
    raise ValueError("form should be 'product' or 'exponential', got {!r}".format(form))


def kernel_series(kind, rho1, rho2, degree, qt, form="exponential"):
    """
    ``H``, ``Π`` or ``Π0`` of ``(sρ1, ρ2)`` truncated at ``s^degree``.

    Parameters
    ----------
    kind : str
        ``"H"``, ``"Pi"`` or ``"Pi0"`` (``"Π"``, ``"Π0"`` accepted).
    rho1, rho2 : ~railyardpy.macdonald.specialization.Specialization
    degree : int
    qt : ~railyardpy.macdonald.params.QTParams
    form : str
        ``"exponential"`` or ``"product"``.

    """
    kind = _kernel_kind(kind)
    scaled = rho1.scaled(1, shift=1)
    if form == "product":
        return factors_series(kernel_factors(kind, scaled, rho2, qt), degree, qt.one)
    if form != "exponential":
        raise ValueError("form should be 'product' or 'exponential', got {!r}".format(form))
    if kind == "Pi":
        kernel_factors(kind, scaled, rho2, qt)
    one = qt.one
    exponent = FormalSeries.constant(one * 0, degree)
    for n in range(1, degree + 1):
        p1 = scaled.power_sum_series(n, qt, degree)
        p2 = rho2.power_sum_series(n, qt, degree)
        if kind == "Pi0":
            coef = _ratio(one * (-1) ** (n + 1), n)
        else:
            coef = _ratio(_ratio(1 - qt.t ** n, 1 - qt.q ** n), n)
        exponent = exponent + p1 * p2 * coef
    return exponent.exp()


def theta_value(marker, rho, qt, w=1.0, cutoff=constant.POCHHAMMER_CUTOFF):
    """
    Float value of ``Θ_marker(ρ)`` with letter degrees evaluated at ``w``.

    """
    return ledger_of(theta_factors(marker, rho, qt), cutoff).evaluate(w)


def kernel_value(kind, rho1, rho2, qt, w=1.0, cutoff=constant.POCHHAMMER_CUTOFF):
    return ledger_of(kernel_factors(kind, rho1, rho2, qt), cutoff).evaluate(w)


def single(x, dual=False):
    """Shorthand for the one-letter specialization ``[x]`` (or ``[x]'``)."""
    if dual:
        return Specialization.dual_of(x)
    return Specialization.ordinary(x)
