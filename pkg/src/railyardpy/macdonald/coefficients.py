"""Arm/leg factors and single-variable branching coefficients.

For a cell ``s`` of ``λ`` with arm ``a`` and leg ``l``,

    b_λ(s) = (1 - q^a t^{l+1}) / (1 - q^{a+1} t^l),

and ``b_λ(s) = 1`` for ``s`` outside ``λ``. The branching coefficients are
products of ratios of these over the rows (``R``) and columns (``C``) that
meet the skew diagram ``λ/μ``.

"""
from functools import lru_cache

from railyardpy.exceptions import PoleEncountered
from railyardpy.partitions import Partition, arm_leg, conjugate, interlaces

_BRANCHING_KINDS = ("psi", "phi", "psi'", "phi'")
_ALIASES = {"ψ": "psi", "φ": "phi", "ψ′": "psi'", "φ′": "phi'", "ψ'": "psi'", "φ'": "phi'"}

#: Boundary marker -> cell family used by the b-weights.
MARKER_FAMILY = {"el": "el", "oa": "oa", "deel": "el", "eoa": "oa"}
#: Boundary marker -> complementary family, ``b / b^marker``.
MARKER_COFAMILY = {"el": "ol", "oa": "ea", "deel": "ol", "eoa": "ea"}
MARKERS = ("el", "oa", "deel", "eoa")


def _cell_value(a, l, qt):
    num = 1 - qt.q ** a * qt.t ** (l + 1)
    den = 1 - qt.q ** (a + 1) * qt.t ** l
    if den == 0:
        raise PoleEncountered(
            "b-factor denominator vanishes at arm={}, leg={} for {}".format(a, l, qt)
        )
    return num / den


@lru_cache(maxsize=None)
def _b_in(lam, cell, qt):
    a, l = arm_leg(lam, cell)
    return _cell_value(a, l, qt)


def b_factor(lam, cell, qt):
    """
    The factor ``b_λ(s; q, t)``.

    Parameters
    ----------
    lam : ~railyardpy.partitions.Partition
    cell : tuple
        ``(row, col)``, 1-based.
    qt : ~railyardpy.macdonald.params.QTParams

    Returns
    -------
    Fraction or float
        ``1`` when the cell lies outside ``lam``.

    Raises
    ------
    PoleEncountered : If the denominator vanishes.

    """
    lam = Partition(lam)
    i, j = cell
    if i < 1 or j < 1 or j > lam.part(i):
        return qt.one
    return _b_in(lam, (i, j), qt)


def _strip_rows_cols(lam, mu):
    cells = [(i, j) for (i, j) in lam.cells() if j > mu.part(i)]
    return {i for i, _ in cells}, {j for _, j in cells}


@lru_cache(maxsize=None)
def _branching(kind, lam, mu, qt):
    if kind in ("psi", "phi"):
        if not interlaces(mu, lam, "row"):
            return qt.one * 0
    elif not interlaces(mu, lam, "column"):
        return qt.one * 0
    rows, cols = _strip_rows_cols(lam, mu)
    value = qt.one
    for cell in lam.cells():
        i, j = cell
        if kind == "phi":
            take, up = j in cols, True
        elif kind == "psi":
            take, up = i in rows and j not in cols, False
        elif kind == "phi'":
            take, up = i in rows, False
        else:
            take, up = j in cols and i not in rows, True
        if not take:
            continue
        ratio = b_factor(lam, cell, qt) / b_factor(mu, cell, qt)
        value = value * (ratio if up else 1 / ratio)
    return value


def branching_coeff(kind, lam, mu, qt):
    """
    Branching coefficient ``ψ``, ``φ``, ``ψ'`` or ``φ'`` of ``λ/μ``.

    Parameters
    ----------
    kind : str
        One of ``"psi"``, ``"phi"``, ``"psi'"``, ``"phi'"`` (the Greek
        letters are accepted too).
    lam, mu : ~railyardpy.partitions.Partition
    qt : ~railyardpy.macdonald.params.QTParams

    Returns
    -------
    Fraction or float
        Zero when ``λ/μ`` is not the strip the coefficient needs (horizontal
        for ``ψ, φ``, vertical for the primed ones).

    Raises
    ------
    ValueError : If kind is unknown.
    PoleEncountered : If a b-factor denominator vanishes.

    """
    kind = _ALIASES.get(kind, kind)
    if kind not in _BRANCHING_KINDS:
        raise ValueError("kind should be one of {}, got {!r}".format(_BRANCHING_KINDS, kind))
    return _branching(kind, Partition(lam), Partition(mu), qt)


@lru_cache(maxsize=None)
def _family(lam, family, qt):
    value = qt.one
    for cell in lam.cells():
        a, l = arm_leg(lam, cell)
        if family == "el":
            take = l % 2 == 0
        elif family == "ol":
            take = l % 2 == 1
        elif family == "oa":
            take = a % 2 == 1
        else:
            take = a % 2 == 0
        if take:
            value = value * _cell_value(a, l, qt)
    return value


def b_family(lam, marker, qt):
    """
    Product of ``b_λ(s)`` over a parity class of cells.

    Parameters
    ----------
    lam : ~railyardpy.partitions.Partition
    marker : str
        ``"el"`` (even leg), ``"oa"`` (odd arm), ``"ol"`` (odd leg) or
        ``"ea"`` (even arm).
    qt : ~railyardpy.macdonald.params.QTParams

    Returns
    -------
    Fraction or float

    """
    if marker not in ("el", "oa", "ol", "ea"):
        raise ValueError("marker should be 'el', 'oa', 'ol' or 'ea', got {!r}".format(marker))
    return _family(Partition(lam), marker, qt)


def b_total(lam, qt):
    """``b_λ = Π_s b_λ(s)``, so that ``Q_λ = b_λ P_λ``."""
    return b_family(lam, "el", qt) * b_family(lam, "ol", qt)


def boundary_weight(lam, marker, qt):
    """``b^{marker}_λ``, with the deel/eoa markers using the el/oa families."""
    return b_family(lam, MARKER_FAMILY[marker], qt)


def boundary_coweight(lam, marker, qt):
    """``b̄^{marker}_λ = b_λ / b^{marker}_λ``."""
    return b_family(lam, MARKER_COFAMILY[marker], qt)


def boundary_allows(lam, marker):
    """Parity restriction of a boundary marker on the boundary partition."""
    lam = Partition(lam)
    if marker == "deel":
        return conjugate(lam).is_even()
    if marker == "eoa":
        return lam.is_even()
    return True


def skew_single(kind, dual, lam, mu, x, qt):
    """
    Single-letter skew function ``P_{λ/μ}`` or ``Q_{λ/μ}``.

    Parameters
    ----------
    kind : str
        ``"P"`` or ``"Q"``.
    dual : bool
        Evaluate at the dual letter ``[x]'`` instead of ``[x]``.
    lam, mu : ~railyardpy.partitions.Partition
    x : scalar
    qt : ~railyardpy.macdonald.params.QTParams

    Returns
    -------
    scalar
        ``ψ x^{|λ|-|μ|}`` (P), ``φ x^{..}`` (Q), ``φ' x^{..}`` (dual P),
        ``ψ' x^{..}`` (dual Q); zero off the matching interlacing.

    """
    lam, mu = Partition(lam), Partition(mu)
    if kind not in ("P", "Q"):
        raise ValueError("kind should be 'P' or 'Q', got {!r}".format(kind))
    coef_kind = {
        ("P", False): "psi",
        ("Q", False): "phi",
        ("P", True): "phi'",
        ("Q", True): "psi'",
    }[(kind, bool(dual))]
    coef = _branching(coef_kind, lam, mu, qt)
    if coef == 0:
        return coef
    return coef * x ** (lam.size - mu.size)
