"""Macdonald polynomials by Gram-Schmidt, used as an independent oracle.

``P_λ`` is obtained from the monomial basis by Gram-Schmidt along increasing
lexicographic order (a linear extension of dominance) under the (q, t)
scalar product

    <p_λ, p_μ> = δ_{λμ} z_λ Π_i (1 - q^{λ_i}) / (1 - t^{λ_i}).

The power-sum to monomial transition matrix is integral; its inverse is
taken exactly with sympy.

"""
import logging
import math
from collections import Counter
from fractions import Fraction
from functools import lru_cache

import sympy

from railyardpy.exceptions import InsufficientVariables, PoleEncountered
from railyardpy.partitions import Partition, partitions_of

logger = logging.getLogger(__name__)


class SymmetricFunction:
    """
    Finite linear combination of a basis of homogeneous symmetric functions.

    Parameters
    ----------
    coeffs : dict
        Partition -> coefficient.
    basis : str
        ``"m"`` (monomial) or ``"p"`` (power sums).

    """

    def __init__(self, coeffs, basis="p"):
        if basis not in ("m", "p"):
            raise ValueError("basis should be 'm' or 'p', got {!r}".format(basis))
        self.coeffs = {Partition(k): v for k, v in coeffs.items() if v != 0}
        self.basis = basis

    def __repr__(self):
        terms = ["{}*{}{}".format(v, self.basis, list(k)) for k, v in sorted(self.coeffs.items())]
        return "SymmetricFunction({})".format(" + ".join(terms) or "0")

    def __getitem__(self, lam):
        return self.coeffs.get(Partition(lam), 0)

    def __add__(self, other):
        if other.basis != self.basis:
            raise ValueError("cannot add functions written in different bases")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return SymmetricFunction(out, self.basis)

    def __mul__(self, c):
        return SymmetricFunction({k: v * c for k, v in self.coeffs.items()}, self.basis)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, SymmetricFunction)
            and self.basis == other.basis
            and self.coeffs == other.coeffs
        )

    __hash__ = None

    def evaluate(self, rho, qt):
        """
        Value at a specialization; only power-sum expansions can be evaluated.

        """
        if self.basis != "p":
            raise ValueError("evaluate needs the power-sum expansion")
        total = qt.one * 0
        for mu, c in self.coeffs.items():
            term = c
            for part in mu:
                term = term * rho.power_sum(part, qt)
            total = total + term
        return total


def z_factor(mu):
    """``z_μ = Π_j j^{m_j} m_j!``."""
    out = 1
    for part, mult in Counter(Partition(mu)).items():
        out *= part ** mult * math.factorial(mult)
    return out


def power_norm(mu, qt):
    """``<p_μ, p_μ>_{q,t}``."""
    value = qt.one * z_factor(mu)
    for part in Partition(mu):
        den = 1 - qt.t ** part
        if den == 0:
            raise PoleEncountered("1 - t^{} vanishes in the scalar product".format(part))
        value = value * (1 - qt.q ** part) / den
    return value


def scalar_product(f, g, qt):
    """
    The (q, t) scalar product of two power-sum expansions.

    Parameters
    ----------
    f, g : SymmetricFunction or dict
        Power-sum coefficients keyed by partitions.
    qt : ~railyardpy.macdonald.params.QTParams

    Returns
    -------
    scalar

    """
    f = f.coeffs if isinstance(f, SymmetricFunction) else f
    g = g.coeffs if isinstance(g, SymmetricFunction) else g
    g = {Partition(k): v for k, v in g.items()}
    total = qt.one * 0
    for mu, a in f.items():
        b = g.get(Partition(mu), 0)
        if b != 0 and a != 0:
            total = total + a * b * power_norm(mu, qt)
    return total


def _count_fillings(parts, target):
    """Coefficient of ``x^target`` in ``Π_i p_{parts_i}(x)``."""

    @lru_cache(maxsize=None)
    def rec(i, remaining):
        if i == len(parts):
            return 1 if not any(remaining) else 0
        total = 0
        for j, r in enumerate(remaining):
            if r >= parts[i]:
                nxt = remaining[:j] + (r - parts[i],) + remaining[j + 1 :]
                total += rec(i + 1, nxt)
        return total

    return rec(0, tuple(target))


@lru_cache(maxsize=None)
def _transition(n):
    """Partitions of ``n`` (increasing lex) and the exact inverse of ``p -> m``."""
    basis = sorted(partitions_of(n))
    size = len(basis)
    p_to_m = sympy.Matrix(
        size, size, lambda a, b: _count_fillings(tuple(basis[a]), tuple(basis[b]))
    )
    inv = p_to_m.inv()
    m_to_p = [
        [Fraction(int(inv[a, b].p), int(inv[a, b].q)) for b in range(size)] for a in range(size)
    ]
    logger.debug("transition matrix for n=%d built (%d partitions)", n, size)
    return basis, m_to_p


class MacdonaldOracle:
    """
    Cached Gram-Schmidt construction of ``P_λ`` and ``Q_λ``.

    Parameters
    ----------
    qt : ~railyardpy.macdonald.params.QTParams

    """

    def __init__(self, qt):
        self.qt = qt
        self._degree = {}

    def _build(self, n):
        if n in self._degree:
            return self._degree[n]
        qt = self.qt
        basis, m_to_p = _transition(n)
        size = len(basis)
        norms = [power_norm(mu, qt) for mu in basis]
        # Gram matrix of the monomial basis
        gram = [
            [sum(m_to_p[a][k] * m_to_p[b][k] * norms[k] for k in range(size)) for b in range(size)]
            for a in range(size)
        ]

        def inner(x, y):
            return sum(
                x[a] * gram[a][b] * y[b] for a in range(size) if x[a] != 0 for b in range(size)
            )

        vectors, self_norms = [], []
        for idx in range(size):
            vec = [qt.one * 0] * size
            vec[idx] = qt.one
            for prev, pn in zip(vectors, self_norms):
                coef = inner(vec, prev) / pn
                vec = [v - coef * w for v, w in zip(vec, prev)]
            norm = inner(vec, vec)
            if norm == 0:
                raise PoleEncountered(
                    "Gram-Schmidt norm of P_{} vanishes at {}".format(list(basis[idx]), qt)
                )
            vectors.append(vec)
            self_norms.append(norm)
        table = {}
        for idx, lam in enumerate(basis):
            vec = vectors[idx]
            power = [sum(vec[a] * m_to_p[a][k] for a in range(size)) for k in range(size)]
            table[lam] = (
                dict(zip(basis, vec)),
                dict(zip(basis, power)),
                self_norms[idx],
            )
        self._degree[n] = table
        return table

    def _entry(self, lam):
        lam = Partition(lam)
        return self._build(lam.size)[lam]

    def P(self, lam):
        """``P_λ`` in the monomial basis."""
        return SymmetricFunction(self._entry(lam)[0], "m")

    def Q(self, lam):
        """``Q_λ = P_λ / <P_λ, P_λ>`` in the monomial basis."""
        coeffs, _, norm = self._entry(lam)
        return SymmetricFunction({k: v / norm for k, v in coeffs.items()}, "m")

    def P_power(self, lam):
        return SymmetricFunction(self._entry(lam)[1], "p")

    def Q_power(self, lam):
        _, coeffs, norm = self._entry(lam)
        return SymmetricFunction({k: v / norm for k, v in coeffs.items()}, "p")

    def norm(self, lam):
        """``<P_λ, P_λ>_{q,t}``."""
        return self._entry(lam)[2]

    def evaluate_P(self, lam, rho):
        return self.P_power(lam).evaluate(rho, self.qt)

    def evaluate_Q(self, lam, rho):
        return self.Q_power(lam).evaluate(rho, self.qt)


@lru_cache(maxsize=32)
def oracle_for(qt):
    return MacdonaldOracle(qt)


def macdonald_oracle(lam, num_vars, qt):
    """
    Monomial expansions of ``P_λ`` and ``Q_λ`` in ``num_vars`` variables.

    Parameters
    ----------
    lam : ~railyardpy.partitions.Partition
    num_vars : int
    qt : ~railyardpy.macdonald.params.QTParams

    Returns
    -------
    tuple
        ``(P, Q)`` as :class:`SymmetricFunction` in the monomial basis, with
        monomials of length above ``num_vars`` dropped.

    Raises
    ------
    InsufficientVariables : If ``num_vars < ℓ(λ)``.
    PoleEncountered : If the Gram-Schmidt process divides by zero.

    """
    lam = Partition(lam)
    if num_vars < lam.length:
        raise InsufficientVariables(
            "P_{} needs at least {} variables, got {}".format(list(lam), lam.length, num_vars)
        )
    oracle = oracle_for(qt)
    out = []
    for f in (oracle.P(lam), oracle.Q(lam)):
        out.append(
            SymmetricFunction({k: v for k, v in f.coeffs.items() if k.length <= num_vars}, "m")
        )
    return tuple(out)
