"""q-Pochhammer factor algebra behind the Θ and H generating functions.

Every generating function used by the package is a finite product of two
kinds of factors in a formal variable ``z`` (series scale or contour
variable):

* :class:`QRatio` ``[(a X; B)_∞ / (X; B)_∞]^p`` with ``X = c z^e``,
* :class:`Binomial` ``(1 - c z^e)^p``.

The exact back-end expands them with the q-binomial theorem
``(aX;B)_∞/(X;B)_∞ = Σ_n (a;B)_n/(B;B)_n X^n``. The float back-end unrolls
them into Möbius atoms ``(1 - c z^e)^p`` kept in a :class:`MobiusLedger`.

"""
import logging
import math

import numpy as np

from railyardpy import constant
from railyardpy.exceptions import PoleEncountered, SeriesPoleAtZero
from railyardpy.ijit import jit
from railyardpy.macdonald.series import FormalSeries

logger = logging.getLogger(__name__)


class QRatio:
    """
    ``[(a X; B)_∞ / (X; B)_∞]^power`` with ``X = coef * z**degree``.

    """

    __slots__ = ("a", "base", "coef", "degree", "power")

    def __init__(self, a, base, coef, degree, power=1):
        self.a = a
        self.base = base
        self.coef = coef
        self.degree = degree
        self.power = power

    def __repr__(self):
        return "QRatio(a={!r}, base={!r}, X={!r}*z^{}, power={})".format(
            self.a, self.base, self.coef, self.degree, self.power
        )

    def series(self, degree, one):
        if self.coef == 0 or self.power == 0 or self.a == 1:
            return FormalSeries.constant(one, degree)
        if self.degree <= 0:
            raise SeriesPoleAtZero(
                "factor {!r} is not a power series in the formal variable".format(self)
            )
        coeffs = [one * 0] * (degree + 1)
        c, xn = one, one
        for n in range(degree // self.degree + 1):
            coeffs[n * self.degree] = c * xn
            den = 1 - self.base ** (n + 1)
            if den == 0:
                raise PoleEncountered("q-binomial denominator vanishes for {!r}".format(self))
            c = c * (1 - self.a * self.base ** n) / den
            xn = xn * self.coef
        return FormalSeries(coeffs, degree) ** self.power

    def atoms(self, cutoff=constant.POCHHAMMER_CUTOFF):
        if self.coef == 0 or self.power == 0 or self.a == 1:
            return []
        base = complex(self.base)
        if abs(base) >= 1:
            raise ValueError("q-Pochhammer base must satisfy |B| < 1, got {}".format(base))
        n_terms = max(1, int(math.ceil(math.log(cutoff) / math.log(abs(base)))))
        powers = base ** np.arange(n_terms)
        coef = complex(self.coef)
        a = complex(self.a)
        out = [(a * coef * b, self.degree, self.power) for b in powers]
        out += [(coef * b, self.degree, -self.power) for b in powers]
        return out


class Binomial:
    """
    ``(1 - coef * z**degree)^power``.

    """

    __slots__ = ("coef", "degree", "power")

    def __init__(self, coef, degree, power=1):
        self.coef = coef
        self.degree = degree
        self.power = power

    def __repr__(self):
        return "Binomial(1 - {!r}*z^{}, power={})".format(self.coef, self.degree, self.power)

    def series(self, degree, one):
        if self.coef == 0 or self.power == 0:
            return FormalSeries.constant(one, degree)
        if self.degree <= 0:
            raise SeriesPoleAtZero(
                "factor {!r} is not a power series in the formal variable".format(self)
            )
        base = FormalSeries.constant(one, degree) - FormalSeries.monomial(
            one * self.coef, self.degree, degree
        )
        return base ** self.power

    def atoms(self, cutoff=constant.POCHHAMMER_CUTOFF):
        if self.coef == 0 or self.power == 0:
            return []
        return [(complex(self.coef), self.degree, self.power)]


def factors_series(factors, degree, one):
    """
    Exact product of factors as a :class:`FormalSeries` truncated at ``degree``.

    """
    result = FormalSeries.constant(one, degree)
    for f in factors:
        result = result * f.series(degree, one)
    return result


@jit
def qpochhammer(x, base, n_terms):
    """
    Finite q-Pochhammer symbol ``(x; base)_n`` in floating point.

    """
    out = 1.0 + 0.0j
    b = 1.0 + 0.0j
    for _ in range(n_terms):
        out *= 1.0 - x * b
        b *= base
    return out


def _log_product(coef, deg, power, w, chunk=256):
    out = np.empty(w.shape[0], dtype=np.complex128)
    for start in range(0, w.shape[0], chunk):
        ws = w[start : start + chunk]
        terms = 1.0 - coef[:, None] * ws[None, :] ** deg[:, None]
        # integer powers, so the branch of log is irrelevant
        out[start : start + chunk] = np.exp(np.sum(power[:, None] * np.log(terms), axis=0))
    return out


class MobiusLedger:
    """
    Float product ``Π_i (1 - c_i z^{e_i})^{p_i}`` with known singularities.

    Parameters
    ----------
    atoms : list
        ``(c, e, p)`` triples.
    constant : complex
        Overall prefactor.

    """

    def __init__(self, atoms=(), constant=1.0):
        atoms = [a for a in atoms if a[0] != 0 and a[2] != 0]
        self.coef = np.array([a[0] for a in atoms], dtype=np.complex128)
        self.deg = np.array([a[1] for a in atoms], dtype=np.int64)
        self.power = np.array([a[2] for a in atoms], dtype=np.int64)
        self.constant = complex(constant)

    @classmethod
    def from_factors(cls, factors, cutoff=constant.POCHHAMMER_CUTOFF):
        atoms = []
        for f in factors:
            atoms.extend(f.atoms(cutoff))
        logger.debug("ledger built from %d factors, %d atoms", len(factors), len(atoms))
        return cls(atoms)

    def __len__(self):
        return self.coef.shape[0]

    def __mul__(self, other):
        out = MobiusLedger(constant=self.constant * other.constant)
        out.coef = np.concatenate([self.coef, other.coef])
        out.deg = np.concatenate([self.deg, other.deg])
        out.power = np.concatenate([self.power, other.power])
        return out

    def inverse(self):
        out = MobiusLedger(constant=1 / self.constant)
        out.coef, out.deg, out.power = self.coef.copy(), self.deg.copy(), -self.power
        return out

    def evaluate(self, w):
        """
        Value at ``w`` (scalar or array).

        """
        w_arr = np.atleast_1d(np.asarray(w, dtype=np.complex128))
        if len(self) == 0:
            values = np.ones(w_arr.shape[0], dtype=np.complex128)
        else:
            if np.any(self.deg < 0) and np.any(w_arr == 0):
                raise ZeroDivisionError("ledger with negative degrees evaluated at 0")
            values = _log_product(self.coef, self.deg.astype(np.float64), self.power, w_arr)
        values = values * self.constant
        if np.isscalar(w) or np.ndim(w) == 0:
            return complex(values[0])
        return values

    def log_evaluate(self, w):
        """
        ``log c + Σ_i p_i Log(1 - c_i w^{e_i})`` with principal logarithms.

        For a zero and a pole of the same degree the two cuts cancel outside
        the segment joining them.

        """
        w_arr = np.atleast_1d(np.asarray(w, dtype=np.complex128))
        out = np.full(w_arr.shape[0], np.log(self.constant), dtype=np.complex128)
        if len(self):
            terms = 1.0 - self.coef[:, None] * w_arr[None, :] ** self.deg[:, None].astype(np.float64)
            out += np.sum(self.power[:, None] * np.log(terms), axis=0)
        if np.isscalar(w) or np.ndim(w) == 0:
            return complex(out[0])
        return out

    def log_derivative(self, w):
        """``d/dw`` of :meth:`log_evaluate`."""
        w_arr = np.atleast_1d(np.asarray(w, dtype=np.complex128))
        out = np.zeros(w_arr.shape[0], dtype=np.complex128)
        if len(self):
            deg = self.deg[:, None].astype(np.float64)
            cw = self.coef[:, None] * w_arr[None, :] ** deg
            out = np.sum(-self.power[:, None] * deg * cw / (w_arr[None, :] * (1.0 - cw)), axis=0)
        if np.isscalar(w) or np.ndim(w) == 0:
            return complex(out[0])
        return out

    def singular_radii(self):
        """
        Moduli of the zeros and poles of every atom with nonzero degree.

        Returns
        -------
        tuple
            ``(inner, outer)`` arrays: singularities of atoms with negative
            degree (they sit inside the contours of this package) and with
            positive degree.

        """
        radii = np.abs(self.coef) ** (-1.0 / np.where(self.deg == 0, 1, self.deg))
        inner = radii[self.deg < 0]
        outer = radii[self.deg > 0]
        return inner, outer

    def singular_points(self):
        """
        All zeros and poles as ``(point, degree sign, is_pole)`` triples.

        """
        out = []
        for c, e, p in zip(self.coef, self.deg, self.power):
            if e == 0:
                continue
            # 1 - c w^e = 0  <=>  w^{e} = 1/c
            roots = (1 / c) ** (1.0 / e) * np.exp(2j * np.pi * np.arange(abs(e)) / e)
            for r in roots:
                out.append((complex(r), int(np.sign(e)), bool(p < 0)))
        return out

    def constant_part(self):
        """Product of the degree-zero atoms times the prefactor."""
        mask = self.deg == 0
        value = self.constant
        if np.any(mask):
            value *= complex(np.prod((1 - self.coef[mask]) ** self.power[mask]))
        return value


def ledger_of(factors, cutoff=constant.POCHHAMMER_CUTOFF):
    return MobiusLedger.from_factors(factors, cutoff)
