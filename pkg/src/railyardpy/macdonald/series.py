"""Truncated formal power series in one variable.

Coefficients may be :class:`fractions.Fraction` (exact) or complex numbers;
the arithmetic below only uses ``+``, ``-``, ``*`` and ``/`` on them.

"""
from fractions import Fraction

from railyardpy.exceptions import SeriesPoleAtZero


class FormalSeries:
    """
    ``c_0 + c_1 s + ... + c_D s^D + O(s^{D+1})``.

    Parameters
    ----------
    coeffs : list
        Coefficients, padded with zeros or truncated to ``degree + 1`` terms.
    degree : int
        Truncation degree ``D``.
    var : str
        Name of the formal variable, used only for display.

    """

    def __init__(self, coeffs, degree, var="s"):
        if degree < 0:
            raise ValueError("degree must be nonnegative, got {}".format(degree))
        coeffs = list(coeffs)[: degree + 1]
        zero = coeffs[0] * 0 if coeffs else Fraction(0)
        coeffs += [zero] * (degree + 1 - len(coeffs))
        self.coeffs = coeffs
        self.degree = degree
        self.var = var

    @classmethod
    def constant(cls, c, degree, var="s"):
        return cls([c], degree, var)

    @classmethod
    def monomial(cls, c, power, degree, var="s"):
        zero = c * 0
        coeffs = [zero] * (degree + 1)
        if power <= degree:
            coeffs[power] = c
        return cls(coeffs, degree, var)

    def __repr__(self):
        terms = [
            "{}*{}^{}".format(c, self.var, n) for n, c in enumerate(self.coeffs) if c != 0
        ]
        return "FormalSeries({} + O({}^{}))".format(
            " + ".join(terms) or "0", self.var, self.degree + 1
        )

    def __getitem__(self, n):
        return self.coeffs[n] if 0 <= n <= self.degree else self.coeffs[0] * 0

    def __len__(self):
        return self.degree + 1

    def _match(self, other):
        if isinstance(other, FormalSeries):
            return other, min(self.degree, other.degree)
        return FormalSeries.constant(other, self.degree, self.var), self.degree

    def __add__(self, other):
        other, d = self._match(other)
        return FormalSeries(
            [self.coeffs[n] + other.coeffs[n] for n in range(d + 1)], d, self.var
        )

    __radd__ = __add__

    def __neg__(self):
        return FormalSeries([-c for c in self.coeffs], self.degree, self.var)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, FormalSeries):
            return FormalSeries([c * other for c in self.coeffs], self.degree, self.var)
        d = min(self.degree, other.degree)
        a, b = self.coeffs, other.coeffs
        out = [a[0] * 0] * (d + 1)
        for i in range(d + 1):
            if a[i] == 0:
                continue
            for j in range(d + 1 - i):
                out[i + j] += a[i] * b[j]
        return FormalSeries(out, d, self.var)

    __rmul__ = __mul__

    def reciprocal(self):
        """
        Multiplicative inverse.

        Raises
        ------
        SeriesPoleAtZero : If the constant term vanishes.

        """
        a = self.coeffs
        if a[0] == 0:
            raise SeriesPoleAtZero("reciprocal of a series with zero constant term")
        inv0 = 1 / a[0]
        out = [inv0]
        for n in range(1, self.degree + 1):
            acc = sum((a[k] * out[n - k] for k in range(1, n + 1)), a[0] * 0)
            out.append(-acc * inv0)
        return FormalSeries(out, self.degree, self.var)

    def __truediv__(self, other):
        if isinstance(other, FormalSeries):
            return self * other.reciprocal()
        return FormalSeries([c / other for c in self.coeffs], self.degree, self.var)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("only integer powers are supported")
        if n < 0:
            return self.reciprocal() ** (-n)
        result = FormalSeries.constant(self.coeffs[0] * 0 + 1, self.degree, self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def exp(self):
        """
        ``exp`` of a series with vanishing constant term.

        """
        a = self.coeffs
        if a[0] != 0:
            raise ValueError("exp needs a zero constant term")
        # n e_n = sum_k k a_k e_{n-k}
        one = a[0] * 0 + 1
        out = [one]
        for n in range(1, self.degree + 1):
            acc = sum((k * a[k] * out[n - k] for k in range(1, n + 1)), a[0] * 0)
            out.append(acc / n)
        return FormalSeries(out, self.degree, self.var)

    def log(self, exact=True):
        """
        ``log`` of a series with constant term one.

        Raises
        ------
        SeriesPoleAtZero : If the constant term vanishes.

        """
        a = self.coeffs
        if a[0] == 0:
            raise SeriesPoleAtZero("log of a series with zero constant term")
        if exact and a[0] != 1:
            raise ValueError("exact log needs constant term 1, got {}".format(a[0]))
        normalized = self / a[0]
        b = normalized.coeffs
        out = [b[0] * 0]
        for n in range(1, self.degree + 1):
            acc = sum((k * out[k] * b[n - k] for k in range(1, n)), b[0] * 0)
            out.append(b[n] - acc / n)
        return FormalSeries(out, self.degree, self.var)

    def truncate(self, degree):
        return FormalSeries(self.coeffs[: degree + 1], min(degree, self.degree), self.var)

    def scale(self, c):
        """Substitute ``s -> c s``."""
        out, p = [], c * 0 + 1
        for a in self.coeffs:
            out.append(a * p)
            p = p * c
        return FormalSeries(out, self.degree, self.var)

    def evaluate(self, x):
        acc = self.coeffs[-1] * 0
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def __eq__(self, other):
        if not isinstance(other, FormalSeries):
            return NotImplemented
        d = min(self.degree, other.degree)
        return all(self.coeffs[n] == other.coeffs[n] for n in range(d + 1))

    __hash__ = None

    def max_abs_defect(self, other):
        d = min(self.degree, other.degree)
        return max(abs(complex(self.coeffs[n] - other.coeffs[n])) for n in range(d + 1))
