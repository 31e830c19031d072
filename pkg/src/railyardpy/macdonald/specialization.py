"""Finite specializations of the ring of symmetric functions.

A specialization is a finite list of letters. A letter contributes
``sign * value**n`` to the power sum ``p_n`` (ordinary letter) or
``sign * (-1)**(n+1) (1-q^n)/(1-t^n) * value**n`` (dual letter, the
image under the (q, t) duality). The ``degree`` of a letter is the power of a
formal variable (series scale ``s`` or contour variable ``w``) multiplying
its value.

"""
from railyardpy.macdonald.series import FormalSeries


class Letter:
    """
    One letter of a specialization.

    Parameters
    ----------
    value : Fraction or complex
    dual : bool
    sign : int
        Multiplicity; ``-1`` for the ``(-1)*`` construction.
    degree : int
        Power of the formal variable multiplying ``value``.

    """

    __slots__ = ("value", "dual", "sign", "degree")

    def __init__(self, value, dual=False, sign=1, degree=0):
        if sign == 0 or int(sign) != sign:
            raise ValueError("sign must be a nonzero integer, got {}".format(sign))
        self.value = value
        self.dual = bool(dual)
        self.sign = int(sign)
        self.degree = int(degree)

    def __repr__(self):
        return "Letter({!r}, dual={}, sign={}, degree={})".format(
            self.value, self.dual, self.sign, self.degree
        )

    def __eq__(self, other):
        return isinstance(other, Letter) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def _key(self):
        return (self.value, self.dual, self.sign, self.degree)

    def scaled(self, c, shift=0):
        return Letter(self.value * c, self.dual, self.sign, self.degree + shift)

    def power_sum(self, n, qt):
        """Contribution ``p_n`` of this letter (without the formal variable)."""
        coef = self.sign * self.value ** n
        if self.dual:
            coef = coef * (-1) ** (n + 1) * (1 - qt.q ** n) / (1 - qt.t ** n)
        return coef


class Specialization:
    """
    A finite alphabet of letters, optionally scaled.

    Parameters
    ----------
    letters : iterable of Letter
    scale : scalar
        Global factor applied to every value.

    """

    def __init__(self, letters=(), scale=1):
        letters = tuple(letters)
        if scale != 1:
            letters = tuple(a.scaled(scale) for a in letters)
        self.letters = tuple(a for a in letters if a.value != 0)

    @classmethod
    def ordinary(cls, *values, degree=0):
        return cls(Letter(x, degree=degree) for x in values)

    @classmethod
    def dual_of(cls, *values, degree=0):
        return cls(Letter(x, dual=True, degree=degree) for x in values)

    def __repr__(self):
        return "Specialization({!r})".format(list(self.letters))

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __bool__(self):
        return bool(self.letters)

    def union(self, other):
        """``ρ1 ∪ ρ2``: power sums add."""
        return Specialization(self.letters + tuple(other.letters))

    __or__ = union

    def scaled(self, c, shift=0):
        """
        ``c ρ`` with every letter degree raised by ``shift``.

        """
        return Specialization(a.scaled(c, shift) for a in self.letters)

    def dual(self):
        """Toggle the duality flag of every letter."""
        return Specialization(
            Letter(a.value, not a.dual, a.sign, a.degree) for a in self.letters
        )

    def negated(self):
        """Flip every sign, so that ``p_n(ρ ∪ ρ.negated()) = 0``."""
        return Specialization(
            Letter(a.value, a.dual, -a.sign, a.degree) for a in self.letters
        )

    def split(self):
        """``(ordinary letters, dual letters)``."""
        return (
            [a for a in self.letters if not a.dual],
            [a for a in self.letters if a.dual],
        )

    def power_sum(self, n, qt):
        """
        ``p_n`` with the formal variable set to one.

        """
        total = qt.one * 0
        for a in self.letters:
            total = total + a.power_sum(n, qt)
        return total

    def power_sum_series(self, n, qt, degree):
        """
        ``p_n`` as a series in the formal variable.

        A letter of degree ``e`` contributes at ``s^{n e}``; letters of
        negative degree are rejected.

        """
        coeffs = [qt.one * 0] * (degree + 1)
        for a in self.letters:
            if a.degree < 0:
                raise ValueError("power_sum_series needs nonnegative letter degrees")
            d = n * a.degree
            if d <= degree:
                coeffs[d] = coeffs[d] + a.power_sum(n, qt)
        return FormalSeries(coeffs, degree)

    def evaluate_power_sum(self, n, qt, w):
        """``p_n`` with the formal variable set to ``w``."""
        total = 0
        for a in self.letters:
            total = total + a.power_sum(n, qt) * w ** (n * a.degree)
        return total
