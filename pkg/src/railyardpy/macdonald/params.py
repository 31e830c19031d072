import math
from fractions import Fraction
from numbers import Rational


class QTParams:
    """
    Macdonald parameters ``(q, t)`` together with the numeric tower they live in.

    The exact tower keeps ``q`` and ``t`` as :class:`fractions.Fraction` and
    every derived quantity stays rational; the float tower works with
    complex doubles.

    Attributes
    ----------
    q, t : Fraction or float
    exact : bool
    jack_alpha : float or Fraction or None
        Set when ``q = t**alpha``.
    scaling : tuple or None
        ``(n, beta, eps)`` when ``t = exp(-n * beta * eps)``.

    """

    def __init__(self, q, t, exact=None, jack_alpha=None, scaling=None):
        if exact is None:
            exact = isinstance(q, Rational) and isinstance(t, Rational)
        if exact:
            if not (isinstance(q, Rational) and isinstance(t, Rational)):
                raise ValueError("the exact tower needs rational q and t")
            q, t = Fraction(q), Fraction(t)
        else:
            q, t = float(q), float(t)
        if q == 0 or t == 0:
            raise ValueError("q and t must be nonzero, got q={}, t={}".format(q, t))
        if jack_alpha is not None and 0 < q < 1 and 0 < t < 1:
            mismatch = abs(math.log(float(q)) / math.log(float(t)) - float(jack_alpha))
            if mismatch > 1e-12:
                raise ValueError(
                    "q = t**alpha fails for alpha={} (off by {:.3g})".format(
                        jack_alpha, mismatch
                    )
                )
        self.q = q
        self.t = t
        self.exact = bool(exact)
        self.jack_alpha = jack_alpha
        self.scaling = scaling

    @classmethod
    def from_jack(cls, alpha, t):
        """
        Parameters on the Jack line ``q = t**alpha``.

        The result is exact only for a rational ``t`` and a nonnegative
        integer ``alpha``.

        """
        if isinstance(t, Rational) and isinstance(alpha, int) and alpha >= 0:
            return cls(Fraction(t) ** alpha, Fraction(t), exact=True, jack_alpha=alpha)
        t = float(t)
        return cls(t ** float(alpha), t, exact=False, jack_alpha=alpha)

    @classmethod
    def from_scaling(cls, n, beta, eps, alpha):
        """
        Float parameters ``t = exp(-n beta eps)``, ``q = t**alpha``.

        """
        if n <= 0 or beta <= 0 or eps <= 0 or alpha <= 0:
            raise ValueError("n, beta, eps and alpha must be positive")
        t = math.exp(-n * beta * eps)
        return cls(t ** alpha, t, exact=False, jack_alpha=alpha, scaling=(n, beta, eps))

    @classmethod
    def from_dict(cls, data):
        q, t = data["q"], data["t"]
        if isinstance(q, str):
            q = Fraction(q)
        if isinstance(t, str):
            t = Fraction(t)
        return cls(q, t, exact=data.get("exact"), jack_alpha=data.get("jack_alpha"))

    def to_dict(self):
        out = {"q": str(self.q) if self.exact else self.q}
        out["t"] = str(self.t) if self.exact else self.t
        out["exact"] = self.exact
        if self.jack_alpha is not None:
            out["jack_alpha"] = self.jack_alpha
        return out

    def __repr__(self):
        return "QTParams(q={!r}, t={!r}, exact={})".format(self.q, self.t, self.exact)

    def __eq__(self, other):
        return (
            isinstance(other, QTParams)
            and (self.q, self.t, self.exact) == (other.q, other.t, other.exact)
        )

    def __hash__(self):
        return hash((self.q, self.t, self.exact))

    @property
    def one(self):
        return Fraction(1) if self.exact else 1.0

    def coerce(self, x):
        """
        Convert a scalar into the active tower.

        """
        if self.exact:
            if isinstance(x, Rational):
                return Fraction(x)
            raise TypeError("cannot use {!r} in the exact tower".format(x))
        return complex(x) if isinstance(x, complex) else float(x)

    def swap(self):
        """Parameters ``(t, q)``."""
        return QTParams(self.t, self.q, exact=self.exact)

    def inverse(self):
        """Parameters ``(1/q, 1/t)``."""
        return QTParams(1 / self.q, 1 / self.t, exact=self.exact)

    @property
    def log_ratio(self):
        """``log q / log t`` as a float."""
        return math.log(float(self.q)) / math.log(float(self.t))

    def is_probabilistic(self):
        return 0 < self.q < 1 and 0 < self.t < 1
