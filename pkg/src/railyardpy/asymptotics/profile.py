import json
import logging
import math

import numpy as np

from railyardpy.macdonald.params import QTParams
from railyardpy.railyard.spec import BoundaryCondition, RailYardSpec

logger = logging.getLogger(__name__)


def _residue(i, n):
    """``i`` reduced to ``[1, n]``."""
    return (i - 1) % n + 1


class AsymptoticProfile:
    """
    Piecewise periodic data of a sequence of rail-yard graphs as ``ε -> 0``.

    Column ``i`` of the graph at scale ``ε`` lies in segment ``p`` when
    ``ε i`` falls in ``(V_{p-1}, V_p]``; its sign is ``b_{p, j}`` and its side
    is ``a_j`` with ``j`` the residue of ``i`` modulo ``n``.

    Parameters
    ----------
    n : int
        Period.
    V : list
        Transition points ``V_0 < ... < V_m``.
    tau : list
        Positive weights ``τ_1, ..., τ_n``.
    b : list of str
        ``m`` words of length ``n`` over ``+-``; ``b[p - 1][j - 1] = b_{p, j}``.
    alpha, beta : float
        Jack parameter ``log q / log t`` and scaling rate ``-log t / (n ε)``.
    u, v : float
        Boundary fugacities in ``[0, 1)``.
    a : str or None
        Word of length ``n`` over ``LR``; all ``L`` by default.

    """

    def __init__(self, n, V, tau, b, alpha=1.0, beta=1.0, u=0.0, v=0.0, a=None):
        n = int(n)
        if n < 1:
            raise ValueError("period must be positive, got {}".format(n))
        V = [float(x) for x in V]
        if len(V) < 2 or any(y <= x for x, y in zip(V, V[1:])):
            raise ValueError("transition points must be strictly increasing, got {}".format(V))
        tau = [float(x) for x in tau]
        if len(tau) != n or any(not x > 0 for x in tau):
            raise ValueError("need {} positive weights, got {}".format(n, tau))
        b = [str(word) for word in b]
        if len(b) != len(V) - 1:
            raise ValueError("need {} sign words, got {}".format(len(V) - 1, len(b)))
        for word in b:
            if len(word) != n or set(word) - set("+-"):
                raise ValueError("sign word {!r} must have length {} over '+-'".format(word, n))
        a = "L" * n if a is None else str(a)
        if len(a) != n or set(a) - set("LR"):
            raise ValueError("side word {!r} must have length {} over 'LR'".format(a, n))
        if not alpha > 0 or not beta > 0:
            raise ValueError("alpha and beta must be positive, got {} and {}".format(alpha, beta))
        for name, x in (("u", u), ("v", v)):
            if not 0 <= x < 1:
                raise ValueError("{} must lie in [0, 1), got {}".format(name, x))
        self.n = n
        self.V = V
        self.tau = tau
        self.b = b
        self.a = a
        self.alpha = alpha
        self.beta = float(beta)
        self.u = float(u)
        self.v = float(v)

    @classmethod
    def from_dict(cls, data):
        return cls(
            data["n"],
            data["V"],
            data["tau"],
            data["b"],
            alpha=data.get("alpha", 1.0),
            beta=data.get("beta", 1.0),
            u=data.get("u", 0.0),
            v=data.get("v", 0.0),
            a=data.get("a"),
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_dict(self):
        return {
            "n": self.n,
            "V": list(self.V),
            "tau": list(self.tau),
            "b": list(self.b),
            "a": self.a,
            "alpha": self.alpha,
            "beta": self.beta,
            "u": self.u,
            "v": self.v,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    def __repr__(self):
        return "AsymptoticProfile(n={}, V={}, tau={}, b={}, a={!r}, alpha={}, beta={}, u={}, v={})".format(
            self.n, self.V, self.tau, self.b, self.a, self.alpha, self.beta, self.u, self.v
        )

    @property
    def m(self):
        return len(self.V) - 1

    @property
    def all_left(self):
        return set(self.a) == {"L"}

    def event(self, p, j, minus, side):
        """
        Indicator of ``b_{p,j} = -`` (``minus``) or ``+`` together with ``a_j = side``.

        """
        sign = "-" if minus else "+"
        return self.b[p - 1][j - 1] == sign and self.a[j - 1] == side

    def interior(self, chi):
        """``χ`` strictly inside ``(V_0, V_m)`` and off the transition points."""
        return self.V[0] < chi < self.V[-1] and all(chi != x for x in self.V)

    def finite_graph(self, eps, c_l="el", c_r="el"):
        """
        Rail-yard graph, boundary condition and parameters at scale ``ε``.

        The segment ends are rounded to multiples of ``n``; the weights are
        ``e^{-ε(i - j)} τ_j`` on ``+`` columns and ``e^{ε(i - j)} / τ_j`` on
        ``-`` columns, ``j`` the residue of ``i``.

        Returns
        -------
        tuple
            ``(RailYardSpec, BoundaryCondition, QTParams)``.

        """
        if not eps > 0:
            raise ValueError("eps must be positive, got {}".format(eps))
        n = self.n
        ends = [n * int(round(x / (eps * n))) for x in self.V]
        if any(y <= x for x, y in zip(ends, ends[1:])):
            raise ValueError("eps={} is too coarse to resolve the transition points".format(eps))
        l, r = ends[0], ends[-1]
        sides, signs, weights = [], [], []
        p = 1
        for i in range(l, r + 1):
            while p < self.m and i > ends[p]:
                p += 1
            j = _residue(i, n)
            sign = self.b[p - 1][j - 1]
            shift = eps * (i - j)
            x = math.exp(-shift) * self.tau[j - 1] if sign == "+" else math.exp(shift) / self.tau[j - 1]
            sides.append(self.a[j - 1])
            signs.append(sign)
            weights.append(x)
        spec = RailYardSpec(l, r, "".join(sides), "".join(signs), weights)
        bc = BoundaryCondition(c_l, c_r, self.u, self.v)
        qt = QTParams.from_scaling(n, self.beta, eps, float(self.alpha))
        logger.info("finite graph at eps=%g: columns %d..%d", eps, l, r)
        return spec, bc, qt

    def column_at(self, chi, eps):
        """Index of the partition nearest to ``χ`` at scale ``ε``."""
        return int(np.round(chi / eps))
