import json
from fractions import Fraction

from railyardpy.exceptions import InvalidState, LengthMismatch
from railyardpy.macdonald.coefficients import (
    MARKERS,
    boundary_allows,
    boundary_coweight,
    boundary_weight,
    skew_single,
)
from railyardpy.macdonald.specialization import Specialization
from railyardpy.partitions import Partition, enumerate_partitions, interlaces, strip_neighbors

_LR = ("L", "R")
_SIGNS = ("+", "-")


def _scalar(x):
    # "1/5" in JSON keeps the exact tower available
    if isinstance(x, str):
        return Fraction(x)
    return x


def _unscalar(x):
    return str(x) if isinstance(x, Fraction) else x


class RailYardSpec:
    """
    Class for the combinatorial data of a rail-yard graph.

    Columns are indexed ``l, l+1, ..., r``. Column ``i`` joins the odd
    abscissas ``2i-1`` and ``2i+1`` through the even abscissa ``2i``; its
    diagonal edges carry the weight ``x_i``.

    """

    def __init__(self, l, r, lr_word, sign_word, weights):
        """
        Constructor

        Parameters
        ----------
        l, r : int
            Leftmost and rightmost column, ``l <= r``.
        lr_word : str or list
            Letters ``L``/``R`` of the columns ``l..r``.
        sign_word : str or list
            Signs ``+``/``-`` of the columns ``l..r``.
        weights : list
            Positive diagonal weights ``x_l..x_r``.

        Raises
        ------
        LengthMismatch
            When a word or the weight list has the wrong length.
        ValueError
            On unknown letters or nonpositive weights.

        """
        l, r = int(l), int(r)
        if l > r:
            raise ValueError("l must not exceed r, got l={}, r={}".format(l, r))
        n = r - l + 1
        lr_word = tuple(str(a) for a in lr_word)
        sign_word = tuple("-" if b in ("-", "−") else str(b) for b in sign_word)
        weights = tuple(_scalar(x) for x in weights)
        for name, word in (("lr_word", lr_word), ("sign_word", sign_word), ("weights", weights)):
            if len(word) != n:
                raise LengthMismatch(
                    "{} has length {}, expected r - l + 1 = {}".format(name, len(word), n)
                )
        if any(a not in _LR for a in lr_word):
            raise ValueError("lr_word letters must be L or R, got {}".format(lr_word))
        if any(b not in _SIGNS for b in sign_word):
            raise ValueError("sign_word letters must be + or -, got {}".format(sign_word))
        if any(not x > 0 for x in weights):
            raise ValueError("weights must be positive, got {}".format(weights))
        self.l = l
        self.r = r
        self.lr_word = lr_word
        self.sign_word = sign_word
        self.weights = weights

    @classmethod
    def from_dict(cls, data):
        return cls(data["l"], data["r"], data["lr_word"], data["sign_word"], data["weights"])

    @classmethod
    def from_json(cls, text):
        """
        Build a spec from a JSON object ``{l, r, lr_word, sign_word, weights}``.

        Weights given as strings such as ``"1/5"`` are read as fractions.

        """
        return cls.from_dict(json.loads(text))

    def to_dict(self):
        return {
            "l": self.l,
            "r": self.r,
            "lr_word": list(self.lr_word),
            "sign_word": list(self.sign_word),
            "weights": [_unscalar(x) for x in self.weights],
        }

    def to_json(self):
        return json.dumps(self.to_dict())

    def __repr__(self):
        return "RailYardSpec(l={}, r={}, lr_word='{}', sign_word='{}', weights={})".format(
            self.l, self.r, "".join(self.lr_word), "".join(self.sign_word), list(self.weights)
        )

    def __eq__(self, other):
        return isinstance(other, RailYardSpec) and self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash((self.l, self.r, self.lr_word, self.sign_word, self.weights))

    def __len__(self):
        return self.r - self.l + 1

    @property
    def columns(self):
        return range(self.l, self.r + 1)

    def column(self, i):
        """
        ``(a_i, b_i, x_i)`` of column ``i``.

        """
        k = i - self.l
        if not 0 <= k < len(self):
            raise IndexError("column {} outside [{}, {}]".format(i, self.l, self.r))
        return self.lr_word[k], self.sign_word[k], self.weights[k]

    def scaled(self, c):
        """Same graph with every weight multiplied by ``c``."""
        return RailYardSpec(
            self.l, self.r, self.lr_word, self.sign_word, [c * x for x in self.weights]
        )

    def letter(self, i):
        """Single-letter specialization of column ``i``: ``[x_i]`` for L, ``[x_i]'`` for R."""
        a, _, x = self.column(i)
        if a == "L":
            return Specialization.ordinary(x)
        return Specialization.dual_of(x)

    def letters(self):
        return [self.letter(i) for i in self.columns]

    def _signed_letters(self, sign, columns=None):
        columns = self.columns if columns is None else columns
        rho = Specialization()
        for i in columns:
            if self.column(i)[1] == sign:
                rho = rho | self.letter(i)
        return rho

    def plus_letters(self, columns=None):
        """Union of the letters of the ``+`` columns (optionally among ``columns``)."""
        return self._signed_letters("+", columns)

    def minus_letters(self, columns=None):
        """Union of the letters of the ``-`` columns (optionally among ``columns``)."""
        return self._signed_letters("-", columns)


class BoundaryCondition:
    """
    Boundary markers and fugacities of the two free boundaries.

    Parameters
    ----------
    c_l, c_r : str
        One of ``el``, ``oa``, ``deel``, ``eoa``.
    u, v : scalar
        Fugacities in ``[0, 1)``; ``v = 0`` empties the right boundary.

    """

    def __init__(self, c_l="el", c_r="el", u=0, v=0):
        for name, c in (("c_l", c_l), ("c_r", c_r)):
            if c not in MARKERS:
                raise ValueError("{} must be one of {}, got {!r}".format(name, MARKERS, c))
        u, v = _scalar(u), _scalar(v)
        if not (0 <= u < 1 and 0 <= v < 1):
            raise ValueError("u and v must lie in [0, 1), got u={}, v={}".format(u, v))
        self.c_l = c_l
        self.c_r = c_r
        self.u = u
        self.v = v

    @classmethod
    def from_dict(cls, data):
        return cls(data.get("c_l", "el"), data.get("c_r", "el"), data.get("u", 0), data.get("v", 0))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_dict(self):
        return {"c_l": self.c_l, "c_r": self.c_r, "u": _unscalar(self.u), "v": _unscalar(self.v)}

    def __repr__(self):
        return "BoundaryCondition(c_l={!r}, c_r={!r}, u={!r}, v={!r})".format(
            self.c_l, self.c_r, self.u, self.v
        )

    def __eq__(self, other):
        return isinstance(other, BoundaryCondition) and self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash((self.c_l, self.c_r, self.u, self.v))


class DimerState:
    """
    A pure dimer covering stored as its partition sequence ``μ^(l), ..., μ^(r+1)``.

    """

    def __init__(self, partitions):
        self.partitions = tuple(Partition(p) for p in partitions)

    @classmethod
    def from_json(cls, text):
        """State from a JSON array of partitions, e.g. ``[[], [2], [3, 1, 1], [2], []]``."""
        data = json.loads(text) if isinstance(text, str) else text
        return cls(Partition.from_json(p) for p in data)

    @classmethod
    def empty(cls, spec):
        return cls([()] * (len(spec) + 1))

    def to_json(self):
        return json.dumps([p.to_list() for p in self.partitions])

    def __repr__(self):
        return "DimerState({})".format([list(p) for p in self.partitions])

    def __eq__(self, other):
        return isinstance(other, DimerState) and self.partitions == other.partitions

    def __hash__(self):
        return hash(self.partitions)

    def __len__(self):
        return len(self.partitions)

    def __getitem__(self, k):
        return self.partitions[k]

    def at(self, spec, m):
        """``μ^(m)`` for ``m`` in ``[l, r+1]``."""
        return self.partitions[m - spec.l]

    @property
    def left(self):
        return self.partitions[0]

    @property
    def right(self):
        return self.partitions[-1]


def column_interlaces(a, b, lam, nxt):
    """
    Interlacing between ``μ^(i) = lam`` and ``μ^(i+1) = nxt`` demanded by ``(a_i, b_i)``.

    """
    kind = "row" if a == "L" else "column"
    if b == "+":
        return interlaces(lam, nxt, kind)
    return interlaces(nxt, lam, kind)


def _check_lengths(spec, s):
    if len(s) != len(spec) + 1:
        raise LengthMismatch(
            "a state on columns [{}, {}] has {} partitions, got {}".format(
                spec.l, spec.r, len(spec) + 1, len(s)
            )
        )


def validate_state(spec, bc, s):
    """
    Whether ``s`` is a dimer state of ``spec`` under the boundary condition ``bc``.

    Parameters
    ----------
    spec : ~railyardpy.railyard.spec.RailYardSpec
    bc : ~railyardpy.railyard.spec.BoundaryCondition
    s : ~railyardpy.railyard.spec.DimerState

    Returns
    -------
    bool
        ``True`` iff every column interlacing and both boundary parity
        restrictions hold.

    Raises
    ------
    LengthMismatch
        When ``s`` does not have ``r - l + 2`` partitions.

    """
    _check_lengths(spec, s)
    for k, i in enumerate(spec.columns):
        a, b, _ = spec.column(i)
        if not column_interlaces(a, b, s[k], s[k + 1]):
            return False
    return boundary_allows(s.left, bc.c_l) and boundary_allows(s.right, bc.c_r)


def column_factor(a, b, lam, nxt, x, qt):
    """
    Weight of column ``(a, b)`` between ``μ^(i) = lam`` and ``μ^(i+1) = nxt``.

    ``(L,+)`` gives ``P_{nxt/lam}(x; q, t)`` and ``(L,-)`` gives
    ``Q_{lam/nxt}(x; q, t)``; the R columns give the same skew functions of
    the conjugates at ``(t, q)``, i.e. the dual-letter ``Q`` and ``P``.

    """
    if a == "L":
        if b == "+":
            return skew_single("P", False, nxt, lam, x, qt)
        return skew_single("Q", False, lam, nxt, x, qt)
    if b == "+":
        return skew_single("P", True, nxt, lam, x, qt)
    return skew_single("Q", True, lam, nxt, x, qt)


def boundary_factor(bc, left, right, qt):
    """``u^{|μ^(l)|} / b̄^{c_l}_{μ^(l)} · v^{|μ^(r+1)|} b^{c_r}_{μ^(r+1)}``."""
    u, v = qt.coerce(bc.u), qt.coerce(bc.v)
    value = u ** left.size * v ** right.size
    if value == 0:
        return value
    return value * boundary_weight(right, bc.c_r, qt) / boundary_coweight(left, bc.c_l, qt)


def state_weight(spec, bc, s, qt):
    """
    Unnormalized weight of a dimer state.

    Parameters
    ----------
    spec : ~railyardpy.railyard.spec.RailYardSpec
    bc : ~railyardpy.railyard.spec.BoundaryCondition
    s : ~railyardpy.railyard.spec.DimerState
    qt : ~railyardpy.macdonald.params.QTParams

    Returns
    -------
    scalar
        Boundary factor times the product of the column factors, in the
        tower of ``qt``.

    Raises
    ------
    InvalidState
        If ``s`` fails :func:`validate_state`.

    """
    if not validate_state(spec, bc, s):
        raise InvalidState("{} is not a valid state of {}".format(s, spec))
    value = boundary_factor(bc, s.left, s.right, qt)
    for k, i in enumerate(spec.columns):
        if value == 0:
            break
        a, b, x = spec.column(i)
        value = value * column_factor(a, b, s[k], s[k + 1], qt.coerce(x), qt)
    return value


def column_neighbors(a, b, lam, max_size=None, max_strip=None, max_length=None, max_part=None):
    """
    Partitions ``μ^(i+1)`` allowed after ``μ^(i) = lam`` by column ``(a, b)``.

    ``max_strip`` caps the number of boxes the column adds or removes.

    """
    kind = "row" if a == "L" else "column"
    return strip_neighbors(
        lam,
        kind=kind,
        up=(b == "+"),
        max_size=max_size,
        max_length=max_length,
        max_part=max_part,
        max_strip=max_strip,
    )


def enumerate_states(spec, bc, max_size):
    """
    Every valid state with all ``|μ^(i)| <= max_size``.

    States with zero weight (a nonempty boundary at zero fugacity) are
    skipped.

    Yields
    ------
    ~railyardpy.railyard.spec.DimerState

    """
    lefts = enumerate_partitions(max_size if bc.u else 0)

    def extend(prefix, k):
        if k == len(spec):
            if boundary_allows(prefix[-1], bc.c_r) and (bc.v or not prefix[-1]):
                yield DimerState(prefix)
            return
        a, b, _ = spec.column(spec.l + k)
        for nxt in column_neighbors(a, b, prefix[-1], max_size):
            yield from extend(prefix + [nxt], k + 1)

    for left in lefts:
        if boundary_allows(left, bc.c_l):
            yield from extend([left], 0)
