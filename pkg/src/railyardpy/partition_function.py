"""Partition function of the doubly-free-boundary rail-yard measure.

Two independent routes are provided. :func:`z_bruteforce` sums the state
weights through a sparse transfer product over a truncated universe of
partitions. :func:`z_product` evaluates the infinite-product formula: the
``H`` prefactor over the ``(+, -)`` column pairs times the pairing of the
minus letters against the plus letters.

"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.signal import lfilter

from railyardpy import constant
from railyardpy.exceptions import DivergentTail, TruncationTooCoarse
from railyardpy.macdonald.coefficients import boundary_allows, boundary_coweight, boundary_weight
from railyardpy.macdonald.pairing import pair_block
from railyardpy.macdonald.params import QTParams
from railyardpy.macdonald.products import MobiusLedger, ledger_of
from railyardpy.macdonald.theta import kernel_factors, theta_factors
from railyardpy.partitions import enumerate_partitions, partitions_of
from railyardpy.railyard.spec import column_factor, column_neighbors

logger = logging.getLogger(__name__)


class TruncationPolicy:
    """
    Truncation of the sums and products behind a partition function.

    Parameters
    ----------
    max_partition_size : int
        ``N``: partitions of the brute-force universe have at most ``N`` boxes.
    product_depth : int or None
        ``K``: number of reflection cycles kept in the infinite product;
        ``None`` chooses ``K`` adaptively.
    tail_tolerance : float
        ``τ``.

    """

    def __init__(self, max_partition_size=8, product_depth=None, tail_tolerance=1e-10):
        if max_partition_size < 0:
            raise ValueError("max_partition_size must be nonnegative, got {}".format(max_partition_size))
        if product_depth is not None and product_depth < 1:
            raise ValueError("product_depth must be at least 1, got {}".format(product_depth))
        if not tail_tolerance > 0:
            raise ValueError("tail_tolerance must be positive, got {}".format(tail_tolerance))
        self.max_partition_size = int(max_partition_size)
        self.product_depth = product_depth
        self.tail_tolerance = tail_tolerance

    @classmethod
    def from_dict(cls, data):
        return cls(
            data.get("max_partition_size", 8),
            data.get("product_depth"),
            data.get("tail_tolerance", 1e-10),
        )

    def __repr__(self):
        return "TruncationPolicy(N={}, K={}, tau={})".format(
            self.max_partition_size, self.product_depth, self.tail_tolerance
        )


class BruteForceResult:
    """
    Truncated state sum.

    Attributes
    ----------
    value : Fraction or float
        Sum over the states with every ``|μ^(i)| <= N``.
    tail : float
        Bound on the omitted weight, from :func:`tail_bound`.
    n_states : int

    """

    def __init__(self, value, tail, n_states):
        self.value = value
        self.tail = tail
        self.n_states = n_states

    def __repr__(self):
        return "BruteForceResult(value={!r}, tail={:.3g}, n_states={})".format(
            self.value, self.tail, self.n_states
        )

    def __float__(self):
        return float(self.value)


def float_params(qt):
    """Copy of ``qt`` in the float tower."""
    if not qt.exact:
        return qt
    return QTParams(float(qt.q), float(qt.t), exact=False, jack_alpha=qt.jack_alpha)


def _left_weights(bc, qt, max_size):
    u = qt.coerce(bc.u)
    out = {}
    for lam in enumerate_partitions(max_size if u else 0):
        if boundary_allows(lam, bc.c_l):
            out[lam] = u ** lam.size / boundary_coweight(lam, bc.c_l, qt)
    return out


def _transfer(spec, bc, qt, start, max_size):
    # sparse row vector times the column transfer matrices
    weights = dict(start)
    counts = {lam: 1 for lam in weights}
    for i in spec.columns:
        a, b, x = spec.column(i)
        x = qt.coerce(x)
        nxt_weights, nxt_counts = {}, {}
        for mu, w in weights.items():
            for lam in column_neighbors(a, b, mu, max_size):
                f = column_factor(a, b, mu, lam, x, qt)
                if f == 0:
                    continue
                nxt_weights[lam] = nxt_weights.get(lam, 0) + w * f
                nxt_counts[lam] = nxt_counts.get(lam, 0) + counts[mu]
        weights, counts = nxt_weights, nxt_counts
    v = qt.coerce(bc.v)
    total, n_states = qt.one * 0, 0
    for lam, w in weights.items():
        if not boundary_allows(lam, bc.c_r) or (lam and not v):
            continue
        total += w * v ** lam.size * boundary_weight(lam, bc.c_r, qt)
        n_states += counts[lam]
    return total, n_states


def _truncated_sum(spec, bc, qt, max_size, workers=None):
    lefts = list(_left_weights(bc, qt, max_size).items())
    if workers is None or workers <= 1 or len(lefts) <= 1:
        return _transfer(spec, bc, qt, lefts, max_size)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda item: _transfer(spec, bc, qt, [item], max_size), lefts))
    # reduce in the order of the left boundary partitions
    total, n_states = qt.one * 0, 0
    for value, count in parts:
        total += value
        n_states += count
    return total, n_states


def coefficient_bound(qt):
    """``κ = max(1, (1-t)/(1-q), (1-q)/(1-t))``, the per-box growth allowed to skew coefficients."""
    q, t = float(qt.q), float(qt.t)
    return max(1.0, (1 - t) / (1 - q), (1 - q) / (1 - t))


def box_channels(spec, bc, qt):
    """
    Per-box ratios of the channels through which a state gains boxes.

    Every ratio already carries the coefficient bound
    ``κ = max(1, (1-t)/(1-q), (1-q)/(1-t))``.

    Returns
    -------
    tuple
        ``(geometric, mixed, free)``: ratios of the infinite channels (a
        plus letter before a minus letter of the same side, and the
        reflections at either boundary), ratios of the ``(L, R)`` mixed
        pairs, which carry at most one box, and the ratio ``κ u v`` of the
        free boundary pairing.

    """
    kappa = coefficient_bound(qt)
    u, v = abs(float(bc.u)), abs(float(bc.v))
    cols = [spec.column(i) for i in spec.columns]
    geometric, mixed = [], []
    for j, (a1, b1, x1) in enumerate(cols):
        x1 = abs(float(x1))
        geometric.append((v if b1 == "+" else u) * x1)
        for a2, b2, x2 in cols[j:]:
            x2 = abs(float(x2))
            if b1 == b2:
                geometric.append((v * v if b1 == "+" else u * u) * x1 * x2)
            else:
                geometric.append(u * v * x1 * x2)
        for a2, b2, x2 in cols[j + 1:]:
            if b1 == "+" and b2 == "-":
                (geometric if a1 == a2 else mixed).append(x1 * abs(float(x2)))
    geometric = [kappa * r for r in geometric if r > 0]
    mixed = [kappa * r for r in mixed if r > 0]
    return geometric, mixed, kappa * u * v


def tail_bound(spec, bc, qt, max_size, depth=None):
    """
    Bound on the weight of the states with some ``|μ^(i)| > max_size``.

    A state with a partition of size ``s`` takes at least ``s`` boxes from
    the channels of :func:`box_channels`, so the weight beyond ``max_size``
    is at most the tail ``Σ_{d > N} g_d`` of the majorant series
    ``Π 1/(1 - r z) · Π (1 + r z) · Π_k 1/(1 - (κuv)^k z^k)`` at ``z = 1``.

    Raises
    ------
    DivergentTail
        If a channel ratio is not below 1.

    """
    geometric, mixed, free = box_channels(spec, bc, qt)
    top = max(geometric + [free, 0.0])
    if top >= 1:
        raise DivergentTail("a box channel has ratio {:.3g} >= 1; no geometric bound".format(top))
    if top == 0 and len(mixed) <= max_size:
        return 0.0
    if depth is None:
        extra = 64 if top == 0 else math.ceil(math.log(constant.TAIL_RESOLUTION) / math.log(top))
        depth = max_size + len(mixed) + extra
    if depth > max_size + constant.TAIL_MAX_DEGREE:
        raise DivergentTail("box ratio {:.3g} is too close to 1 to bound the tail".format(top))
    coeffs = np.zeros(depth + 1)
    coeffs[0] = 1.0
    for r in geometric:
        coeffs = lfilter([1.0], [1.0, -r], coeffs)
    for r in mixed:
        coeffs = np.convolve(coeffs, [1.0, r])[: depth + 1]
    k = 1
    while free > 0 and k <= depth and free ** k > 0:
        den = np.zeros(k + 1)
        den[0], den[k] = 1.0, -(free ** k)
        coeffs = lfilter([1.0], den, coeffs)
        k += 1
    return float(coeffs[max_size + 1:].sum())


def z_bruteforce(spec, bc, qt, pol=None, workers=None, certify=True):
    """
    Partition function by direct summation over a truncated universe.

    Parameters
    ----------
    spec : ~railyardpy.railyard.spec.RailYardSpec
    bc : ~railyardpy.railyard.spec.BoundaryCondition
    qt : ~railyardpy.macdonald.params.QTParams
        The exact tower gives an exact truncated sum.
    pol : ~railyardpy.partition_function.TruncationPolicy
    workers : int or None
        Threads over the left boundary partitions.
    certify : bool
        Demand ``tail <= τ |value|``; without it the bound is only reported.

    Returns
    -------
    ~railyardpy.partition_function.BruteForceResult

    Raises
    ------
    DivergentTail
        If the tail bound is not finite, or exceeds the tolerance of ``pol``
        under ``certify``.

    """
    pol = TruncationPolicy() if pol is None else pol
    n = pol.max_partition_size
    tail = tail_bound(spec, bc, float_params(qt), n)
    value, n_states = _truncated_sum(spec, bc, qt, n, workers)
    if certify and tail > pol.tail_tolerance * abs(float(value)):
        raise DivergentTail(
            "tail bound {:.3g} exceeds {:.3g} of the truncated sum at N={}".format(
                tail, pol.tail_tolerance, n
            )
        )
    logger.info("brute-force Z over %d states, tail bound %.3g", n_states, tail)
    return BruteForceResult(value, tail, n_states)


def prefactor_factors(spec, qt, columns=None):
    """
    ``H(ρ_j; ρ_k)`` factors over column pairs ``j < k`` with ``(b_j, b_k) = (+, -)``.

    """
    columns = list(spec.columns if columns is None else columns)
    out = []
    for idx, j in enumerate(columns):
        if spec.column(j)[1] != "+":
            continue
        for k in columns[idx + 1 :]:
            if spec.column(k)[1] == "-":
                out += kernel_factors("H", spec.letter(j), spec.letter(k), qt)
    return out


def z_prefactor(spec, qt):
    return ledger_of(prefactor_factors(spec, float_params(qt))).evaluate(1.0).real


def free_boundary_sum(bc, qt, max_size=None, tol=constant.PRODUCT_TOL):
    """
    ``Σ_τ b^{c_l}_τ / b̄^{c_r}_τ (uv)^{|τ|}`` over partitions allowed by both markers.

    Shells ``|τ| = n`` are added until one drops below ``tol / 10``.

    Raises
    ------
    TruncationTooCoarse
        If ``max_size`` shells do not reach the tolerance.

    """
    uv = qt.coerce(bc.u) * qt.coerce(bc.v)
    total = qt.one
    if uv == 0:
        return total
    n = 0
    while True:
        n += 1
        if max_size is not None and n > max_size:
            raise TruncationTooCoarse(
                "free-boundary sum not converged after {} shells".format(max_size)
            )
        shell = qt.one * 0
        for tau in partitions_of(n):
            if boundary_allows(tau, bc.c_l) and boundary_allows(tau, bc.c_r):
                shell += boundary_weight(tau, bc.c_l, qt) / boundary_coweight(tau, bc.c_r, qt)
        shell = shell * uv ** n
        total += shell
        if shell != 0 and abs(float(shell)) < tol / 10:
            logger.debug("free-boundary sum converged after %d shells", n)
            return total
        if shell == 0 and n > 1 and float(abs(uv)) ** n < tol / 10:
            return total


def pair_ledger(rho1, rho2, bc, qt, depth=None, tol=constant.PRODUCT_TOL, nodes=1.0, form="derived"):
    """
    Product part of the pairing ``Pair(ρ1, ρ2)`` as a :class:`MobiusLedger`.

    Parameters
    ----------
    rho1, rho2 : ~railyardpy.macdonald.specialization.Specialization
        ``ρ1`` sits on the ``u`` (left) side.
    bc : ~railyardpy.railyard.spec.BoundaryCondition
    qt : ~railyardpy.macdonald.params.QTParams
        Float tower.
    depth : int or None
        Number of reflection cycles; ``None`` doubles it until the last
        cycle differs from 1 by less than ``tol / 10`` at ``nodes``.
    nodes : complex or array
        Points of the formal variable at which the last cycle is checked.

    Returns
    -------
    tuple
        ``(ledger, depth)``.

    Raises
    ------
    TruncationTooCoarse

    """
    qt = float_params(qt)
    u, v = float(bc.u), float(bc.v)
    nodes = np.atleast_1d(np.asarray(nodes, dtype=np.complex128))

    def block(k):
        return ledger_of(pair_block(rho1, rho2, bc.c_l, bc.c_r, u, v, qt, k, form))

    def deviation(b):
        return float(np.max(np.abs(b.evaluate(nodes) - 1))) if len(b) else 0.0

    if depth is not None:
        ledger = MobiusLedger()
        for k in range(depth):
            last = block(k)
            ledger = ledger * last
        dev = deviation(last)
        if dev > tol:
            raise TruncationTooCoarse(
                "cycle {} still differs from 1 by {:.3g} > {:.3g}".format(depth - 1, dev, tol)
            )
        return ledger, depth
    ledger, k = MobiusLedger(), 0
    target = 1
    while True:
        while k < target:
            last = block(k)
            ledger = ledger * last
            k += 1
        dev = deviation(last)
        logger.debug("pairing depth %d, last cycle deviation %.3g", k, dev)
        if dev < tol / 10:
            return ledger, k
        target *= 2
        if target > constant.PRODUCT_MAX_DEPTH:
            raise TruncationTooCoarse(
                "pairing product not converged at depth {} (deviation {:.3g})".format(k, dev)
            )


def pair_value(rho1, rho2, bc, qt, depth=None, tol=constant.PRODUCT_TOL, max_size=None, form="derived"):
    """
    ``Pair(ρ1, ρ2)``: the product part times the free-boundary sum.

    """
    ledger, _ = pair_ledger(rho1, rho2, bc, qt, depth=depth, tol=tol, form=form)
    free = free_boundary_sum(bc, float_params(qt), max_size=max_size, tol=tol)
    return ledger.evaluate(1.0).real * float(free)


def z_product(spec, bc, qt, pol=None, form="derived"):
    """
    Partition function from the infinite-product formula.

    ``Z = Π_{j<k, (b_j,b_k)=(+,-)} H(ρ_j; ρ_k) · Pair(X^-, X^+)``, with
    ordinary letters for L columns and dual letters for R columns.

    Parameters
    ----------
    spec : ~railyardpy.railyard.spec.RailYardSpec
    bc : ~railyardpy.railyard.spec.BoundaryCondition
    qt : ~railyardpy.macdonald.params.QTParams
    pol : ~railyardpy.partition_function.TruncationPolicy
    form : str
        ``"printed"`` swaps the markers on the plus-letter factors.

    Returns
    -------
    float

    Raises
    ------
    TruncationTooCoarse

    """
    pol = TruncationPolicy() if pol is None else pol
    qf = float_params(qt)
    pre = z_prefactor(spec, qf)
    pair = pair_value(
        spec.minus_letters(),
        spec.plus_letters(),
        bc,
        qf,
        depth=pol.product_depth,
        tol=pol.tail_tolerance,
        form=form,
    )
    logger.info("product Z: prefactor %.12g, pairing %.12g", pre, pair)
    return pre * pair


def z_halfspace(spec, c_l, u, qt, pol=None):
    """
    Partition function with an empty right boundary (``v = 0``).

    ``Z = Π H(ρ_j; ρ_k) · Θ_{c_l}(u X^-)``; no infinite product over
    reflection cycles remains. With ``pol`` the ``Θ`` products drop their terms
    below its tail tolerance.

    """
    qf = float_params(qt)
    cutoff = constant.POCHHAMMER_CUTOFF if pol is None else pol.tail_tolerance
    factors = theta_factors(c_l, spec.minus_letters().scaled(float(u)), qf)
    theta = ledger_of(factors, cutoff)
    logger.debug("half-space Z with Θ_%s over %d factors", c_l, len(theta))
    return z_prefactor(spec, qf) * theta.evaluate(1.0).real
