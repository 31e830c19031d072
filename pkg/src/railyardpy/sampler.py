"""Exact distributions, sequential sampling and Monte-Carlo estimators.

The measure on partition sequences is a Markov chain with boundary weights:
``P(s) ∝ w_l(μ^(l)) Π_i f_i(μ^(i), μ^(i+1)) w_r(μ^(r+1))``. On a capped
alphabet a single right-to-left transfer pass gives the suffix normalizers,
after which every sample is drawn left to right from exact conditionals.

"""
import logging
import math
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np
from scipy.special import logsumexp

from railyardpy import constant
from railyardpy.exceptions import CapsTooTight, UniverseTooLarge
from railyardpy.macdonald.coefficients import boundary_allows, boundary_coweight, boundary_weight
from railyardpy.partition_function import (
    TruncationPolicy,
    coefficient_bound,
    float_params,
    z_bruteforce,
)
from railyardpy.partitions import Partition, partitions_of
from railyardpy.railyard.spec import (
    DimerState,
    column_factor,
    column_neighbors,
    enumerate_states,
    state_weight,
)

logger = logging.getLogger(__name__)

Estimate = namedtuple("Estimate", ["mean", "covariance", "stderr"])


class MeasureTable:
    """
    Weights over an enumerated universe of states.

    Attributes
    ----------
    spec : ~railyardpy.railyard.spec.RailYardSpec
    states : list
    probabilities : list
        Sum to ``1 - tail`` over ``states``.
    tail : float
        Bound on the relative mass outside the universe, from the brute-force
        partition function.

    """

    def __init__(self, spec, states, probabilities, tail=0.0):
        if len(states) != len(probabilities):
            raise ValueError("states and probabilities differ in length")
        if any(p < 0 for p in probabilities):
            raise ValueError("probabilities must be nonnegative")
        self.spec = spec
        self.states = list(states)
        self.probabilities = list(probabilities)
        self.tail = tail
        self._lookup = dict(zip(self.states, self.probabilities))

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(zip(self.states, self.probabilities))

    @property
    def mass(self):
        """Total probability of the universe."""
        return sum(self.probabilities)

    def probability(self, s):
        return self._lookup.get(s, 0)

    def marginal(self, m, conditional=True):
        """
        Law of ``μ^(m)`` as a ``{partition: probability}`` dict.

        With ``conditional`` the law is conditioned on the universe and sums
        to 1; otherwise it sums to ``1 - tail``.

        """
        out = {}
        for s, p in self:
            lam = s.at(self.spec, m)
            out[lam] = out.get(lam, 0) + p
        if conditional:
            mass = self.mass
            out = {lam: p / mass for lam, p in out.items()}
        return out

    def expectation(self, f, conditional=True):
        """``Σ_s P(s) f(s)``, over the universe or conditioned on it."""
        total = sum(p * f(s) for s, p in self)
        return total / self.mass if conditional else total


def exact_measure(spec, bc, qt, pol=None, guard=constant.UNIVERSE_GUARD):
    """
    Weights of every state with all ``|μ^(i)| <= N``, normalized by the full partition function.

    The missing mass is the tail bound of
    :func:`~railyardpy.partition_function.z_bruteforce`, reported but not
    required to fall below the tolerance of ``pol``.

    Parameters
    ----------
    spec : ~railyardpy.railyard.spec.RailYardSpec
    bc : ~railyardpy.railyard.spec.BoundaryCondition
    qt : ~railyardpy.macdonald.params.QTParams
    pol : ~railyardpy.partition_function.TruncationPolicy
    guard : int
        Largest universe enumerated.

    Returns
    -------
    ~railyardpy.sampler.MeasureTable

    Raises
    ------
    UniverseTooLarge
    DivergentTail
        If the tail has no finite bound.

    """
    pol = TruncationPolicy() if pol is None else pol
    states, weights = [], []
    for s in enumerate_states(spec, bc, pol.max_partition_size):
        if len(states) >= guard:
            raise UniverseTooLarge(
                "more than {} states with parts of size <= {}".format(guard, pol.max_partition_size)
            )
        w = state_weight(spec, bc, s, qt)
        if w != 0:
            states.append(s)
            weights.append(w)
    total = sum(weights)
    brute = z_bruteforce(spec, bc, qt, pol, certify=False)
    tail = brute.tail / (float(total) + brute.tail) if total else 0.0
    keep = 1 - (Fraction(tail) if qt.exact else tail)
    logger.info("exact measure over %d states, relative tail %.3g", len(states), tail)
    return MeasureTable(spec, states, [w / total * keep for w in weights], tail)


class RngPolicy:
    """
    Seeding of sample streams.

    Sample ``i`` of stream ``k`` draws from a generator seeded by
    ``SeedSequence(seed, spawn_key=(k, i))``, so a stream does not depend on
    how samples are split among workers.

    """

    def __init__(self, seed=0, stream=0):
        self.seed = int(seed)
        self.stream = int(stream)

    def __repr__(self):
        return "RngPolicy(seed={}, stream={})".format(self.seed, self.stream)

    def generator(self, index):
        return np.random.default_rng(
            np.random.SeedSequence(self.seed, spawn_key=(self.stream, int(index)))
        )

    def spawn(self, stream):
        return RngPolicy(self.seed, stream)


class Caps:
    """
    Caps on the largest part, the number of parts and the size, and the pruning threshold.

    Parameters
    ----------
    max_part, max_length : int
    max_size : int or None
        ``None`` leaves the size free inside the ``max_part × max_length`` box.
    prune : float
        Partitions whose forward weight falls below ``prune`` times the
        largest one at their position are dropped; ``0`` keeps every
        reachable partition.

    """

    def __init__(
        self,
        max_part=constant.SAMPLER_MAX_PART,
        max_length=constant.SAMPLER_MAX_LENGTH,
        max_size=None,
        prune=constant.SAMPLER_PRUNE,
    ):
        if min(max_part, max_length) < 0 or (max_size is not None and max_size < 0):
            raise ValueError("caps must be nonnegative")
        if not 0 <= prune < 1:
            raise ValueError("prune must lie in [0, 1), got {}".format(prune))
        if prune == 0 and max_size is None:
            raise ValueError("an unpruned alphabet needs max_size")
        self.max_part = int(max_part)
        self.max_length = int(max_length)
        self.max_size = None if max_size is None else int(max_size)
        self.prune = prune

    def __repr__(self):
        return "Caps(max_part={}, max_length={}, max_size={}, prune={:.3g})".format(
            self.max_part, self.max_length, self.max_size, self.prune
        )

    @property
    def log_prune(self):
        return math.log(self.prune) if self.prune > 0 else -np.inf

    @property
    def size_limit(self):
        box = self.max_part * self.max_length
        return box if self.max_size is None else min(box, self.max_size)

    def allows(self, lam):
        return lam.part(1) <= self.max_part and len(lam) <= self.max_length and lam.size <= self.size_limit

    def touches(self, lam):
        """True when ``λ`` sits on the edge of the capped alphabet."""
        return (
            lam.part(1) == self.max_part
            or len(lam) == self.max_length
            or (self.max_size is not None and lam.size == self.max_size)
        )

    def max_strip(self, x, headroom=0.0, kappa=1.0):
        """
        Largest strip a column of weight ``x`` adds or removes above the threshold.

        ``headroom <= 0`` is the log forward weight of the source relative to
        the largest one at its position, and ``kappa`` bounds the per-box
        growth of the skew coefficients. ``None`` when nothing caps the strip.

        """
        x = abs(float(x)) * kappa
        if self.prune == 0 or not 0 < x < 1:
            return None
        return max(0, int((self.log_prune - headroom) / math.log(x)) + 1)


def _lse(values):
    values = np.asarray(values, dtype=float)
    if values.size == 0 or np.all(np.isneginf(values)):
        return -np.inf
    return float(logsumexp(values))


def _log(x):
    x = float(x)
    return math.log(x) if x > 0 else -np.inf


class SequentialSampler:
    """
    Exact sampler of the capped, pruned measure.

    The alphabet of every position holds the partitions reachable from the
    left boundary inside the caps whose forward weight stays within
    ``caps.prune`` of the largest one there; the left boundary itself is
    grown one size at a time until a whole size falls under the threshold.

    Parameters
    ----------
    spec : ~railyardpy.railyard.spec.RailYardSpec
    bc : ~railyardpy.railyard.spec.BoundaryCondition
    qt : ~railyardpy.macdonald.params.QTParams
        Converted to the float tower.
    caps : ~railyardpy.sampler.Caps

    """

    def __init__(self, spec, bc, qt, caps=None):
        self.spec = spec
        self.bc = bc
        self.qt = float_params(qt)
        self.caps = Caps() if caps is None else caps
        self._build()

    def _left_alphabet(self):
        qt, bc, caps = self.qt, self.bc, self.caps
        u = abs(float(bc.u))
        if u == 0:
            return [Partition()], np.zeros(1), -np.inf
        log_u = math.log(u)
        kept, logs, dropped = [], [], []
        best = -np.inf
        for n in range(caps.size_limit + 1):
            shell = [
                (lam, n * log_u - _log(boundary_coweight(lam, bc.c_l, qt)))
                for lam in partitions_of(n, caps.max_length, caps.max_part)
                if boundary_allows(lam, bc.c_l)
            ]
            if not shell:
                continue
            best = max(best, max(w for _, w in shell))
            floor = best + caps.log_prune
            above = [(lam, w) for lam, w in shell if w >= floor]
            dropped.extend(w for _, w in shell if w < floor)
            kept.extend(lam for lam, _ in above)
            logs.extend(w for _, w in above)
            if not above:
                break
        return kept, np.array(logs), _lse(dropped)

    def _build(self):
        qt, bc, caps = self.qt, self.bc, self.caps
        v = float(bc.v)
        kappa = coefficient_bound(qt)
        left, self.left_log, pruned = self._left_alphabet()
        self.alphabets = [left]
        self.forward = [self.left_log]
        self.pruned = [pruned]
        # edges[k][src] = (dst indices, log factors)
        self.edges = []
        for i in self.spec.columns:
            a, b, x = self.spec.column(i)
            fwd = self.forward[-1]
            top = fwd.max() if fwd.size else 0.0
            x = float(x)
            incoming = {}
            capped = 0
            for src, mu in enumerate(self.alphabets[-1]):
                strip = caps.max_strip(x, fwd[src] - top, kappa)
                capped += strip is not None
                neighbours = column_neighbors(
                    a, b, mu, caps.max_size, strip, caps.max_length, caps.max_part
                )
                for lam in neighbours:
                    f = column_factor(a, b, mu, lam, x, qt)
                    if f > 0:
                        incoming.setdefault(lam, []).append((src, math.log(f)))
            lams = list(incoming)
            weights = np.array([_lse([fwd[s] + lf for s, lf in incoming[lam]]) for lam in lams])
            floor = (weights.max() if weights.size else -np.inf) + caps.log_prune
            keep = weights >= floor if np.isfinite(floor) else np.ones(len(lams), dtype=bool)
            nxt = [lam for lam, k in zip(lams, keep) if k]
            # strips cut by max_strip each weigh under top + log_prune, geometrically in their size
            skipped = (
                math.log(capped) + top + caps.log_prune - math.log1p(-abs(x) * kappa)
                if capped
                else -np.inf
            )
            self.pruned.append(_lse(np.append(weights[~keep], skipped)))
            index = {lam: j for j, lam in enumerate(nxt)}
            column_edges = [([], []) for _ in self.alphabets[-1]]
            for lam in nxt:
                for src, lf in incoming[lam]:
                    column_edges[src][0].append(index[lam])
                    column_edges[src][1].append(lf)
            self.edges.append(
                [(np.array(dst, dtype=np.int64), np.array(logf)) for dst, logf in column_edges]
            )
            self.alphabets.append(nxt)
            self.forward.append(weights[keep])
        right = self.alphabets[-1]
        self.right_log = np.array(
            [
                _log(v ** lam.size * boundary_weight(lam, bc.c_r, qt))
                if boundary_allows(lam, bc.c_r) and (v or not lam)
                else -np.inf
                for lam in right
            ]
        )
        # suffix[k][j]: log of the weight of all completions of alphabets[k][j]
        suffix = [None] * len(self.alphabets)
        suffix[-1] = self.right_log
        for k in range(len(self.edges) - 1, -1, -1):
            nxt = suffix[k + 1]
            suffix[k] = np.array([_lse(logf + nxt[dst]) for dst, logf in self.edges[k]])
        self.suffix = suffix
        self.log_z = _lse(self.left_log + suffix[0])
        if not np.isfinite(self.log_z):
            raise CapsTooTight("the capped alphabet carries no mass")
        logger.debug(
            "sampler alphabets %s, log Z %.12g", [len(al) for al in self.alphabets], self.log_z
        )

    @property
    def z(self):
        """Partition function of the capped measure."""
        return math.exp(self.log_z)

    def marginals(self):
        """
        Law of every ``μ^(m)``, left to right, as ``{partition: probability}`` dicts.

        """
        out = []
        for k, forward in enumerate(self.forward):
            probs = np.exp(forward + self.suffix[k] - self.log_z)
            out.append({lam: p for lam, p in zip(self.alphabets[k], probs) if p > 0})
        return out

    def boundary_mass(self):
        """
        Sum over positions of the mass on partitions at the caps.

        """
        return sum(
            p for marginal in self.marginals() for lam, p in marginal.items() if self.caps.touches(lam)
        )

    def pruned_mass(self):
        """
        Estimate of the mass lost to pruning.

        The dropped forward weight of every position, together with a bound
        on the strips the pruning never generated, is completed with the
        largest suffix weight kept there.

        """
        total = 0.0
        for dropped, suffix in zip(self.pruned, self.suffix):
            finite = suffix[np.isfinite(suffix)]
            if np.isfinite(dropped) and finite.size:
                total += math.exp(dropped + finite.max() - self.log_z)
        return total

    def check_caps(self, tol=constant.BOUNDARY_OCCUPANCY_TOL):
        """
        Certify the caps and the pruning.

        Returns
        -------
        float
            :meth:`boundary_mass` plus :meth:`pruned_mass`.

        Raises
        ------
        CapsTooTight
            If that sum exceeds ``tol``.

        """
        mass = self.boundary_mass() + self.pruned_mass()
        if mass > tol:
            raise CapsTooTight(
                "mass {:.3g} on partitions at the caps {} or pruned exceeds {:.3g}".format(
                    mass, self.caps, tol
                )
            )
        return mass

    @staticmethod
    def _choose(gen, logits):
        p = np.exp(logits - _lse(logits))
        return int(gen.choice(len(p), p=p / p.sum()))

    def draw(self, gen):
        """
        One state from a :class:`numpy.random.Generator`.

        """
        j = self._choose(gen, self.left_log + self.suffix[0])
        path = [self.alphabets[0][j]]
        for k, column_edges in enumerate(self.edges):
            dst, logf = column_edges[j]
            pick = self._choose(gen, logf + self.suffix[k + 1][dst])
            j = int(dst[pick])
            path.append(self.alphabets[k + 1][j])
        return DimerState(path)

    def sample(self, n_samples, rng=None, workers=None):
        """
        ``n_samples`` states; sample ``i`` uses ``rng.generator(i)``.

        """
        rng = RngPolicy() if rng is None else rng
        if workers is None or workers <= 1:
            return [self.draw(rng.generator(i)) for i in range(n_samples)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda i: self.draw(rng.generator(i)), range(n_samples)))


def sample_sequence(spec, bc, qt, caps=None, rng=None, index=0, check=True):
    """
    One exact sample of the capped measure.

    Parameters
    ----------
    spec : ~railyardpy.railyard.spec.RailYardSpec
    bc : ~railyardpy.railyard.spec.BoundaryCondition
    qt : ~railyardpy.macdonald.params.QTParams
    caps : ~railyardpy.sampler.Caps
    rng : ~railyardpy.sampler.RngPolicy
    index : int
        Position of the sample in its stream.
    check : bool
        Certify the caps first.

    Returns
    -------
    ~railyardpy.railyard.spec.DimerState

    Raises
    ------
    CapsTooTight

    """
    sampler = SequentialSampler(spec, bc, qt, caps)
    if check:
        sampler.check_caps()
    rng = RngPolicy() if rng is None else rng
    return sampler.draw(rng.generator(index))


def mc_estimate(sampler, observable, n_samples, rng=None, workers=None):
    """
    Plug-in mean, covariance and standard errors of a vector observable.

    Parameters
    ----------
    sampler : ~railyardpy.sampler.SequentialSampler
    observable : callable
        ``DimerState -> float or array``.
    n_samples : int
    rng : ~railyardpy.sampler.RngPolicy
    workers : int or None

    Returns
    -------
    ~railyardpy.sampler.Estimate

    """
    if n_samples < 2:
        raise ValueError("n_samples must be at least 2, got {}".format(n_samples))
    states = sampler.sample(n_samples, rng, workers)
    values = np.array([np.atleast_1d(np.asarray(observable(s), dtype=float)) for s in states])
    mean = values.mean(axis=0)
    cov = np.atleast_2d(np.cov(values, rowvar=False, ddof=1))
    stderr = np.sqrt(np.diag(cov) / n_samples)
    return Estimate(mean, cov, stderr)
