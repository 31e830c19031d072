"""Checks of the interlacing hypotheses under which the master equation has at most one nonreal pair."""
import itertools
import logging
import math

import numpy as np

from railyardpy.asymptotics.gfactors import f_depth
from railyardpy.asymptotics.ledger import PoleZeroLedger, _multiset_difference

logger = logging.getLogger(__name__)


class ProfileReport:
    """
    Outcome of :func:`profile_check`.

    Attributes
    ----------
    violations : list
        ``(check, message)`` pairs.
    checks : list
        Names of the checks that ran.

    """

    def __init__(self):
        self.violations = []
        self.checks = []

    def __repr__(self):
        return "ProfileReport(passed={}, {} violations)".format(self.passed, len(self.violations))

    @property
    def passed(self):
        return not self.violations

    def ran(self, name):
        if name not in self.checks:
            self.checks.append(name)

    def fail(self, name, message):
        logger.info("profile check %s failed: %s", name, message)
        self.violations.append((name, message))

    def failed(self, name):
        return any(check == name for check, _ in self.violations)

    def to_dict(self):
        return {
            "passed": self.passed,
            "checks": list(self.checks),
            "violations": [{"check": c, "message": m} for c, m in self.violations],
        }


def _close(x, y):
    return abs(x - y) <= 1e-12 * max(1.0, abs(x), abs(y))


def _interlaced(outer, inner):
    """Exactly one point of ``inner`` between each two consecutive points of ``outer``."""
    outer = sorted(outer)
    inner = np.asarray(inner, dtype=float)
    for a, b in zip(outer, outer[1:]):
        if np.sum((inner > a) & (inner < b)) != 1:
            return False
    return True


def _points(ledger, inner, families, role):
    out = []
    for a in ledger.product.atoms:
        name = a.label[0]
        if (a.degree < 0) == inner and a.label[1] == role and name.split("_")[1] in families:
            out.append(a.point)
    return out


def _ledger_checks(report, profile, chi, K, form):
    ledger = PoleZeroLedger(profile, chi, K, form)
    report.ran("distinct")
    for name, roles in ledger.sets.items():
        for role, points in roles.items():
            for x, y in itertools.combinations(points, 2):
                if _close(x, y):
                    report.fail("distinct", "{} {}s coincide at {:.6g} (chi={})".format(name, role, x, chi))
    inner_poles = _points(ledger, True, ("chi", "5"), "pole")
    inner_zeros = _points(ledger, True, ("chi", "5"), "zero")
    outer_poles = _points(ledger, False, ("chi", "6"), "pole")
    outer_zeros = _points(ledger, False, ("chi", "6"), "zero")
    d1 = _multiset_difference(inner_poles, inner_zeros)
    d2 = _multiset_difference(inner_zeros, inner_poles)
    d3 = _multiset_difference(outer_poles, outer_zeros)
    d4 = _multiset_difference(outer_zeros, outer_poles)
    report.ran("interlacing")
    if not _interlaced(d1, d2):
        report.fail("interlacing", "enclosed poles and zeros do not alternate at chi={}".format(chi))
    if not _interlaced(d3, d4):
        report.fail("interlacing", "excluded poles and zeros do not alternate at chi={}".format(chi))
    report.ran("ordering")
    c2 = min(d3) if d3 else math.inf
    c5 = max(d2) if d2 else -math.inf
    c7 = min(d4) if d4 else math.inf
    c8 = max(d1) if d1 else -math.inf
    if not c5 < c2:
        report.fail("ordering", "c5={:.6g} >= c2={:.6g} at chi={}".format(c5, c2, chi))
    if not c8 < c7:
        report.fail("ordering", "c8={:.6g} >= c7={:.6g} at chi={}".format(c8, c7, chi))


def _present(profile):
    """``(j, p, sign)`` for every residue ``j`` and segment ``p``."""
    return [(j, p, profile.b[p - 1][j - 1]) for p in range(1, profile.m + 1) for j in range(1, profile.n + 1)]


def _parameter_checks(report, profile):
    V, tau = profile.V, profile.tau
    cells = _present(profile)
    report.ran("weights")
    for (j1, p1, b1), (j2, p2, b2) in itertools.permutations(cells, 2):
        t1, t2 = tau[j1 - 1], tau[j2 - 1]
        if b1 == b2 and j1 != j2 and p1 == p2 and t1 == t2:
            report.fail("weights", "equal weights tau_{} = tau_{} share sign {} in segment {}".format(j1, j2, b1, p1))
        if b1 == "-" and b2 == "+" and p1 >= p2:
            ratio = t2 / t1
            if not (ratio < math.exp(V[p2] - V[p1 - 1]) and ratio < math.exp(V[p2 - 1] - V[p1])):
                report.fail(
                    "weights",
                    "'-' residue {} in segment {} against '+' residue {} in segment {}: ratio {:.6g} too large".format(
                        j1, p1, j2, p2, ratio
                    ),
                )
        if b1 == b2 and t1 > t2 and not t2 / t1 < math.exp(V[p2 - 1] - V[p1]):
            report.fail(
                "weights",
                "residues {} and {} of sign {}: ratio {:.6g} not below e^({:.6g})".format(
                    j1, j2, b1, t2 / t1, V[p2 - 1] - V[p1]
                ),
            )
    if profile.u > 0 and profile.v > 0:
        report.ran("fugacities")
        bound = max(profile.u, profile.v)
        for (j1, p1, b1), (j2, p2, b2) in itertools.product(cells, repeat=2):
            if b1 != b2:
                continue
            limit = math.exp(V[p2 - 1] - V[p1]) * tau[j1 - 1] / tau[j2 - 1]
            if not bound < limit:
                report.fail(
                    "fugacities",
                    "max(u, v)={:.6g} not below {:.6g} for ({}, {}) and ({}, {})".format(bound, limit, j1, p1, j2, p2),
                )


def profile_check(profile, chis=None, K=None, form="derived"):
    """
    Check the zero/pole interlacing of the master equation and the parameter inequalities behind it.

    Parameters
    ----------
    profile : ~railyardpy.asymptotics.profile.AsymptoticProfile
        Must have only ``L`` columns.
    chis : list or None
        Positions at which the ledger is inspected; the segment midpoints by default.
    K : int or None
        Depth of the boundary factors.
    form : str

    Returns
    -------
    ProfileReport

    """
    if not profile.all_left:
        raise ValueError("interlacing checks need every column on the L side, got {!r}".format(profile.a))
    report = ProfileReport()
    if chis is None:
        chis = [(a + b) / 2 for a, b in zip(profile.V, profile.V[1:])]
    for chi in chis:
        depth = f_depth(profile, chi, form=form) if K is None else K
        _ledger_checks(report, profile, chi, depth, form)
    _parameter_checks(report, profile)
    return report
