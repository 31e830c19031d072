"""Certification battery tying every implemented formula to an independent oracle.

Each check returns a :class:`CheckResult`. Exact checks compare truncated
series or rational values literally; float checks report a defect against a
tolerance. A failing check is a result, never an exception.

"""
import cmath
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from railyardpy import constant
from railyardpy.contour import ContourSpec, contour_integral, separating_radius
from railyardpy.macdonald.identities import (
    DEFAULT_QT_SAMPLES,
    b_family_products,
    cauchy_oracle_sum,
    coreflection,
    even_reflection,
    exchange,
    pairing,
    quadratic_scalar_product,
    reflection,
    skew_cauchy,
    theta_el_printed_exponential,
    theta_forms,
    theta_oracle_sum,
)
from railyardpy.macdonald.oracle import oracle_for, scalar_product, z_factor
from railyardpy.macdonald.params import QTParams
from railyardpy.macdonald.specialization import Specialization
from railyardpy.macdonald.theta import single, theta_value
from railyardpy.moments import expect_gamma_contour, expect_gamma_exact, gamma_k, sigma_letters
from railyardpy.partition_function import TruncationPolicy, z_bruteforce, z_product
from railyardpy.partitions import Partition, enumerate_partitions, partitions_of
from railyardpy.railyard import BoundaryCondition, RailYardSpec

logger = logging.getLogger(__name__)

MODES = ("exact", "float")

#: Θ blocks that must tend to 1: marker, alphabet, powers of (u, v) as functions of k.
THETA_BLOCKS = (
    ("el", "sigma", (-1, 0)),
    ("oa", "sigma", (-1, 0)),
    ("el", "sigma_prime", (0, -1)),
    ("oa", "sigma_prime", (0, -1)),
    ("deel", "sigma", (-1, 0)),
    ("eoa", "sigma", (-1, 0)),
    ("deel", "sigma_prime", (0, -1)),
    ("eoa", "sigma_prime", (0, -1)),
)


class CheckResult:
    """
    Outcome of one check.

    Attributes
    ----------
    check : str
        Identifier, e.g. ``"reflection[el,eta=[1]]@(1/2,1/3)"``.
    mode : str
        ``"exact"`` or ``"float"``.
    status : str
        ``"pass"`` or ``"fail"``.
    defect : float or None
        Float mode only.
    oracle : str
        What the formula was compared against.
    detail : str

    """

    def __init__(self, check, mode, passed, oracle, defect=None, detail=""):
        if mode not in MODES:
            raise ValueError("mode should be one of {}, got {!r}".format(MODES, mode))
        self.check = check
        self.mode = mode
        self.status = "pass" if passed else "fail"
        self.defect = None if defect is None else float(defect)
        self.oracle = oracle
        self.detail = detail

    @property
    def passed(self):
        return self.status == "pass"

    def __repr__(self):
        return "CheckResult({!r}, {}, {})".format(self.check, self.mode, self.status)

    def to_dict(self):
        return {
            "check": self.check,
            "mode": self.mode,
            "status": self.status,
            "defect": self.defect,
            "oracle": self.oracle,
            "detail": self.detail,
        }


def _tag(qt):
    return "({},{})".format(qt.q, qt.t)


def _exact(name, qt, oracle, pair, expect_equal=True, detail=""):
    lhs, rhs = pair
    equal = lhs == rhs
    if equal != expect_equal:
        logger.warning("identity check %s@%s failed", name, _tag(qt))
    return CheckResult("{}@{}".format(name, _tag(qt)), "exact", equal == expect_equal, oracle, detail=detail)


def _identity_jobs(qt, degree):
    x, y, v = Fraction(1, 3), Fraction(1, 5), Fraction(2, 5)
    u_pair, v_pair = Fraction(1, 2), Fraction(2, 3)
    etas = [Partition(p) for p in ([], [1], [2], [1, 1])]
    jobs = []
    for marker in ("el", "oa"):
        for eta in etas:
            for dual in (False, True):
                jobs.append((
                    "reflection[{},eta={},dual={}]".format(marker, list(eta), dual),
                    "Θ product form",
                    lambda m=marker, e=eta, d=dual: reflection(e, m, x, qt, degree, dual=d),
                    True,
                ))
                jobs.append((
                    "coreflection[{},eta={},dual={}]".format(marker, list(eta), dual),
                    "Θ product form",
                    lambda m=marker, e=eta, d=dual: coreflection(e, m, x, qt, degree, dual=d),
                    True,
                ))
            jobs.append((
                "reflection_restricted[{},eta={}]".format(marker, list(eta)),
                "Θ product form",
                lambda m=marker, e=eta: reflection(e, m, x, qt, degree, restricted=True, v=v),
                True,
            ))
    for eta in (Partition([]), Partition([2])):
        jobs.append((
            "even_reflection[eta={}]".format(list(eta)),
            "Θ_eoa product form",
            lambda e=eta: even_reflection(e, x, qt, degree),
            True,
        ))
    for line in (1, 2, 3):
        for lam, mu in (([], []), ([1], []), ([2], [1])):
            jobs.append((
                "skew_cauchy[line={},lam={},mu={}]".format(line, lam, mu),
                "Π / Π0 product form",
                lambda l=line, a=Partition(lam), b=Partition(mu): skew_cauchy(a, b, x, y, qt, degree, line=l),
                True,
            ))
    for line in (1, 2):
        jobs.append((
            "exchange[line={}]".format(line),
            "reordered branching sum",
            lambda l=line: exchange(Partition([1]), Partition([2, 1]), x, y, qt, line=l),
            True,
        ))
    for cl, cr in (("el", "el"), ("el", "oa"), ("oa", "deel"), ("eoa", "el"), ("deel", "eoa")):
        jobs.append((
            "pairing[{},{}]".format(cl, cr),
            "pairing product formula",
            lambda a=cl, b=cr: pairing(x, y, a, b, u_pair, v_pair, qt, degree),
            True,
        ))
    jobs.append((
        "quadratic_scalar_product",
        "exponential closed form",
        lambda: quadratic_scalar_product(
            {1: Fraction(1, 2), 2: Fraction(1, 3)},
            {1: Fraction(1, 5)},
            {1: Fraction(1, 3), 2: Fraction(1, 2)},
            qt,
            degree,
        ),
        True,
    ))
    for marker in ("el", "oa", "deel", "eoa"):
        jobs.append((
            "theta_forms[{}]".format(marker),
            "Θ exponential form",
            lambda m=marker: theta_forms(m, single(x), qt, degree),
            True,
        ))
        jobs.append((
            "theta_oracle_sum[{}]".format(marker),
            "Gram-Schmidt P_λ",
            lambda m=marker: theta_oracle_sum(m, single(x), qt, degree),
            True,
        ))
    jobs.append((
        "cauchy_oracle_sum",
        "Gram-Schmidt P_λ, Q_λ",
        lambda: cauchy_oracle_sum(single(x), single(y), qt, degree),
        True,
    ))
    for lam in enumerate_partitions(min(degree, 4)):
        for idx, family in enumerate(("el", "oa")):
            jobs.append((
                "b_family[{},lam={}]".format(family, list(lam)),
                "b_λ product",
                lambda l=lam, i=idx: b_family_products(l, qt)[i],
                True,
            ))
    # printed variants that disagree away from q = t
    if qt.q != qt.t:
        jobs.append((
            "printed_theta_el_exponential",
            "Θ_el product form",
            lambda: theta_el_printed_exponential(single(x), qt, degree),
            False,
        ))
        jobs.append((
            "printed_skew_cauchy[line=3]",
            "Π0 product form",
            lambda: skew_cauchy(Partition([1]), Partition(), x, y, qt, degree, line=3, form="printed"),
            False,
        ))
    return jobs


def _mutation_jobs(qt, degree):
    x, y = Fraction(1, 3), Fraction(1, 5)
    return [
        (
            "mutation:reflection",
            "Θ product form",
            lambda: reflection(Partition(), "el", x, qt, degree, perturb=True),
            False,
        ),
        (
            "mutation:skew_cauchy",
            "Π product form",
            lambda: skew_cauchy(Partition(), Partition(), x, y, qt, degree, perturb=True),
            False,
        ),
        (
            "mutation:pairing",
            "pairing product formula",
            lambda: pairing(x, y, "el", "el", Fraction(1, 2), Fraction(2, 3), qt, degree, perturb=True),
            False,
        ),
    ]


def run_identity_suite(samples=DEFAULT_QT_SAMPLES, degree=3, mutations=True, workers=None):
    """
    Exact identity battery over a list of ``(q, t)`` samples.

    Parameters
    ----------
    samples : iterable
        ``(q, t)`` pairs of rationals, or :class:`~railyardpy.macdonald.params.QTParams`.
    degree : int
        Truncation order of every series.
    mutations : bool
        Also run perturbed identities, which pass only when the two sides differ.
    workers : int or None
        Threads over checks; the report keeps the job order.

    Returns
    -------
    list of CheckResult

    """
    if degree < 1:
        raise ValueError("degree must be at least 1, got {}".format(degree))
    jobs = []
    for sample in samples:
        qt = sample if isinstance(sample, QTParams) else QTParams(Fraction(sample[0]), Fraction(sample[1]))
        if not qt.exact:
            raise ValueError("the identity suite needs the exact tower, got {!r}".format(qt))
        batch = _identity_jobs(qt, degree)
        if mutations:
            batch += _mutation_jobs(qt, degree)
        jobs.extend((name, oracle, fn, expect, qt) for name, oracle, fn, expect in batch)

    def run(job):
        name, oracle, fn, expect, qt = job
        return _exact(name, qt, oracle, fn(), expect_equal=expect)

    if workers is None or workers <= 1:
        results = [run(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, jobs))
    logger.info(
        "identity suite: %d of %d checks passed", sum(r.passed for r in results), len(results)
    )
    return results


def _rational(x):
    return Fraction(x).limit_denominator(10 ** 6)


def _eigen_side(letters, c, qt, degree):
    """``D_{-1}`` of ``Π 1/(1 - c x)`` through the ``P_λ`` expansion."""
    oracle = oracle_for(qt)
    rho = Specialization.ordinary(*letters)
    total = qt.one * 0
    for n in range(degree + 1):
        # Π 1/(1 - c x) = Σ_n c^n h_n and h_n = Σ_{|μ|=n} p_μ / z_μ
        h_n = {mu: c ** n / z_factor(mu) for mu in partitions_of(n)}
        for lam in partitions_of(n):
            if lam.length > len(letters):
                continue
            coef = scalar_product(h_n, oracle.Q_power(lam), qt)
            if coef == 0:
                continue
            total = total + coef * gamma_k(lam, 1, qt) * oracle.evaluate_P(lam, rho)
    return total


def negut_contour_side(letters, c, q, t, contour=None, tol=constant.QUADRATURE_TOL):
    """
    ``D_{-1}(Π f(x))`` from the contour formula with ``f(z) = 1/(1 - c z)``.

    The integrand is ``Π_x (w - qx/t)/(w - qx) · g(w) / w`` with
    ``g(w) = f(w)/f(w/q)``; the contour encloses 0 and every ``q x`` and
    leaves the pole of ``g`` at ``1/c`` outside.

    """
    xs = np.asarray([complex(x) for x in letters])
    if contour is None:
        outer = [1 / c] if c != 0 else []
        radius = separating_radius(np.append(q * xs, 0.0), np.asarray(outer, dtype=np.complex128))
        contour = ContourSpec(radius)
    poles = np.append(q * xs, 0.0)
    contour.check(np.append(poles, [1 / c] if c != 0 else []))
    if c != 0 and contour.encloses(1 / c):
        raise ValueError("the contour must leave the pole 1/c = {} outside".format(1 / c))

    def integrand(w):
        w = np.asarray(w, dtype=np.complex128)
        out = (1 - c * w / q) / (1 - c * w) / w
        for x in xs:
            out = out * (w - q * x / t) / (w - q * x)
        return out

    prod_f = 1.0
    for x in letters:
        prod_f /= 1 - c * x
    return prod_f * contour_integral(integrand, contour, tol=tol).real


def negut_check(letters=(0.1,), c=0.2, q=0.4, t=0.3, contour=None, degree=8, rtol=1e-8):
    """
    The first Negut operator two ways on ``Π 1/(1 - c x)``.

    Side (a) expands the product in ``P_λ`` with coefficients from the
    ``(q, t)`` scalar product and multiplies by the eigenvalue ``γ_1(λ)``;
    side (b) is the single contour integral.

    Parameters
    ----------
    letters : sequence of float
        At most three letters.
    c : float
        ``f(z) = 1/(1 - c z)``; ``c = 0`` is ``f ≡ 1``.
    q, t : float
        Both in ``(0, 1)``.
    degree : int
        Truncation of the ``P_λ`` expansion.

    Returns
    -------
    CheckResult

    Raises
    ------
    QuadratureNotConverged

    """
    if not 1 <= len(letters) <= 3:
        raise ValueError("negut_check takes one to three letters, got {}".format(len(letters)))
    if not (0 < q < 1 and 0 < t < 1):
        raise ValueError("q and t must lie in (0, 1), got q={}, t={}".format(q, t))
    xs = [_rational(x) for x in letters]
    cq = _rational(c)
    qt = QTParams(_rational(q), _rational(t))
    eigen = float(_eigen_side(xs, cq, qt, degree))
    by_contour = negut_contour_side([float(x) for x in xs], float(cq), float(qt.q), float(qt.t), contour)
    defect = abs(eigen - by_contour) / max(1.0, abs(eigen))
    logger.info("Negut check: eigenvalue side %.15g, contour side %.15g", eigen, by_contour)
    return CheckResult(
        "negut[X={},c={},q={},t={}]".format(list(letters), c, q, t),
        "float",
        defect < rtol,
        "P_λ eigenvalue expansion",
        defect=defect,
        detail="eigenvalue {:.15g}, contour {:.15g}".format(eigen, by_contour),
    )


def theta_block_defects(u, v, eps, w=cmath.exp(1j * math.pi / 3), k=1, alpha=1.0, n=1, beta=1.0):
    """
    ``|Θ - 1|`` for every block of the moment integrand at one mesh size.

    The blocks are ``Θ_c([u^{k-1} v^k] σ_w)`` and ``Θ_c([u^k v^{k-1}] σ'_w)``
    for the four markers, at ``t = exp(-n β ε)`` and ``q = t^α``.

    Returns
    -------
    dict
        ``(marker, alphabet) -> defect``.

    """
    if k < 1:
        raise ValueError("k must be at least 1, got {}".format(k))
    qt = QTParams.from_scaling(n, beta, eps, alpha)
    sigma, sigma_prime = sigma_letters(qt)
    alphabets = {"sigma": sigma, "sigma_prime": sigma_prime}
    out = {}
    for marker, which, (du, dv) in THETA_BLOCKS:
        scale = u ** (k + du) * v ** (k + dv)
        value = theta_value(marker, alphabets[which].scaled(scale), qt, w)
        out[(marker, which)] = abs(value - 1)
    return out


def theta_el_exponent(u, v, eps, w, k=1, alpha=1.0, n=1, beta=1.0, max_terms=4096):
    """
    Series form of the pure Pochhammer part of ``Θ_el([u^{k-1} v^k] σ_w)``.

    ``Σ_r Y^r (1 - t^r)(q^r t^r - 1) / (r (1 - q^r)(1 + q^r))`` with
    ``Y = q^3 u^{2k-2} v^{2k} / (t^2 w^2)``.

    """
    qt = QTParams.from_scaling(n, beta, eps, alpha)
    q, t = qt.q, qt.t
    y = q ** 3 * u ** (2 * k - 2) * v ** (2 * k) / (t * t * w * w)
    total = 0j
    for r in range(1, max_terms + 1):
        term = y ** r * (1 - t ** r) * (q ** r * t ** r - 1) / (r * (1 - q ** r) * (1 + q ** r))
        total += term
        if abs(term) < 1e-18:
            break
    return total


def theta_vanishing_check(u=0.3, v=0.3, eps_ladder=(1e-2, 5e-3, 2.5e-3), w=cmath.exp(1j * math.pi / 3), k=1, alpha=1.0, n=1, beta=1.0, final_tol=1e-2):
    """
    Θ blocks of the moment integrand tend to 1 as the mesh shrinks.

    Passes when the largest block defect decreases strictly along the
    ladder and ends below ``final_tol``.

    Returns
    -------
    CheckResult

    """
    eps_ladder = sorted(eps_ladder, reverse=True)
    defects = [max(theta_block_defects(u, v, eps, w, k, alpha, n, beta).values()) for eps in eps_ladder]
    decreasing = all(b < a for a, b in zip(defects, defects[1:])) or max(defects) == 0
    passed = decreasing and defects[-1] < final_tol
    return CheckResult(
        "theta_vanishing[u={},v={},k={}]".format(u, v, k),
        "float",
        passed,
        "limit value 1",
        defect=defects[-1],
        detail="defects " + ", ".join("{:.3g}".format(d) for d in defects),
    )


def _float_check(name, oracle, value, reference, rtol):
    defect = abs(value - reference) / max(1.0, abs(reference))
    return CheckResult(name, "float", defect < rtol, oracle, defect=defect,
                       detail="value {:.15g}, reference {:.15g}".format(value, reference))


def consistency_checks():
    """
    Cross-module agreements on small fixtures.

    * product formula for ``Z`` against the brute-force state sum,
    * contour formula for ``E γ_1`` against the exact measure.

    """
    qf = QTParams(0.5, 1 / 3)
    spec = RailYardSpec(1, 4, "LRRL", "++--", [0.1] * 4)
    bc = BoundaryCondition("el", "el", 0.1, 0.1)
    brute = z_bruteforce(spec, bc, qf, TruncationPolicy(10))
    out = [_float_check("z_product_vs_bruteforce", "truncated state sum", z_product(spec, bc, qf), float(brute.value), 1e-8)]
    chain = RailYardSpec(0, 1, "LL", "+-", [0.2, 0.25])
    table = expect_gamma_exact(chain, BoundaryCondition(), qf, 1, pol=TruncationPolicy(12))
    contour = expect_gamma_contour(chain, BoundaryCondition(), qf, 1)
    out.append(_float_check("moment_contour_vs_measure", "exact measure table", contour, table, 1e-8))
    return out


def run_all(seed=0, degree=3, workers=None, consistency=True):
    """
    The whole battery.

    ``seed`` picks a rotation of the default ``(q, t)`` samples, so the
    report is fully determined by it.

    """
    samples = list(DEFAULT_QT_SAMPLES)
    shift = seed % len(samples)
    samples = samples[shift:] + samples[:shift]
    results = run_identity_suite(samples, degree=degree, workers=workers)
    results.append(negut_check())
    results.append(negut_check(c=0.0))
    results.append(negut_check(letters=(0.1, 0.15, 0.05)))
    results.append(theta_vanishing_check())
    results.append(theta_vanishing_check(u=0.0, v=0.0))
    if consistency:
        results.extend(consistency_checks())
    failed = [r.check for r in results if not r.passed]
    if failed:
        logger.warning("%d checks failed: %s", len(failed), ", ".join(failed))
    return results


def identity_report_json(results):
    """Deterministic JSON report of a list of :class:`CheckResult`."""
    payload = {
        "passed": all(r.passed for r in results),
        "n_checks": len(results),
        "n_failed": sum(not r.passed for r in results),
        "results": [r.to_dict() for r in results],
    }
    return json.dumps(payload, indent=2, sort_keys=True)
