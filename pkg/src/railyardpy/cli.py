"""Command-line entry point: ``railyard <subcommand> [options]``.

Inputs are JSON files, outputs are JSON and CSV files in ``--out``; every CSV
gets a gnuplot script next to it. Exit codes: 0 success, 1 a check failed or
a computation raised, 2 bad configuration.

"""
import argparse
import csv
import json
import logging
import math
import os
import sys
from fractions import Fraction

import numpy as np

from railyardpy import __version__, constant
from railyardpy.asymptotics import (
    AsymptoticProfile,
    frozen_boundary,
    height_from_slope,
    limit_shape_slope,
    profile_check,
)
from railyardpy.asymptotics.laplace import frozen_window
from railyardpy.exceptions import ConfigParseError, RailYardError
from railyardpy.macdonald import QTParams
from railyardpy.moments import (
    covariance_contour,
    expect_gamma_contour,
    expect_gamma_exact,
    mean_rescaled_height,
)
from railyardpy.partition_function import TruncationPolicy, z_bruteforce, z_product
from railyardpy.railyard import BoundaryCondition, RailYardSpec
from railyardpy.sampler import Caps, RngPolicy, SequentialSampler
from railyardpy.verification import identity_report_json, run_all

logger = logging.getLogger(__name__)

SUBCOMMANDS = ("verify", "zeta", "sample", "moments", "limitshape", "frozen")

#: Agreement required between the two routes to ``Z`` and to ``E γ_1``.
ZETA_RTOL = 1e-8
MOMENT_ATOL = 1e-6
FROZEN_DEFECT_TOL = 1e-8

_DEFAULT_QT = {"q": "1/2", "t": "1/3"}


class RunConfig:
    """
    Options of one CLI run.

    Parameters
    ----------
    subcommand : str
    spec, profile : str or None
        Paths of a graph file and of an asymptotic profile file.
    out : str
        Output directory.
    seed, threads : int
    max_size : int or None
        Partition size cap (brute force, measure tables, sampler).
    depth_K : int or None
        Number of product cycles; adaptive when ``None``.
    tol : float
        Quadrature and product tolerance.
    grid : int
    eps : float or None
    samples : int
    verbose : int
        ``-1`` quiet, ``0`` default, ``1`` debug.

    """

    FIELDS = {
        "subcommand": None,
        "spec": None,
        "profile": None,
        "out": ".",
        "seed": 0,
        "threads": 1,
        "max_size": None,
        "depth_K": None,
        "tol": constant.QUADRATURE_TOL,
        "grid": 40,
        "eps": None,
        "samples": 200,
        "verbose": 0,
    }

    def __init__(self, **kwargs):
        unknown = set(kwargs) - set(self.FIELDS)
        if unknown:
            raise ConfigParseError("unknown config keys: {}".format(", ".join(sorted(unknown))))
        for key, default in self.FIELDS.items():
            setattr(self, key, kwargs.get(key, default))
        self._validate()

    def _validate(self):
        if self.subcommand is not None and self.subcommand not in SUBCOMMANDS:
            raise ConfigParseError(
                "subcommand should be one of {}, got {!r}".format(SUBCOMMANDS, self.subcommand)
            )
        try:
            self.seed = int(self.seed)
            self.threads = int(self.threads)
            self.grid = int(self.grid)
            self.samples = int(self.samples)
            self.verbose = int(self.verbose)
            self.tol = float(self.tol)
            if self.max_size is not None:
                self.max_size = int(self.max_size)
            if self.depth_K is not None:
                self.depth_K = int(self.depth_K)
            if self.eps is not None:
                self.eps = float(self.eps)
        except (TypeError, ValueError) as exc:
            raise ConfigParseError("malformed config value: {}".format(exc))
        if not self.tol > 0:
            raise ConfigParseError("tol must be positive, got {}".format(self.tol))
        if self.eps is not None and not self.eps > 0:
            raise ConfigParseError("eps must be positive, got {}".format(self.eps))
        if self.threads < 1:
            raise ConfigParseError("threads must be at least 1, got {}".format(self.threads))
        if self.grid < 2:
            raise ConfigParseError("grid needs at least 2 points, got {}".format(self.grid))
        if self.samples < 2:
            raise ConfigParseError("samples must be at least 2, got {}".format(self.samples))
        if self.max_size is not None and self.max_size < 0:
            raise ConfigParseError("max_size must be nonnegative, got {}".format(self.max_size))
        if self.depth_K is not None and self.depth_K < 1:
            raise ConfigParseError("depth_K must be at least 1, got {}".format(self.depth_K))

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ConfigParseError("config must be a JSON object, got {}".format(type(data).__name__))
        return cls(**data)

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigParseError("config is not valid JSON: {}".format(exc))
        return cls.from_dict(data)

    def to_dict(self):
        return {key: getattr(self, key) for key in self.FIELDS}

    def updated(self, **kwargs):
        """Copy with the non-``None`` entries of ``kwargs`` replaced."""
        data = self.to_dict()
        data.update({k: v for k, v in kwargs.items() if v is not None})
        return RunConfig(**data)

    @property
    def policy(self):
        return TruncationPolicy(
            8 if self.max_size is None else self.max_size, self.depth_K, constant.PRODUCT_TOL
        )

    @property
    def workers(self):
        return None if self.threads <= 1 else self.threads


def _read_json(path, what):
    if path is None:
        raise ConfigParseError("this subcommand needs --{}".format(what))
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigParseError("cannot read {} file {!r}: {}".format(what, path, exc))
    except json.JSONDecodeError as exc:
        raise ConfigParseError("{} file {!r} is not valid JSON: {}".format(what, path, exc))


def load_spec(path):
    """
    ``(RailYardSpec, BoundaryCondition, QTParams)`` from a graph file.

    The file holds ``graph`` (a :class:`~railyardpy.railyard.RailYardSpec`
    dict), and optionally ``boundary`` and ``qt``; ``qt`` defaults to the
    exact pair ``(1/2, 1/3)``.

    Raises
    ------
    ConfigParseError

    """
    data = _read_json(path, "spec")
    if not isinstance(data, dict):
        raise ConfigParseError("spec file must hold a JSON object")
    unknown = set(data) - {"graph", "boundary", "qt"}
    if unknown:
        raise ConfigParseError("unknown spec keys: {}".format(", ".join(sorted(unknown))))
    try:
        spec = RailYardSpec.from_dict(data["graph"])
        bc = BoundaryCondition.from_dict(data.get("boundary", {}))
        qt = QTParams.from_dict(data.get("qt", _DEFAULT_QT))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigParseError("bad spec file {!r}: {!r}".format(path, exc))
    return spec, bc, qt


def load_profile(path):
    """:class:`~railyardpy.asymptotics.AsymptoticProfile` from a JSON file."""
    data = _read_json(path, "profile")
    try:
        return AsymptoticProfile.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigParseError("bad profile file {!r}: {!r}".format(path, exc))


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, np.generic):
        return x.item()
    raise TypeError("cannot serialize {!r}".format(x))


def write_json(cfg, name, payload):
    os.makedirs(cfg.out, exist_ok=True)
    path = os.path.join(cfg.out, name)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=_jsonable)
        fh.write("\n")
    logger.info("wrote %s", path)
    return path


def gnuplot_stub(csv_name, header, title):
    """A gnuplot script plotting every later column of ``csv_name`` against the first."""
    lines = [
        "# {}".format(title),
        "set datafile separator ','",
        "set key autotitle columnhead",
        "set xlabel '{}'".format(header[0]),
    ]
    plots = ["'{}' using 1:{} with linespoints".format(csv_name, k) for k in range(2, len(header) + 1)]
    lines.append("plot " + ", \\\n     ".join(plots))
    return "\n".join(lines) + "\n"


def write_csv(cfg, name, header, rows, title=""):
    """Write ``rows`` under ``header`` and the matching ``.gp`` stub."""
    os.makedirs(cfg.out, exist_ok=True)
    path = os.path.join(cfg.out, name)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(["{:.12g}".format(x) if isinstance(x, float) else x for x in row])
    stub = os.path.splitext(path)[0] + ".gp"
    with open(stub, "w") as fh:
        fh.write(gnuplot_stub(name, header, title or name))
    logger.info("wrote %s and %s", path, stub)
    return path


def cmd_verify(cfg):
    results = run_all(seed=cfg.seed, workers=cfg.workers)
    os.makedirs(cfg.out, exist_ok=True)
    path = os.path.join(cfg.out, "verify.json")
    with open(path, "w") as fh:
        fh.write(identity_report_json(results) + "\n")
    failed = [r for r in results if not r.passed]
    for r in failed:
        logger.error("check %s failed (%s)", r.check, r.detail or r.oracle)
    logger.info("%d checks, %d failed; report in %s", len(results), len(failed), path)
    return 1 if failed else 0


def cmd_zeta(cfg):
    spec, bc, qt = load_spec(cfg.spec)
    pol = cfg.policy
    brute = z_bruteforce(spec, bc, qt, pol, workers=cfg.workers)
    product = z_product(spec, bc, qt, pol)
    rel_diff = abs(product / float(brute.value) - 1)
    passed = rel_diff <= ZETA_RTOL
    write_json(
        cfg,
        "zeta.json",
        {
            "spec": spec.to_dict(),
            "boundary": bc.to_dict(),
            "qt": qt.to_dict(),
            "Z_bruteforce": float(brute.value),
            "Z_product": product,
            "tail": brute.tail,
            "n_states": brute.n_states,
            "rel_diff": rel_diff,
            "passed": passed,
        },
    )
    if not passed:
        logger.error("product and brute-force Z differ by %.3g", rel_diff)
    return 0 if passed else 1


def cmd_sample(cfg):
    spec, bc, qt = load_spec(cfg.spec)
    caps = Caps(max_size=cfg.max_size)
    sampler = SequentialSampler(spec, bc, qt, caps)
    sampler.check_caps()
    states = sampler.sample(cfg.samples, RngPolicy(cfg.seed), cfg.workers)
    write_json(
        cfg,
        "samples.json",
        {
            "spec": spec.to_dict(),
            "seed": cfg.seed,
            "boundary_mass": sampler.boundary_mass(),
            "states": [json.loads(s.to_json()) for s in states],
        },
    )
    columns = list(range(spec.l, spec.r + 2))
    rows = [[k] + [s.at(spec, m).size for m in columns] for k, s in enumerate(states)]
    write_csv(cfg, "sizes.csv", ["sample"] + ["m{}".format(m) for m in columns], rows, "partition sizes")
    return 0


def cmd_moments(cfg):
    spec, bc, qt = load_spec(cfg.spec)
    rows, worst = [], 0.0
    for i in range(spec.l, spec.r + 2):
        if i <= spec.r and spec.column(i)[0] != "L":
            logger.info("skipping column %d: the moment formula needs a_i = L", i)
            continue
        exact = float(expect_gamma_exact(spec, bc, qt, i, pol=cfg.policy))
        contour = expect_gamma_contour(spec, bc, qt, i, K=cfg.depth_K, tol=cfg.tol, workers=cfg.workers)
        diff = abs(contour - exact)
        worst = max(worst, diff)
        rows.append([i, exact, contour, diff])
    write_csv(cfg, "moments.csv", ["i", "exact", "contour", "abs_diff"], rows, "E gamma_1 by column")
    covariance = None
    if cfg.profile is not None:
        profile = load_profile(cfg.profile)
        chis = _interior_chis(profile, 4)
        if len(chis) < 2:
            raise ConfigParseError("profile {!r} has fewer than two interior points".format(cfg.profile))
        chi_d, chi_h = chis[0], chis[-1]
        covariance = {
            "chi_d": chi_d,
            "chi_h": chi_h,
            "value": covariance_contour(profile, chi_d, chi_h, tol=cfg.tol),
        }
    write_json(
        cfg,
        "moments.json",
        {
            "exact": {str(r[0]): r[1] for r in rows},
            "contour": {str(r[0]): r[2] for r in rows},
            "covariance": covariance,
        },
    )
    if worst > MOMENT_ATOL:
        logger.error("contour and exact moments differ by %.3g", worst)
        return 1
    return 0


def _interior_chis(profile, n):
    chis = np.linspace(profile.V[0], profile.V[-1], n + 2)[1:-1]
    return [float(c) for c in chis if profile.interior(float(c))]


def cmd_limitshape(cfg):
    profile = load_profile(cfg.profile)
    report = profile_check(profile) if profile.all_left else None
    if report is not None and not report.passed:
        logger.warning("profile fails its interlacing checks: %s", report.to_dict()["violations"])
    sampler = None
    if cfg.eps is not None:
        spec, bc, qt = profile.finite_graph(cfg.eps)
        caps = Caps(max_size=cfg.max_size)
        sampler = SequentialSampler(spec, bc, qt, caps)
        sampler.check_caps()
    rows = []
    for chi in _interior_chis(profile, cfg.grid):
        lo, hi = frozen_window(profile, chi, cfg.depth_K)
        pad = 0.1 * (hi - lo)
        kappas = np.linspace(lo - pad, hi + pad, cfg.grid)
        empirical = None
        if sampler is not None:
            m = profile.column_at(chi, cfg.eps)
            empirical, _ = mean_rescaled_height(
                sampler, m, kappas, cfg.eps, cfg.samples, RngPolicy(cfg.seed), cfg.workers
            )
        for idx, kappa in enumerate(kappas):
            kappa = float(kappa)
            slope = limit_shape_slope(profile, chi, kappa, cfg.depth_K)
            height = height_from_slope(profile, chi, kappa, kappa_lo=lo, K=cfg.depth_K)
            row = [chi, kappa, float(slope), float(height)]
            if empirical is not None:
                row.append(float(empirical[idx]))
            rows.append(row)
    header = ["chi", "kappa", "slope", "height"] + (["empirical"] if sampler is not None else [])
    write_csv(cfg, "limitshape.csv", header, rows, "limit shape")
    return 0


def frozen_grid(profile, n):
    """Real grid for the frozen boundary, spanning every transition point ``e^{V_p}``."""
    span = 2.0 * math.exp(max(abs(x) for x in profile.V))
    grid = np.linspace(-span, span, n)
    return grid[grid != 0]


def cmd_frozen(cfg):
    profile = load_profile(cfg.profile)
    boundary = frozen_boundary(profile, frozen_grid(profile, cfg.grid), cfg.depth_K)
    rows = []
    for (w, chi, kappa), defect in zip(boundary.rows(), boundary.defects):
        logger.debug("frozen point w=%.6g chi=%.6g kappa=%.6g double-root defect %.3g", w, chi, kappa, defect)
        rows.append([float(chi), float(kappa), float(w), float(defect)])
    write_csv(cfg, "frozen.csv", ["chi", "kappa", "w", "defect"], rows, "frozen boundary")
    bad = [r for r in rows if r[3] > FROZEN_DEFECT_TOL]
    if bad:
        logger.error("%d frozen boundary points fail the double-root test", len(bad))
        return 1
    return 0


COMMANDS = {
    "verify": cmd_verify,
    "zeta": cmd_zeta,
    "sample": cmd_sample,
    "moments": cmd_moments,
    "limitshape": cmd_limitshape,
    "frozen": cmd_frozen,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="railyard",
        description="Free-boundary Macdonald dimer models on rail-yard graphs.",
    )
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", help="RunConfig JSON; flags override its entries")
    parser.add_argument("--spec", help="graph JSON: graph, boundary, qt")
    parser.add_argument("--profile", help="asymptotic profile JSON")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--threads", type=int)
    parser.add_argument("--max-size", dest="max_size", type=int)
    parser.add_argument("--depth-K", dest="depth_K", type=int)
    parser.add_argument("--tol", type=float)
    parser.add_argument("--grid", type=int)
    parser.add_argument("--eps", type=float)
    parser.add_argument("--samples", type=int)
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", dest="verbose", action="store_const", const=1)
    verbosity.add_argument("-q", "--quiet", dest="verbose", action="store_const", const=-1)
    return parser


def config_from_args(args):
    base = RunConfig()
    if args.config:
        with open(args.config) as fh:
            base = RunConfig.from_json(fh.read())
    overrides = {k: v for k, v in vars(args).items() if k != "config"}
    return base.updated(**overrides)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except OSError as exc:
        print("railyard: cannot read config: {}".format(exc), file=sys.stderr)
        return 2
    except ConfigParseError as exc:
        print("railyard: {}".format(exc), file=sys.stderr)
        return 2
    level = {-1: logging.WARNING, 0: logging.INFO}.get(cfg.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[cfg.subcommand](cfg)
    except ConfigParseError as exc:
        logger.error("%s", exc)
        return 2
    except RailYardError as exc:
        logger.error("%s failed: %s: %s", cfg.subcommand, type(exc).__name__, exc)
        return 1
