#!/usr/bin/env python
"""Corner shuffle lab: every experiment as a reproducible run.

Curves are written as CSV (columns t, value, lo, hi, method) preceded by
``# `` lines of JSON metadata; reports are JSON. Logs go to stderr.

Some examples:
```
cornershuffle exact --family S --n 4 --k 1 --t 0:40:80
cornershuffle simulate --family S0 --n 12 --k 1 --t 1:2000:60:log --reps 20000
cornershuffle verify-decomposition --n 6 --exhaustive
cornershuffle spectral-bound --n 3 --t 0:200:100 --check
cornershuffle selftest --outdir selftest
```

Exit status: 0 ok, 2 invalid configuration, 3 cap exceeded, 4 a
verification failed.
"""
import argparse
import concurrent.futures
import contextlib
import dataclasses
import json
import logging
import sys
import typing

import numpy as np
import pandas as pd

from cornershuffle import comparison
from cornershuffle import geometry
from cornershuffle import mixing
from cornershuffle import spectral
from cornershuffle import walk
from cornershuffle.errors import CapExceeded
from cornershuffle.errors import DomainError
from cornershuffle.errors import VerificationFailure
from cornershuffle.scripts import output
from cornershuffle.scripts import selftest
from cornershuffle.walk.group import FULL_GROUP_MAX_N

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CAP = 3
EXIT_VERIFICATION = 4

CAPS = {
    "state_cap": walk.STATE_CAP,
    "full_group_max_n": FULL_GROUP_MAX_N,
    "exhaustive_max_n": comparison.EXHAUSTIVE_MAX_N,
    "partition_max_m": spectral.PARTITION_MAX_M,
    "spectrum_max_m": spectral.SPECTRUM_MAX_M,
}
UNBOUNDED = sys.maxsize

LOG_FORMAT = (
    "[%(levelname)s:%(process)d %(module)s:%(lineno)d %(asctime)s] " "%(message)s"
)


@dataclasses.dataclass
class RunConfig:
    """Everything that determines a run's output, embedded in the output."""

    command: str
    n: int = None
    k: typing.Union[int, str] = None
    family: str = "S"
    t: str = None
    reps: int = 10000
    seed: int = 0
    tol: float = walk.DEFAULT_TOL
    rational: bool = False
    output: str = None
    format: str = "csv"
    threads: int = 1
    strategy: str = "helpers"
    exhaustive: bool = True
    samples: int = 1000
    m: int = None
    bound: str = "counting"
    alpha: float = 0.25
    horizon: float = 60.0
    review_dt: float = 1.0
    check: bool = False
    outdir: str = "selftest"
    state_cap: int = None
    full_group_max_n: int = None
    exhaustive_max_n: int = None
    partition_max_m: int = None
    spectrum_max_m: int = None
    unsafe_caps: bool = False

    @classmethod
    def from_flags(cls, flags):
        values = vars(flags)
        names = [f.name for f in dataclasses.fields(cls)]
        return cls(**{name: values[name] for name in names if name in values})

    def caps(self):
        """Effective caps; raising one above its default needs unsafe_caps."""
        caps = {}
        for name, default in CAPS.items():
            value = getattr(self, name)
            if value is None:
                value = UNBOUNDED if self.unsafe_caps else default
            elif value > default and not self.unsafe_caps:
                raise DomainError(
                    "--%s=%d exceeds the default %d; pass --unsafe-caps"
                    % (name.replace("_", "-"), value, default)
                )
            caps[name] = value
        return caps

    def times(self):
        if self.t is None:
            raise DomainError(
                "%s needs a time grid --t min:max:points[:log]" % self.command
            )
        return parse_time_grid(self.t)

    def require(self, *names):
        for name in names:
            if getattr(self, name) is None:
                raise DomainError("%s needs --%s" % (self.command, name))
        if self.n is not None and self.n < 1:
            raise DomainError("Array side must be positive, got %d" % self.n)


def parse_time_grid(grid):
    """Parses "min:max:points" or "min:max:points:log"."""
    parts = grid.split(":")
    if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "log"):
        raise DomainError("Time grid '%s' does not match min:max:points[:log]" % grid)
    try:
        t_min, t_max, points = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise DomainError("Time grid '%s' has a non-numeric field" % grid) from None
    return mixing.time_grid(t_min, t_max, points, log=len(parts) == 4)


def _tuple_size(value):
    return "full" if value == "full" else int(value)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise DomainError(message)


def _common_flags():
    common = _Parser(add_help=False)
    common.add_argument(
        "-v", "--verbose", action="store_true", help="Log at DEBUG level."
    )
    common.add_argument(
        "-q", "--quiet", action="store_true", help="Log warnings and errors only."
    )
    common.add_argument(
        "-o", "--output", default=None, help="Output path. Defaults to stdout."
    )
    common.add_argument(
        "--format",
        default="csv",
        choices=["csv", "json"],
        help="Format of curve and table outputs. Defaults to 'csv'.",
    )
    common.add_argument("--seed", type=int, default=0, help="Random seed.")
    common.add_argument(
        "--threads",
        type=int,
        default=1,
        help="Worker threads for curve points, replicates and scans.",
    )
    for name, default in CAPS.items():
        common.add_argument(
            "--%s" % name.replace("_", "-"),
            type=int,
            default=None,
            help="Override the %s cap (default %d)." % (name, default),
        )
    common.add_argument(
        "--unsafe-caps",
        action="store_true",
        help="Lift every cap, allowing arbitrarily large computations.",
    )
    return common


def _add_grid(parser, required=True):
    parser.add_argument(
        "--t",
        required=required,
        help="Time grid min:max:points, with a trailing ':log' for geometric "
        "spacing, e.g. 0:40:80 or 1:2000:60:log.",
    )


def _add_family(parser, choices=("S0", "S", "R"), default="S"):
    parser.add_argument(
        "--family",
        default=default,
        choices=choices,
        help="Shuffle: S0 (upper-left moves), S (both corners) or R "
        "(three-cycles). Defaults to '%s'." % default,
    )


def make_parser():
    parser = _Parser(description="Corner shuffle lab.")
    commands = parser.add_subparsers(dest="command", required=True)
    common = _common_flags()

    def command(name, help):
        return commands.add_parser(name, help=help, parents=[common])

    p = command("simulate", "Monte Carlo k-set distance curve.")
    _add_family(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--reps", type=int, default=10000)
    _add_grid(p)

    p = command("exact", "Exact k-set distance curve.")
    _add_family(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument(
        "--k", type=_tuple_size, required=True, help="Tracked cards, or 'full'."
    )
    p.add_argument("--tol", type=float, default=walk.DEFAULT_TOL)
    p.add_argument(
        "--rational",
        action="store_true",
        help="Sum the jump series in exact rational arithmetic (k = 1, n <= 3).",
    )
    _add_grid(p)

    p = command("exact-full", "Exact whole-deck distance curve (n <= 3).")
    _add_family(p, choices=("S0", "S"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tol", type=float, default=walk.DEFAULT_TOL)
    _add_grid(p)

    p = command("bounds", "Lower bound curves.")
    _add_family(p, choices=("S0", "S"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--bound", default="counting", choices=["counting", "stuck-card"])
    _add_grid(p)

    p = command("verify-decomposition", "Decompose three-cycles into corner moves.")
    p.add_argument("--n", type=int, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true", default=True)
    mode.add_argument(
        "--sample", dest="samples", type=int, default=None, help="Sample size."
    )
    p.add_argument("--strategy", default="helpers", choices=comparison.STRATEGIES)

    p = command("compare-constant", "Comparison constant B against R.")
    _add_family(p, choices=("S0", "S"), default="S0")
    p.add_argument("--n", type=int, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true", default=True)
    mode.add_argument("--sample", dest="samples", type=int, default=None)
    p.add_argument("--strategy", default="helpers", choices=comparison.STRATEGIES)

    p = command("characters", "Character table at the three-cycle class.")
    p.add_argument("--m", type=int, required=True)

    p = command("spectral-bound", "Upper bound lemma curve.")
    _add_family(p, choices=("S0", "S"))
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--alpha", type=float, default=0.25)
    p.add_argument(
        "--check",
        action="store_true",
        help="Compare against the exact whole-deck distance (n <= 3).",
    )
    p.add_argument("--horizon", type=float, default=60.0)
    p.add_argument("--strategy", default="auto", choices=comparison.STRATEGIES)
    _add_grid(p)

    p = command("geometry", "Jump-set geometry report.")
    p.add_argument("--n", type=int, required=True)

    p = command("coupling", "Maximal coupling times of two k-card chains.")
    _add_family(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--review-dt", type=float, default=1.0)
    _add_grid(p, required=False)

    p = command("selftest", "Run every acceptance check.")
    p.add_argument("--outdir", default="selftest")
    return parser


def _normalize(flags):
    # --sample N selects sampled mode; neither flag means exhaustive.
    if getattr(flags, "samples", 0) is None:
        flags.samples = 1000
    elif hasattr(flags, "samples"):
        flags.exhaustive = False
    return flags


def simulate(config, caps, threadpool):
    config.require("n", "k")
    curve = mixing.kset_distance_mc_curve(
        config.family,
        config.k,
        config.times(),
        config.reps,
        config.seed,
        n=config.n,
        threadpool=threadpool,
    )
    return curve, EXIT_OK


def exact(config, caps, threadpool):
    config.require("n", "k")
    if config.k == "full" or config.k == config.n * config.n:
        return exact_full(config, caps, threadpool)
    curve = mixing.kset_distance_curve(
        config.family,
        config.k,
        config.times(),
        n=config.n,
        tol=config.tol,
        state_cap=caps["state_cap"],
        rational=config.rational,
        threadpool=threadpool,
    )
    return curve, EXIT_OK


def exact_full(config, caps, threadpool):
    config.require("n")
    curve = mixing.full_tv_curve(
        config.family,
        config.times(),
        n=config.n,
        tol=config.tol,
        max_n=caps["full_group_max_n"],
    )
    return curve, EXIT_OK


def bounds(config, caps, threadpool):
    config.require("n")
    curve = mixing.bound_curve(config.bound, config.family, config.n, config.times())
    return curve, EXIT_OK


def verify_decomposition(config, caps, threadpool):
    config.require("n")
    report = comparison.verify_decompositions(
        config.n,
        exhaustive=config.exhaustive,
        samples=config.samples,
        seed=config.seed,
        strategy=config.strategy,
        max_n=caps["exhaustive_max_n"],
        threadpool=threadpool,
    )
    return report, EXIT_OK if report["ok"] else EXIT_VERIFICATION


def compare_constant(config, caps, threadpool):
    config.require("n")
    report = comparison.comparison_constant(
        config.n,
        config.family,
        exhaustive=config.exhaustive,
        samples=config.samples,
        seed=config.seed,
        strategy=config.strategy,
        max_n=caps["exhaustive_max_n"],
        threadpool=threadpool,
    )
    status = EXIT_VERIFICATION if report.failures else EXIT_OK
    return report.to_dict(), status


def characters(config, caps, threadpool):
    config.require("m")
    m = config.m
    tau = spectral.three_cycle_class(m)
    rows = []
    for p in spectral.partitions(m, max_m=caps["partition_max_m"]):
        d = spectral.dimension(p)
        chi = spectral.mn_character(p, tau)
        r = spectral.ingram_r(p)
        if r * d != chi:
            raise VerificationFailure(
                "Three-cycle ratio of %r is %s but chi/d = %d/%d" % (p, r, chi, d)
            )
        bound, case = spectral.char_bounds(p)
        rows.append(
            {
                "partition": ",".join(str(x) for x in p),
                "d": str(d),
                "chi3": str(chi),
                "r": str(r),
                "r_float": float(r),
                "bound": str(bound),
                "case": case,
            }
        )
    return pd.DataFrame(rows), EXIT_OK


def spectral_bound(config, caps, threadpool):
    config.require("n")
    n, times = config.n, config.times()
    report = comparison.comparison_constant(
        n, config.family, strategy=config.strategy, max_n=caps["exhaustive_max_n"]
    )
    c = report.constant()
    lambda2 = spectral.alternating_mean_sign(n, config.family)
    values = spectral.ubl_bound(n, times, c, lambda2, max_m=caps["spectrum_max_m"])
    near, rest = spectral.ubl_partial_sums(
        n, times, config.alpha, max_m=caps["spectrum_max_m"]
    )
    metadata = {
        "c": str(c),
        "lambda2": str(lambda2),
        "time_scale": "R-time t; the corner shuffle is bounded at c*t",
        "partial_sums": {"alpha": config.alpha, "near": near, "rest": rest},
    }
    status = EXIT_OK
    if config.check:
        shuffle_times = np.minimum(float(c) * times, config.horizon)
        exact_curve = mixing.full_tv_curve(
            config.family, shuffle_times, n=n, max_n=caps["full_group_max_n"]
        )
        holds = values >= exact_curve.values - config.tol
        metadata["check"] = {
            "horizon": config.horizon,
            "exact": exact_curve.values,
            "holds": bool(holds.all()),
        }
        if not holds.all():
            status = EXIT_VERIFICATION
    curve = mixing.DistanceCurve(
        family=config.family,
        n=n,
        k="full",
        times=times,
        values=values,
        method="bound",
        metadata=metadata,
    )
    return curve, status


def geometry_(config, caps, threadpool):
    config.require("n")
    report = geometry.geometry_report(config.n)
    failed = False in (report["rate_claim_holds"], report["common_claim_holds"])
    return report, EXIT_VERIFICATION if failed else EXIT_OK


def coupling(config, caps, threadpool):
    config.require("n")
    run = geometry.coupling_times(
        config.n,
        config.k,
        config.reps,
        config.seed,
        review_dt=config.review_dt,
        family=config.family,
        state_cap=caps["state_cap"],
        threadpool=threadpool,
    )
    summary = {
        "mean": run.mean(),
        "quantiles": {str(q): v for q, v in run.quantiles().items()},
        "starts": run.starts,
        "strategy": run.strategy,
    }
    if config.t is not None:
        times = config.times()
        p, se = geometry.survival(run, times)
        summary["survival"] = {"t": times, "p": p, "se": se}
    return (run.to_frame(), {"coupling": summary}), EXIT_OK


def selftest_(config, caps, threadpool):
    results = selftest.run(
        config.outdir, seed=config.seed, threadpool=threadpool, config=config
    )
    passed = all(r["passed"] for r in results)
    return {"criteria": results, "passed": passed}, (
        EXIT_OK if passed else EXIT_VERIFICATION
    )


COMMANDS = {
    "simulate": simulate,
    "exact": exact,
    "exact-full": exact_full,
    "bounds": bounds,
    "verify-decomposition": verify_decomposition,
    "compare-constant": compare_constant,
    "characters": characters,
    "spectral-bound": spectral_bound,
    "geometry": geometry_,
    "coupling": coupling,
    "selftest": selftest_,
}


def provenance(config):
    """Tag of a table or report: exact, mc, or a dict of tags per part.

    Curves tag each point in their method column instead.
    """
    if config.command in ("verify-decomposition", "compare-constant"):
        return "exact" if config.exhaustive else "mc"
    if config.command == "coupling":
        return "mc"
    if config.command == "selftest":
        return dict(selftest.PROVENANCE)
    return "exact"


def _write(result, config, stream):
    tag = provenance(config)
    if isinstance(result, mixing.DistanceCurve):
        output.write_curve(result, stream, config, config.format)
    elif isinstance(result, pd.DataFrame):
        output.write_frame(result, stream, output.header(config), config.format, tag)
    elif isinstance(result, tuple):
        frame, extra = result
        meta = dict(output.header(config), **extra)
        output.write_frame(frame, stream, meta, config.format, tag)
    else:
        output.write_report(result, stream, config, tag)


def run(config):
    """Runs one configured command and writes its artifact.

    Returns:
        int: the exit status.
    """
    caps = config.caps()
    if config.threads < 1:
        raise DomainError("--threads must be positive, got %d" % config.threads)
    with contextlib.ExitStack() as stack:
        threadpool = None
        if config.threads > 1:
            threadpool = stack.enter_context(
                concurrent.futures.ThreadPoolExecutor(max_workers=config.threads)
            )
        result, status = COMMANDS[config.command](config, caps, threadpool)
    with output.open_output(config.output) as stream:
        _write(result, config, stream)
    if status != EXIT_OK:
        logging.error("%s: a verification failed, see the output", config.command)
    return status


def _report_error(e, **fields):
    record = {"error": type(e).__name__, "message": str(e)}
    record.update(fields)
    sys.stderr.write(json.dumps(record, sort_keys=True) + "\n")


def main(argv=None):
    parser = make_parser()
    try:
        flags = _normalize(parser.parse_args(argv))
    except DomainError as e:
        _report_error(e)
        return EXIT_CONFIG

    level = logging.INFO
    if flags.verbose:
        level = logging.DEBUG
    elif flags.quiet:
        level = logging.WARNING
    logging.basicConfig(format=LOG_FORMAT, level=level)

    config = RunConfig.from_flags(flags)
    try:
        return run(config)
    except CapExceeded as e:
        _report_error(e, cap=e.cap_name, limit=e.cap, value=e.value)
        return EXIT_CAP
    except DomainError as e:
        _report_error(e)
        return EXIT_CONFIG
    except VerificationFailure as e:
        _report_error(e)
        return EXIT_VERIFICATION


if __name__ == "__main__":
    sys.exit(main())
