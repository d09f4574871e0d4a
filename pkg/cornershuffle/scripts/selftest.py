"""Acceptance checks, each written to ``<outdir>/<name>.json``.

Every check returns ``(passed, details)``; details hold only values that
depend on the seed, so two runs with the same seed write identical files.
Durations are logged, never written.
"""
import fractions
import logging
import os
import timeit

import numpy as np
from scipy import linalg

from cornershuffle import comparison
from cornershuffle import geometry
from cornershuffle import mixing
from cornershuffle import spectral
from cornershuffle import walk
from cornershuffle.comparison.words import MAX_THREE_CYCLE
from cornershuffle.errors import VerificationFailure
from cornershuffle.scripts import output

logger = logging.getLogger(__name__)

# Reference rows of the n=5, (5, 5) X and Y layouts as row-column labels.
X55_FIRST_ROW = [55, 54, 53, 52, 51]
X55_LAST_ROW = [15, 14, 13, 12, 11]
Y55_FIRST_ROW = [55, 12, 13, 14, 51]
Y55_LAST_ROW = [15, 52, 53, 54, 11]

RATIO_BAND = (1.6, 2.4)
MARGINAL_SE = 4.5
COUPLING_SE = 3.0


def labels(perm):
    """Layout with cells labelled 10 * row + col, 1-based."""
    rows, cols = np.divmod(perm.layout(), perm.n)
    return 10 * (rows + 1) + cols + 1


def decomposition(seed, threadpool):
    report = comparison.verify_decompositions(6, threadpool=threadpool)
    passed = report["ok"] and report["max_word_length"] <= MAX_THREE_CYCLE
    return passed, report


def y_claims(seed, threadpool):
    failures = []
    checked = 0
    for n in range(5, 11):
        for i in range(2, n + 1):
            for j in range(2, n + 1):
                try:
                    comparison.build_Y(n, i, j)
                    checked += 1
                except VerificationFailure as e:
                    failures.append({"n": n, "pivot": [i, j], "reason": str(e)})
    x55 = labels(comparison.build_X(5, 5, 5).target)
    y55 = labels(comparison.build_Y(5, 5, 5).target)
    rows = {
        "x55_first_row": x55[0].tolist() == X55_FIRST_ROW,
        "x55_last_row": x55[-1].tolist() == X55_LAST_ROW,
        "y55_first_row": y55[0].tolist() == Y55_FIRST_ROW,
        "y55_last_row": y55[-1].tolist() == Y55_LAST_ROW,
    }
    passed = not failures and all(rows.values())
    return passed, {"checked": checked, "failures": failures, "reference_rows": rows}


def ingram(seed, threadpool):
    mismatches = []
    for m in range(3, 13):
        tau = spectral.three_cycle_class(m)
        for p in spectral.partitions(m):
            chi = spectral.mn_character(p, tau)
            if spectral.ingram_r(p) * spectral.dimension(p) != chi:
                mismatches.append(repr(p))
    violations = []
    cases = {}
    for m in range(3, 17):
        for p in spectral.partitions(m):
            try:
                _, case = spectral.char_bounds(p)
                cases[case] = cases.get(case, 0) + 1
            except VerificationFailure as e:
                violations.append(str(e))
    passed = not mismatches and not violations
    return passed, {
        "formula_mismatches": mismatches,
        "bound_violations": violations,
        "bound_cases": cases,
    }


def spectrum(seed, threadpool):
    details = {}
    passed = True
    for m in (4, 5):
        entries = spectral.r_spectrum(m)
        expected = np.sort(
            np.concatenate([np.full(e.multiplicity, float(e.r)) for e in entries])
        )
        eigs = np.sort(linalg.eigvalsh(spectral.r_kernel(m).matrix.toarray()))
        error = float(np.max(np.abs(eigs - expected)))
        ones = int(np.sum(np.isclose(eigs, 1.0, atol=1e-9)))
        ok = error <= 1e-9 and ones == 2
        passed = passed and ok
        details[str(m)] = {"max_error": error, "unit_eigenvalues": ones, "ok": ok}
    return passed, details


def _crossings(k, sides, starts_fn, threadpool):
    crossings = {}
    monotone = True
    for n in sides:
        times = mixing.time_grid(0, 40 * n, 121)
        kernel_starts = starts_fn(n)
        curve = mixing.kset_distance_curve(
            "S", k, times, n=n, starts=kernel_starts, threadpool=threadpool
        )
        monotone = monotone and curve.is_monotone()
        crossings[n] = curve.crossing_time()
    return crossings, monotone


def _adversarial_state(k):
    def starts(n):
        space = walk.TupleSpace(n, k)
        return [space.state_of(geometry.adversarial_starts(n, k)[0])]

    return starts


def mixing_curves(seed, threadpool):
    single, single_monotone = _crossings(1, (4, 8, 16), lambda n: None, threadpool)
    ratios = [single[8] / single[4], single[16] / single[8]]
    single_ok = single_monotone and all(
        RATIO_BAND[0] <= r <= RATIO_BAND[1] for r in ratios
    )

    # Pair chains on up to 9900 states, from the adversarial start only.
    pair, pair_monotone = _crossings(2, (6, 8, 10), _adversarial_state(2), threadpool)
    sides = sorted(pair)
    scaled = [(pair[b] / pair[a]) / (b / a) for a, b in zip(sides, sides[1:])]
    band = (RATIO_BAND[0] / 2, RATIO_BAND[1] / 2)
    pair_ok = pair_monotone and all(band[0] <= r <= band[1] for r in scaled)

    B = comparison.comparison_constant(3, "S", strategy="auto").constant()
    lambda2 = spectral.alternating_mean_sign(3, "S")
    times = mixing.time_grid(0, 60, 40)
    horizon = 60.0
    bound = spectral.ubl_bound(3, times, B, lambda2)
    exact = mixing.full_tv_curve("S", np.minimum(float(B) * times, horizon), n=3)
    full = mixing.full_tv_curve("S", mixing.time_grid(0, horizon, 40), n=3)
    ubl_ok = bool(np.all(bound >= exact.values - 1e-9)) and full.is_monotone()

    return single_ok and pair_ok and ubl_ok, {
        "k1_crossings": {str(n): t for n, t in single.items()},
        "k1_ratios": ratios,
        "k2_adversarial_crossings": {str(n): t for n, t in pair.items()},
        "k2_adversarial_scaled_ratios": scaled,
        "k2_starts": "adversarial",
        "ubl": {
            "B": str(B),
            "lambda2": str(lambda2),
            "bound": bound,
            "exact": exact.values,
            "holds": ubl_ok,
        },
    }


def lower_bounds(seed, threadpool):
    times = mixing.time_grid(0, 40, 40)
    exact = mixing.full_tv_curve("S0", times, n=3)
    stuck = np.array([mixing.stuck_card_lower_bound(3, t) for t in times])
    stuck_ok = bool(np.all(stuck <= exact.values + 1e-9))
    counting = mixing.counting_lower_bound("S", 20, 0.45 * 400)
    return stuck_ok and counting >= 0.9, {
        "stuck_card_holds": stuck_ok,
        "counting_n20": counting,
    }


def _formula_matrix(n):
    rows, cols = np.divmod(np.arange(n * n), n)
    rows, cols = rows + 1, cols + 1
    a = n + 1 - rows[None, :] - rows[:, None]
    b = n + 1 - cols[None, :] - cols[:, None]
    return a * b >= 0


def geometry_suite(seed, threadpool):
    mismatched = [
        n
        for n in range(1, 21)
        if not np.array_equal(geometry.jump_matrix(n), _formula_matrix(n))
    ]
    reports = {str(n): geometry.geometry_report(n) for n in range(6, 31, 3)}
    claims = all(
        r["rate_claim_holds"] and r["common_claim_holds"] for r in reports.values()
    )
    return not mismatched and claims, {
        "formula_mismatches": mismatched,
        "reports": reports,
    }


def _marginals_match(run, kernel, starts):
    worst = 0.0
    for t, states in run.records.items():
        for coordinate, start in enumerate(starts):
            exact = walk.transient_distribution(kernel, start, t).weights
            observed = np.bincount(states[:, coordinate], minlength=len(kernel))
            observed = observed / run.reps
            se = np.sqrt(exact * (1 - exact) / run.reps)
            z = np.abs(observed - exact) / np.maximum(se, 1e-12)
            worst = max(worst, float(z.max()))
    return worst <= MARGINAL_SE, worst


def coupling(seed, threadpool):
    details = {}
    kernel = walk.marginal_kernel("S", 1, n=4)
    starts = [kernel.space.state_of(s) for s in geometry.adversarial_starts(4, 1)]
    run = geometry.coupling_times(
        4, 1, 10000, seed, record_at=[1, 2, 4, 8], threadpool=threadpool
    )
    marginal_ok, worst_z = _marginals_match(run, kernel, starts)
    details["marginal_max_z"] = worst_z

    inequality_ok = True
    for n in (4, 8):
        kernel = walk.marginal_kernel("S", 1, n=n)
        x, y = (kernel.space.state_of(s) for s in geometry.adversarial_starts(n, 1))
        run = geometry.coupling_times(n, 1, 2000, seed, threadpool=threadpool)
        times = np.arange(0, 8 * n + 1, dtype=float)
        p, se = geometry.survival(run, times)
        pairwise = np.array(
            [
                0.5
                * np.abs(
                    walk.transient_distribution(kernel, x, t).weights
                    - walk.transient_distribution(kernel, y, t).weights
                ).sum()
                for t in times
            ]
        )
        worst_start = mixing.kset_distance_curve("S", 1, times, n=n).values
        # One replicate of slack: the sampled survival is 0 past the last meeting.
        bound = p + COUPLING_SE * se + 1.0 / run.reps
        pairwise_ok = bool(np.all(pairwise <= bound))
        worst_ok = bool(np.all(worst_start <= bound))
        inequality_ok = inequality_ok and pairwise_ok and worst_ok
        details["inequality_n%d" % n] = {
            "pairwise_holds": pairwise_ok,
            "worst_start_holds": worst_ok,
        }

    sides = (4, 8, 16)
    means = [
        geometry.coupling_times(n, 1, 500, seed, threadpool=threadpool).mean()
        for n in sides
    ]
    exponent, _ = mixing.fit_power_law(sides, means)
    details["means"] = {str(n): m for n, m in zip(sides, means)}
    details["exponent"] = exponent
    return marginal_ok and inequality_ok and exponent <= 1.2, details


def alternating(seed, threadpool):
    values = {n: spectral.alternating_mean_sign(n, "S") for n in range(4, 17)}
    passed = all(v <= fractions.Fraction(3, 4) for v in values.values())
    return passed, {str(n): str(v) for n, v in values.items()}


def determinism(seed, threadpool):
    times = mixing.time_grid(0, 40, 80)

    def artifacts():
        exact = mixing.kset_distance_curve("S", 1, times, n=4)
        mc = mixing.kset_distance_mc_curve("S", 1, times[:5], 2000, seed, n=4)
        return output.curve_bytes(exact) + output.curve_bytes(mc)

    first, second = artifacts(), artifacts()
    return first == second, {"bytes": len(first), "identical": first == second}


CRITERIA = [
    ("decomposition", decomposition),
    ("y_claims", y_claims),
    ("ingram", ingram),
    ("spectrum", spectrum),
    ("mixing_curves", mixing_curves),
    ("lower_bounds", lower_bounds),
    ("geometry", geometry_suite),
    ("coupling", coupling),
    ("alternating", alternating),
    ("determinism", determinism),
]

# Checks mixing exact values with bounds tag each part.
PROVENANCE = {
    "decomposition": "exact",
    "y_claims": "exact",
    "ingram": "exact",
    "spectrum": "exact",
    "mixing_curves": {
        "k1_crossings": "exact",
        "k1_ratios": "exact",
        "k2_adversarial_crossings": "exact",
        "k2_adversarial_scaled_ratios": "exact",
        "k2_starts": "exact",
        "ubl": "bound",
    },
    "lower_bounds": "bound",
    "geometry": "exact",
    "coupling": "mc",
    "alternating": "exact",
    "determinism": "mc",
}


def run(outdir, seed=0, threadpool=None, only=None, config=None):
    """Runs the checks named in ``only`` (all by default).

    ``config`` is embedded in every file next to the seed.

    Returns:
        list of {"criterion", "passed", "details"} dicts, in check order.
    """
    os.makedirs(outdir, exist_ok=True)
    results = []
    for name, check in CRITERIA:
        if only is not None and name not in only:
            continue
        start = timeit.default_timer()
        try:
            passed, details = check(seed, threadpool)
        except VerificationFailure as e:
            passed, details = False, {"error": str(e)}
        logger.info(
            "%s: %s in %.1fs",
            name,
            "passed" if passed else "FAILED",
            timeit.default_timer() - start,
        )
        result = {"criterion": name, "passed": bool(passed), "details": details}
        with open(os.path.join(outdir, "%s.json" % name), "w") as f:
            output.write_report(result, f, config, PROVENANCE[name], seed=seed)
        results.append(result)
    return results
