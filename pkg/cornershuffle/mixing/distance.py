import dataclasses
import itertools
import logging
import math

import numpy as np
from scipy import stats

from cornershuffle.errors import DomainError
from cornershuffle.perm import index_position
from cornershuffle.mixing.curve import DistanceCurve
from cornershuffle.walk import DEFAULT_TOL
from cornershuffle.walk import STATE_CAP
from cornershuffle.walk import Family
from cornershuffle.walk import as_family
from cornershuffle.walk import group_kernel
from cornershuffle.walk import marginal_kernel
from cornershuffle.walk import sample_positions
from cornershuffle.walk import uniformize
from cornershuffle.walk.group import FULL_GROUP_MAX_N
from cornershuffle.walk.sampling import block_rng
from cornershuffle.walk.transient import rational_transient
from cornershuffle.walk.transient import block_size
from cornershuffle.walk.transient import total_variation_to_uniform

logger = logging.getLogger(__name__)

BOOTSTRAP_KEY = 2**32 - 1
BOOTSTRAP_ROUNDS = 200


def _square_symmetries(n):
    r, s = np.divmod(np.arange(n * n), n)
    flip = n - 1
    maps = [
        (r, s),
        (s, r),
        (flip - r, flip - s),
        (flip - s, flip - r),
        (r, flip - s),
        (flip - r, s),
        (s, flip - r),
        (flip - s, r),
    ]
    return [rows * n + cols for rows, cols in maps]


def array_symmetries(family):
    """Symmetries of the square that conjugate the generator set to itself.

    Conjugating every generator by such a map leaves the walk unchanged, so
    the distance from a start tuple equals the distance from its image.
    """
    images = family.images
    reference = sorted(row.tobytes() for row in images)
    found = []
    for sym in _square_symmetries(family.n):
        inverse = np.argsort(sym)
        # First undo the symmetry, then move, then reapply it.
        conjugated = sym[images[:, inverse]]
        if sorted(row.tobytes() for row in conjugated) == reference:
            found.append(sym)
    return found


def start_representatives(family, space):
    """State indices with one representative per symmetry class of starts.

    Beyond array symmetries, reordering the entries of a start tuple is a
    symmetry of the tuple chain. R is invariant under every relabeling of
    cells, so a single start represents all.
    """
    if family.tag == Family.R:
        return np.array([0])
    states = space.states
    canonical = None
    for sym in array_symmetries(family):
        moved = sym[states]
        for order in itertools.permutations(range(space.k)):
            codes = space.encode(moved[:, order])
            canonical = codes if canonical is None else np.minimum(canonical, codes)
    _, first = np.unique(canonical, return_index=True)
    return np.sort(first)


def kset_distance_curve(
    family,
    k,
    times,
    n=None,
    tol=DEFAULT_TOL,
    state_cap=STATE_CAP,
    starts=None,
    rational=False,
    threadpool=None,
):
    """Exact k-set distance: worst start tuple, TV-optimal event.

    Args:
        starts: optional explicit state indices to maximize over. By default
            all starts, reduced to one per symmetry class.
        rational: sum the jump series in exact arithmetic (k = 1, n <= 3).
    """
    family = as_family(family, n)
    times = np.asarray(times, dtype=float)
    kernel = marginal_kernel(family, k, state_cap=state_cap)
    size = len(kernel)
    if starts is None:
        candidates = start_representatives(family, kernel.space)
        starts_meta = "all"
    else:
        candidates = np.asarray(starts, dtype=np.int64)
        starts_meta = candidates.tolist()
    width = block_size(size, len(times))
    blocks = [candidates[i : i + width] for i in range(0, len(candidates), width)]
    logger.info(
        "Exact %d-set curve of %s: %d starts in %d blocks, %d times",
        k,
        family,
        len(candidates),
        len(blocks),
        len(times),
    )

    def laws_of(block):
        if rational:
            return [
                np.stack(
                    [rational_transient(kernel, s, t, tol)[0].weights for s in block],
                    axis=1,
                )
                for t in times
            ]
        initial = np.zeros((size, len(block)))
        initial[block, np.arange(len(block))] = 1.0
        return uniformize(kernel, initial, times, tol)

    def worst(block):
        laws = laws_of(block)
        distances = np.stack([total_variation_to_uniform(law) for law in laws])
        return distances.max(axis=1), block[distances.argmax(axis=1)]

    map_fn = threadpool.map if threadpool is not None else map
    results = list(map_fn(worst, blocks))
    values = np.max([v for v, _ in results], axis=0)
    argmax = np.argmax([v for v, _ in results], axis=0)
    worst_starts = [
        [int(c) for c in kernel.space.states[results[b][1][i]]]
        for i, b in enumerate(argmax)
    ]
    return DistanceCurve(
        family=family.tag.value,
        n=family.n,
        k=k,
        times=times,
        values=values,
        method="exact",
        metadata={
            "tol": tol,
            "arithmetic": "rational" if rational else "float",
            "starts": starts_meta,
            "representatives": int(len(candidates)),
            "worst_starts": worst_starts,
        },
    )


def kset_distance_exact(family, k, t, n=None, tol=DEFAULT_TOL, **kwargs):
    curve = kset_distance_curve(family, k, [t], n=n, tol=tol, **kwargs)
    return float(curve.values[0])


def full_tv_curve(family, times, n=None, tol=DEFAULT_TOL, max_n=FULL_GROUP_MAX_N):
    """Exact whole-deck TV to uniform on the generated subgroup, n <= 3."""
    family = as_family(family, n)
    times = np.asarray(times, dtype=float)
    kernel = group_kernel(family, max_n=max_n)
    initial = np.zeros(len(kernel))
    initial[0] = 1.0
    laws = uniformize(kernel, initial, times, tol)
    values = [total_variation_to_uniform(law) for law in laws]
    return DistanceCurve(
        family=family.tag.value,
        n=family.n,
        k="full",
        times=times,
        values=values,
        method="exact",
        metadata={
            "tol": tol,
            "group_order": kernel.space.order,
            "full_group": kernel.space.is_full(),
        },
    )


def full_tv_exact(family, t, n=None, tol=DEFAULT_TOL, **kwargs):
    return float(full_tv_curve(family, [t], n=n, tol=tol, **kwargs).values[0])


@dataclasses.dataclass
class MonteCarloEstimate:
    """Plug-in TV estimate with a bootstrap interval.

    The plug-in estimate is biased upwards by at most ``bias_bound``, so
    the lower end of the interval is shifted down by that amount.
    """

    value: float
    lo: float
    hi: float
    se: float
    bias_bound: float
    reps: int
    seed: int
    starts: tuple = ()


def slowest_cells(family, k, n=None):
    """The k cells moved by the fewest generators, ties in row-major order.

    Cards there are the last to leave their starts: (1, n) and (n, 1) under
    S, (n, n) under S0. R treats every cell alike.
    """
    family = as_family(family, n)
    if not 1 <= k <= family.cells:
        raise DomainError("Need 1 <= k <= %d, got k=%d" % (family.cells, k))
    if family.tag == Family.R:
        return np.arange(k)
    moved = (family.images != np.arange(family.cells)).sum(axis=0)
    return np.argsort(moved, kind="stable")[:k]


def _plug_in_tv(counts, reps, states):
    # Columns are the states seen in the sample; the rest each weigh 1/states.
    deviation = np.abs(counts / reps - 1.0 / states).sum(axis=-1)
    return 0.5 * (deviation + (states - counts.shape[-1]) / states)


def kset_distance_mc(
    family,
    k,
    t,
    reps,
    seed,
    n=None,
    confidence=0.95,
    rounds=BOOTSTRAP_ROUNDS,
    starts=None,
    threadpool=None,
):
    """Monte Carlo distance to uniform of k cards started at ``starts``.

    The exact k-set distance maximizes over start tuples. Sampling cannot,
    so the cards start at slowest_cells by default.

    Args:
        starts: k distinct cell indices, row-major.
    """
    family = as_family(family, n)
    if reps < 1:
        raise DomainError("Need at least one replicate, got %d" % reps)
    if starts is None:
        starts = slowest_cells(family, k)
    starts = tuple(int(c) for c in starts)
    states = math.perm(family.cells, k)
    positions = sample_positions(
        family, k, t, reps, seed, starts=starts, threadpool=threadpool
    )
    weights = family.cells ** np.arange(k - 1, -1, -1, dtype=np.int64)
    _, counts = np.unique(positions @ weights, return_counts=True)
    value = float(_plug_in_tv(counts, reps, states))

    rng = block_rng(seed, BOOTSTRAP_KEY)
    resampled = rng.multinomial(reps, counts / reps, size=rounds)
    boot = _plug_in_tv(resampled, reps, states)
    se = float(boot.std(ddof=1)) if rounds > 1 else 0.0
    z = float(stats.norm.ppf(0.5 + confidence / 2))

    p = counts / reps
    unseen = states - len(counts)
    bias_bound = 0.5 * float(
        np.sqrt(p * (1 - p) / reps).sum() + unseen * np.sqrt(1.0 / (states * reps))
    )
    return MonteCarloEstimate(
        value=value,
        lo=max(0.0, value - bias_bound - z * se),
        hi=min(1.0, value + z * se),
        se=se,
        bias_bound=bias_bound,
        reps=reps,
        seed=seed,
        starts=starts,
    )


def kset_distance_mc_curve(
    family, k, times, reps, seed, n=None, starts=None, threadpool=None
):
    """Monte Carlo curve; every time reuses the same seed and starts."""
    family = as_family(family, n)
    if starts is None:
        starts = slowest_cells(family, k)
    estimates = [
        kset_distance_mc(family, k, t, reps, seed, starts=starts, threadpool=threadpool)
        for t in times
    ]
    return DistanceCurve(
        family=family.tag.value,
        n=family.n,
        k=k,
        times=times,
        values=[e.value for e in estimates],
        lo=[e.lo for e in estimates],
        hi=[e.hi for e in estimates],
        method="mc",
        metadata={
            "seed": seed,
            "replicates": reps,
            "starts": [list(index_position(family.n, c)) for c in starts],
            "estimator": "plug-in",
            "bias": "plug-in TV is biased upward; lo subtracts a bias bound",
            "bias_bounds": [e.bias_bound for e in estimates],
        },
    )
