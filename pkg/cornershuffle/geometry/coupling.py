import dataclasses
import functools
import logging
import warnings

import numpy as np
import pandas as pd
from scipy import linalg

from cornershuffle.errors import DomainError
from cornershuffle.perm import Position
from cornershuffle.walk import DEFAULT_TOL
from cornershuffle.walk import STATE_CAP
from cornershuffle.walk import as_family
from cornershuffle.walk import marginal_kernel
from cornershuffle.walk import transient_distribution
from cornershuffle.walk.sampling import block_rng

logger = logging.getLogger(__name__)

# Epoch rows are precomputed densely below this many states.
DENSE_EPOCH_MAX = 2048
# Sparse-path rows kept at once; each holds one float per state.
ROW_CACHE_MAX = 512
MAX_EPOCHS = 100000


@dataclasses.dataclass
class CouplingRun:
    """Sampled meeting times of two maximally coupled k-tuple chains.

    Attributes:
        times: (reps,) meeting times; inf for replicates that did not meet
            within the epoch limit.
        records: {t: (reps, 2) array} of both coordinates' state indices at
            the requested record times.
    """

    n: int
    k: int
    family: str
    seed: int
    review_dt: float
    starts: tuple
    times: np.ndarray
    strategy: str = "maximal"
    records: dict = dataclasses.field(default_factory=dict)

    @property
    def reps(self):
        return len(self.times)

    def mean(self):
        return float(np.mean(self.times))

    def quantiles(self, qs=(0.1, 0.25, 0.5, 0.75, 0.9)):
        return {q: float(np.quantile(self.times, q)) for q in qs}

    def to_frame(self):
        return pd.DataFrame({"replicate": np.arange(self.reps), "time": self.times})


def adversarial_starts(n, k):
    """Anti-diagonal tuple ((1,n), (2,n-1), ...) against its transpose."""
    if not 1 <= k <= n:
        raise DomainError("Adversarial starts need 1 <= k <= n, got k=%d" % k)
    x = tuple(Position(1 + p, n - p) for p in range(k))
    y = tuple(Position(n - p, 1 + p) for p in range(k))
    return x, y


class EpochRows:
    """Rows of exp(dt (K - 1)), the law of the chain one epoch ahead."""

    def __init__(self, kernel, dt, tol=DEFAULT_TOL):
        self.kernel = kernel
        self.dt = dt
        self.tol = tol
        self._dense = None
        self._row = functools.lru_cache(maxsize=ROW_CACHE_MAX)(self._compute_row)
        if len(kernel) <= DENSE_EPOCH_MAX:
            generator = kernel.matrix.toarray() - np.eye(len(kernel))
            dense = np.clip(linalg.expm(dt * generator), 0.0, None)
            self._dense = dense / dense.sum(axis=1, keepdims=True)

    def _compute_row(self, state):
        row = transient_distribution(self.kernel, state, self.dt, self.tol).weights
        return row / row.sum()

    def cache_info(self):
        return self._row.cache_info()

    def __call__(self, state):
        if self._dense is not None:
            return self._dense[state]
        return self._row(state)


def _draw(rng, weights):
    cumulative = np.cumsum(weights)
    index = np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right")
    return int(min(index, len(weights) - 1))


def maximal_step(rng, p, q):
    """Draws (X, Y) with X ~ p, Y ~ q and P(X = Y) = sum min(p, q)."""
    overlap = np.minimum(p, q)
    mass = overlap.sum()
    if rng.random() < mass:
        x = _draw(rng, overlap)
        return x, x
    return _draw(rng, p - overlap), _draw(rng, q - overlap)


def _replicate(rows, x, y, rng, record_epochs, max_epochs):
    records = {}
    last = max(record_epochs, default=0)
    met = 0 if x == y else None
    epoch = 0
    while True:
        if epoch in record_epochs:
            records[epoch] = (x, y)
        if met is not None and epoch >= last:
            break
        if epoch >= max_epochs:
            break
        if met is not None:
            x = y = _draw(rng, rows(x))
        else:
            x, y = maximal_step(rng, rows(x), rows(y))
        epoch += 1
        if met is None and x == y:
            met = epoch
    return met, records


def coupling_times(
    n,
    k,
    reps,
    seed,
    review_dt=1.0,
    record_at=None,
    starts=None,
    family="S",
    max_epochs=MAX_EPOCHS,
    state_cap=STATE_CAP,
    threadpool=None,
):
    """Meeting times of two copies of the k-card chain under maximal coupling.

    At each epoch of length review_dt both chains move together by a draw
    from the maximal coupling of their exact epoch laws; once they meet they
    move as one. Each coordinate on its own is the k-card chain observed at
    multiples of review_dt.

    Args:
        record_at: times (multiples of review_dt) at which both coordinates'
            states are recorded.
        starts: a pair of k-tuples of Positions; adversarial_starts by default.

    Returns:
        CouplingRun
    """
    family = as_family(family, n)
    if reps < 1:
        raise DomainError("Need at least one replicate, got %d" % reps)
    if review_dt <= 0:
        raise DomainError("Epoch length must be positive, got %s" % review_dt)
    kernel = marginal_kernel(family, k, state_cap=state_cap)
    if starts is None:
        starts = adversarial_starts(n, k)
    x0, y0 = (kernel.space.state_of(s) for s in starts)

    record_epochs = {}
    for t in record_at or ():
        epoch = int(round(t / review_dt))
        if not np.isclose(epoch * review_dt, t):
            raise DomainError(
                "Record time %s is not a multiple of %s" % (t, review_dt)
            )
        record_epochs[epoch] = t

    rows = EpochRows(kernel, review_dt)
    logger.info(
        "Coupling %d replicates of %s on %d-tuples from %s", reps, family, k, starts
    )

    def run(rep):
        # One independent stream per replicate.
        return _replicate(
            rows, x0, y0, block_rng(seed, rep), record_epochs, max_epochs
        )

    map_fn = threadpool.map if threadpool is not None else map
    results = list(map_fn(run, range(reps)))
    times = np.array(
        [np.inf if met is None else met * review_dt for met, _ in results]
    )
    unmet = int(np.isinf(times).sum())
    if unmet:
        warnings.warn("%d replicates did not meet in %d epochs" % (unmet, max_epochs))
    records = {
        t: np.array([rec.get(epoch, (-1, -1)) for _, rec in results], dtype=np.int64)
        for epoch, t in record_epochs.items()
    }
    return CouplingRun(
        n=n,
        k=k,
        family=family.tag.value,
        seed=seed,
        review_dt=review_dt,
        starts=tuple(tuple(tuple(p) for p in s) for s in starts),
        times=times,
        records=records,
    )


def survival(run, times):
    """Empirical P(T > t) at each t, with binomial standard errors."""
    times = np.asarray(times, dtype=np.float64)
    p = (run.times[None, :] > times[:, None]).mean(axis=1)
    se = np.sqrt(p * (1 - p) / run.reps)
    return p, se
