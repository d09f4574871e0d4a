import math

import numpy as np
from scipy import special
from scipy import stats

from cornershuffle.errors import DomainError
from cornershuffle.mixing.curve import DistanceCurve
from cornershuffle.walk import Family


def _generator_count(family, n):
    tag = Family(getattr(family, "tag", family))
    if tag == Family.S0:
        return n * n
    if tag == Family.S:
        return 2 * n * n
    raise DomainError("Counting bound is defined for S0 and S, not %s" % tag.value)


def counting_lower_bound(family, n, t):
    """Lower bound on whole-deck TV from counting reachable permutations.

    With G generators (identity moves included) at most G**K permutations
    are reachable in K or fewer jumps, so the walk puts mass at least
    P(Poisson(t) <= K) on a set of uniform mass at most G**K / (n^2)!.
    """
    if t < 0:
        raise DomainError("Time must be nonnegative, got %s" % t)
    cells = n * n
    if t == 0:
        return float(1.0 - math.exp(-special.gammaln(cells + 1)))
    K = np.arange(0, math.ceil(t + 10 * math.sqrt(t)) + 1)
    log_reachable = K * math.log(_generator_count(family, n)) - special.gammaln(
        cells + 1
    )
    reachable = np.exp(np.minimum(log_reachable, 0.0))
    return float(np.clip(np.max(stats.poisson.cdf(K, t) - reachable), 0.0, 1.0))


def stuck_card_lower_bound(n, t):
    """Lower bound for S0 from the card at (n, n), moved only by UL(n, n)."""
    return max(0.0, math.exp(-t / (n * n)) - 1.0 / (n * n))


def bound_curve(name, family, n, times):
    times = np.asarray(times, dtype=float)
    if name == "counting":
        values = [counting_lower_bound(family, n, t) for t in times]
    elif name == "stuck-card":
        values = [stuck_card_lower_bound(n, t) for t in times]
    else:
        raise DomainError("Unknown bound '%s'" % name)
    return DistanceCurve(
        family=Family(getattr(family, "tag", family)).value,
        n=n,
        k="full",
        times=times,
        values=values,
        method="bound",
        metadata={"bound": name},
    )
