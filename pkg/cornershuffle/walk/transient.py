import dataclasses
import fractions
import functools
import logging
import math

import numpy as np
from scipy import stats

from cornershuffle.errors import DomainError

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-9

# Float budget for the per-time accumulators of one block of start states.
ACCUMULATOR_BUDGET = 2.5e7

# Poisson weights below this add nothing at double precision.
WEIGHT_FLOOR = 1e-18

# Exact arithmetic is offered for single cards on arrays up to 3x3.
RATIONAL_MAX_N = 3


@functools.lru_cache(maxsize=1024)
def poisson_weights(t, tol=DEFAULT_TOL):
    """P(J = j) for j = 0..depth, with P(J > depth) <= tol, J ~ Poisson(t)."""
    if t < 0:
        raise DomainError("Time must be nonnegative, got %s" % t)
    if tol <= 0:
        raise DomainError("Tolerance must be positive, got %s" % tol)
    if t == 0:
        return np.ones(1)
    depth = int(stats.poisson.isf(tol, t))
    while stats.poisson.sf(depth, t) > tol:
        depth += 1
    weights = stats.poisson.pmf(np.arange(depth + 1), t)
    weights.flags.writeable = False
    return weights


@dataclasses.dataclass(frozen=True)
class DistributionVector:
    """Weights over the states of a kernel's state space."""

    space: object
    weights: np.ndarray

    def total(self):
        return float(self.weights.sum())

    def distance_to_uniform(self):
        """Total-variation distance to the uniform law on the state space."""
        return total_variation_to_uniform(self.weights)

    def l1(self, other):
        return float(np.abs(self.weights - other.weights).sum())


def total_variation_to_uniform(weights, axis=0):
    size = weights.shape[axis]
    return 0.5 * np.abs(weights - 1.0 / size).sum(axis=axis)


def uniformize(kernel, initial, times, tol=DEFAULT_TOL):
    """Evolves row distributions under exp(t(K - 1)) for several t at once.

    Args:
        kernel (SparseKernel): the one-jump kernel.
        initial (np.ndarray): (states,) or (states, block) array; columns are
            distributions.
        times (sequence of float): evaluation times.
        tol (float): Poisson tail truncation per time.

    Returns:
        list of arrays shaped like ``initial``, one per time.
    """
    weights = [poisson_weights(float(t), tol) for t in times]
    depth = max(len(w) for w in weights)
    results = [np.zeros(initial.shape) for _ in times]
    current = np.asarray(initial, dtype=np.float64)
    for j in range(depth):
        for result, w in zip(results, weights):
            if j < len(w) and w[j] > WEIGHT_FLOOR:
                result += w[j] * current
        if j + 1 < depth:
            current = kernel.transpose @ current
    return results


def transient_distribution(kernel, start, t, tol=DEFAULT_TOL):
    """Time-t law of the chain started at state index ``start``."""
    initial = np.zeros(len(kernel))
    initial[start] = 1.0
    (weights,) = uniformize(kernel, initial, [t], tol)
    return DistributionVector(kernel.space, weights)


def evolve(kernel, distribution, t, tol=DEFAULT_TOL):
    (weights,) = uniformize(kernel, distribution.weights, [t], tol)
    return DistributionVector(distribution.space, weights)


def block_size(states, num_times, budget=ACCUMULATOR_BUDGET):
    return max(1, int(budget // max(1, states * num_times)))


def exact_jump_laws(kernel, start, steps):
    """Laws after 0..steps jumps from ``start``, as lists of Fractions.

    Numerators stay integers over denominator**j, so every law sums to
    exactly 1.
    """
    counts = kernel.counts.T.toarray().astype(object)
    current = np.zeros(len(kernel), dtype=object)
    current[start] = 1
    laws = []
    for j in range(steps + 1):
        scale = kernel.denominator**j
        laws.append([fractions.Fraction(int(v), scale) for v in current])
        if j < steps:
            current = counts.dot(current)
    return laws


def rational_transient(kernel, start, t, tol=DEFAULT_TOL):
    """Exact-arithmetic counterpart of transient_distribution.

    With t taken as a Fraction, the truncated series
    sum_{j <= depth} t^j / j! K^j[start] is computed exactly and only the
    final exp(-t) factor is rounded. The depth is the one the float path
    uses for ``tol``.

    Returns:
        (DistributionVector, list of Fraction): the law and the exact series.
    """
    space = kernel.space
    k, n = getattr(space, "k", None), getattr(space, "n", None)
    if k != 1 or n > RATIONAL_MAX_N:
        raise DomainError(
            "Rational mode needs k = 1 and n <= %d, got k=%s and n=%s"
            % (RATIONAL_MAX_N, k, n)
        )
    t = fractions.Fraction(t)
    if t < 0:
        raise DomainError("Time must be nonnegative, got %s" % t)
    depth = len(poisson_weights(float(t), tol)) - 1
    series = [fractions.Fraction(0)] * len(kernel)
    term = fractions.Fraction(1)
    for j, law in enumerate(exact_jump_laws(kernel, start, depth)):
        if j:
            term = term * t / j
        series = [s + term * p for s, p in zip(series, law)]
    weights = math.exp(-t) * np.array([float(s) for s in series])
    return DistributionVector(space, weights), series
