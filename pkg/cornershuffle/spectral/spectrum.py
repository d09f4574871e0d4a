import dataclasses
import fractions
import functools
import itertools
import logging
import math
import warnings

import numpy as np
from scipy import sparse

from cornershuffle.errors import CapExceeded
from cornershuffle.errors import DomainError
from cornershuffle.perm import corner_move_perm
from cornershuffle.perm import sign
from cornershuffle.spectral.characters import ingram_r
from cornershuffle.spectral.partitions import Partition
from cornershuffle.spectral.partitions import dimension
from cornershuffle.spectral.partitions import partitions
from cornershuffle.walk import Family
from cornershuffle.walk import ShuffleFamily
from cornershuffle.walk import SparseKernel
from cornershuffle.walk.group import lehmer_rank

logger = logging.getLogger(__name__)

SPECTRUM_MAX_M = 25
R_KERNEL_MAX_M = 7


@dataclasses.dataclass(frozen=True)
class SpectrumEntry:
    """Eigenvalue r of the three-cycle walk on S_m, with multiplicity d^2."""

    partition: Partition
    r: fractions.Fraction
    multiplicity: int


def r_spectrum(m, max_m=SPECTRUM_MAX_M):
    if m < 3:
        raise DomainError("The three-cycle walk needs m >= 3, got %d" % m)
    if m > max_m:
        raise CapExceeded("spectrum_max_m", max_m, m)
    entries = [
        SpectrumEntry(p, ingram_r(p), dimension(p) ** 2)
        for p in partitions(m, max_m=max(max_m, m))
    ]
    total = sum(e.multiplicity for e in entries)
    if total != math.factorial(m):
        raise RuntimeError("Multiplicities of S_%d sum to %d" % (m, total))
    return entries


class SymmetricSpace:
    """All permutations of m points, in lexicographic order."""

    def __init__(self, m):
        self.degree = m
        self.elements = np.array(
            list(itertools.permutations(range(m))), dtype=np.int8
        ).reshape(-1, m)

    def __len__(self):
        return len(self.elements)

    @property
    def order(self):
        return len(self.elements)

    def index(self, perms):
        # Lexicographic position is the Lehmer rank.
        return lehmer_rank(np.atleast_2d(perms))


@functools.lru_cache(maxsize=4)
def r_kernel(m, max_m=R_KERNEL_MAX_M):
    """One-jump kernel of the uniform three-cycle walk on S_m."""
    if m < 3:
        raise DomainError("The three-cycle walk needs m >= 3, got %d" % m)
    if m > max_m:
        raise CapExceeded("r_kernel_max_m", max_m, m)
    space = SymmetricSpace(m)
    logger.info("Building three-cycle kernel on S_%d (%d states)", m, space.order)
    cycles = []
    for a, b, c in itertools.combinations(range(m), 3):
        for x, y, z in ((a, b, c), (a, c, b)):
            image = np.arange(m, dtype=np.int8)
            image[[x, y, z]] = [y, z, x]
            cycles.append(image)
    cols = np.concatenate([space.index(image[space.elements]) for image in cycles])
    rows = np.tile(np.arange(space.order), len(cycles))
    counts = sparse.coo_matrix(
        (np.ones(rows.size, dtype=np.int64), (rows, cols)),
        shape=(space.order, space.order),
    )
    return SparseKernel(space, counts, len(cycles))


@functools.lru_cache(maxsize=8)
def _nontrivial_terms(m, max_m=SPECTRUM_MAX_M):
    """(d^2, 1 - r, t1, t1') over partitions other than (m) and (1^m)."""
    trivial = Partition((m,))
    alternating = Partition((1,) * m)
    terms = [
        (float(e.multiplicity), float(1 - e.r), e.partition.t1, len(e.partition))
        for e in r_spectrum(m, max_m=max_m)
        if e.partition not in (trivial, alternating)
    ]
    return tuple(np.array(column) for column in zip(*terms))


def _sum_terms(weights, gaps, t):
    t = np.asarray(t, dtype=np.float64)
    return np.exp(-2.0 * np.multiply.outer(t, gaps)) @ weights


def ubl_bound(n, t, c, lambda2, clamp=True, max_m=SPECTRUM_MAX_M):
    """Upper bound lemma on the distance of the corner shuffle at time c*t.

    (1/2) sqrt(exp(-2ct(1 - lambda2)) + sum* d^2 exp(-2t(1 - r))), the sum
    running over partitions of m = n^2 other than the trivial and
    alternating ones. lambda2 is the mean sign of the corner moves.
    """
    m = n * n
    if c <= 0:
        raise DomainError("Comparison constant must be positive, got %s" % c)
    if abs(lambda2) > 1:
        raise DomainError("Mean sign must lie in [-1, 1], got %s" % lambda2)
    if m > max_m:
        raise CapExceeded("spectrum_max_m", max_m, m)
    weights, gaps, _, _ = _nontrivial_terms(m, max_m)
    t = np.asarray(t, dtype=np.float64)
    if np.any(t < 0):
        raise DomainError("Times must be nonnegative")
    alternating = np.exp(-2.0 * float(c) * t * (1.0 - float(lambda2)))
    value = 0.5 * np.sqrt(alternating + _sum_terms(weights, gaps, t))
    if clamp:
        value = np.minimum(value, 1.0)
    return float(value) if value.ndim == 0 else value


def ubl_partial_sums(n, t, alpha, max_m=SPECTRUM_MAX_M):
    """Splits the nontrivial sum of ``ubl_bound`` in two.

    Returns:
        (near, rest): the part over partitions with t1 >= (1 - alpha) m or
        t1' >= (1 - alpha) m, and the part over all others.
    """
    if not 0 < alpha < 0.5:
        warnings.warn("alpha=%s lies outside (0, 1/2)" % alpha)
    m = n * n
    if m > max_m:
        raise CapExceeded("spectrum_max_m", max_m, m)
    weights, gaps, t1, t1c = _nontrivial_terms(m, max_m)
    near = np.maximum(t1, t1c) >= (1 - alpha) * m
    return (
        _sum_terms(weights[near], gaps[near], t),
        _sum_terms(weights[~near], gaps[~near], t),
    )


def alternating_mean_sign(n, family):
    """Mean sign of the corner moves of S0 or S, exactly."""
    family = ShuffleFamily(family, n)
    if family.tag == Family.R:
        raise DomainError("R consists of even permutations only")
    total = sum(sign(corner_move_perm(n, move)) for move in family.moves)
    return fractions.Fraction(total, family.num_generators)
