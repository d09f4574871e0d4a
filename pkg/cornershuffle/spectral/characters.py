import fractions
import functools
import logging

from cornershuffle.errors import DomainError
from cornershuffle.errors import VerificationFailure
from cornershuffle.spectral.partitions import Partition
from cornershuffle.spectral.partitions import dimension

logger = logging.getLogger(__name__)


def three_cycle_class(m):
    """Cycle type (3, 1, ..., 1) of a three-cycle in S_m."""
    if m < 3:
        raise DomainError("S_%d has no three-cycles" % m)
    return Partition((3,) + (1,) * (m - 3))


def mn_character(p, cycle_type):
    """Irreducible character of p at the class of cycle_type.

    Border strips are removed on the beta-set (abacus) of the partition:
    a strip of length r is a bead moving from b to b - r onto a free slot,
    and its height is the number of beads it jumps over.
    """
    p, cycle_type = Partition(p), Partition(cycle_type)
    if p.m != cycle_type.m:
        raise DomainError(
            "Partition of %d and cycle type of %d differ in degree"
            % (p.m, cycle_type.m)
        )
    return _mn(tuple(p), tuple(cycle_type))


@functools.lru_cache(maxsize=None)
def _mn(parts, rest):
    if not rest:
        return 1
    if rest[0] == 1:
        # Only fixed points remain: the character value is the degree.
        return dimension(parts)
    r, rest = rest[0], rest[1:]
    length = len(parts)
    beta = [part + length - 1 - i for i, part in enumerate(parts)]
    beads = set(beta)
    total = 0
    for bead in beta:
        slot = bead - r
        if slot < 0 or slot in beads:
            continue
        height = sum(1 for other in beta if slot < other < bead)
        moved = sorted((beads - {bead}) | {slot}, reverse=True)
        shape = tuple(x - (length - 1 - i) for i, x in enumerate(moved))
        total += (-1) ** height * _mn(tuple(x for x in shape if x > 0), rest)
    return total


def ingram_r(p):
    """Normalized character chi_p(tau) / d(p) at a three-cycle tau, exactly.

    r(p) = 3 * sum over cells (i - j)^2 / (m (m-1) (m-2)) - 3 / (2 (m-2)),
    where m is the degree of the symmetric group.
    """
    p = Partition(p)
    m = p.m
    if m < 3:
        raise DomainError("The three-cycle ratio needs m >= 3, got %d" % m)
    return fractions.Fraction(
        3 * p.content_square_sum(), m * (m - 1) * (m - 2)
    ) - fractions.Fraction(3, 2 * (m - 2))


def _long_row_bound(t1, m):
    return 1 - fractions.Fraction(3 * (t1 - 1) * (m - t1), (m - 1) * (m - 2))


def char_bounds(p):
    """Upper bound on ingram_r(p) by the shape of the diagram.

    Returns:
        (Fraction, str): the bound and its case, one of "t1>=m/2" (long
        first row), "both<=m/2" (first row and column both short) or "dual"
        (long first column, bounded through the conjugate).
    """
    p = Partition(p)
    m = p.m
    if m < 3:
        raise DomainError("Character bounds need m >= 3, got %d" % m)
    t1, t1c = p.t1, p.t1_conjugate
    if 2 * t1 >= m:
        bound, case = _long_row_bound(t1, m), "t1>=m/2"
    elif 2 * t1c <= m:
        bound, case = fractions.Fraction(max(t1 - 1, t1c - 1), m - 2), "both<=m/2"
    else:
        bound, case = _long_row_bound(t1c, m), "dual"
    r = ingram_r(p)
    if r > bound:
        raise VerificationFailure(
            "r%r = %s exceeds its %s bound %s" % (p, r, case, bound)
        )
    return bound, case
