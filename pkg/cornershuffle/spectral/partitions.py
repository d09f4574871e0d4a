import functools
import math

from cornershuffle.errors import CapExceeded
from cornershuffle.errors import DomainError

PARTITION_MAX_M = 40


class Partition(tuple):
    """A weakly decreasing tuple of positive parts.

    Young diagram cells are (i, j) with 1 <= i <= len(p) and 1 <= j <= p[i-1],
    rows numbered from the top.
    """

    def __new__(cls, parts=()):
        parts = tuple(int(p) for p in parts)
        if any(p < 1 for p in parts):
            raise DomainError("Partition parts must be positive: %s" % (parts,))
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise DomainError("Partition parts must not increase: %s" % (parts,))
        return super().__new__(cls, parts)

    def __repr__(self):
        return "Partition(%s)" % ",".join(str(p) for p in self)

    @property
    def m(self):
        return sum(self)

    @property
    def t1(self):
        return self[0] if self else 0

    @property
    def t1_conjugate(self):
        return len(self)

    def conjugate(self):
        return Partition(sum(1 for p in self if p > j) for j in range(self.t1))

    def cells(self):
        return [(i + 1, j + 1) for i, row in enumerate(self) for j in range(row)]

    def hooks(self):
        conj = self.conjugate()
        return [
            (row - j) + (conj[j] - i) - 1
            for i, row in enumerate(self)
            for j in range(row)
        ]

    def content_square_sum(self):
        """Sum of (i - j)^2 over the diagram's cells."""
        return sum((i - j) ** 2 for i, j in self.cells())


def conjugate(p):
    return Partition(p).conjugate()


def partitions(m, max_m=PARTITION_MAX_M):
    """All partitions of m in lexicographically decreasing order."""
    if m < 0:
        raise DomainError("Cannot partition a negative number")
    if m > max_m:
        raise CapExceeded("partition_max_m", max_m, m)
    return [Partition(p) for p in _partitions(m, m)]


@functools.lru_cache(maxsize=None)
def _partitions(m, largest):
    if m == 0:
        return ((),)
    result = []
    for first in range(min(m, largest), 0, -1):
        for rest in _partitions(m - first, first):
            result.append((first,) + rest)
    return tuple(result)


@functools.lru_cache(maxsize=None)
def dimension(p):
    """Dimension of the irreducible representation, by the hook length formula."""
    p = Partition(p)
    return math.factorial(p.m) // math.prod(p.hooks())


def partition_count(m):
    """p(m) by Euler's pentagonal number recurrence."""
    counts = [1] + [0] * m
    for k in range(1, m + 1):
        total, j = 0, 1
        while True:
            for pent in (j * (3 * j - 1) // 2, j * (3 * j + 1) // 2):
                if pent > k:
                    break
                total += (-1) ** (j + 1) * counts[k - pent]
            if j * (3 * j - 1) // 2 > k:
                break
            j += 1
        counts[k] = total
    return counts[m]
