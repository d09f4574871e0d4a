import numpy as np

from cornershuffle.errors import DomainError
from cornershuffle.perm import Position
from cornershuffle.perm import index_position
from cornershuffle.perm import position_index


class Region:
    """A set of cells of the n x n array, stored as a row-major mask."""

    def __init__(self, n, mask, tag):
        mask = np.asarray(mask, dtype=bool).ravel()
        if mask.size != n * n:
            raise DomainError("Mask of %d cells for a %dx%d array" % (mask.size, n, n))
        mask.flags.writeable = False
        self.n = n
        self.mask = mask
        self.tag = tag

    def __contains__(self, pos):
        return bool(self.mask[position_index(self.n, Position(*pos))])

    def __len__(self):
        return int(self.mask.sum())

    def __repr__(self):
        return "Region(%s, n=%d, %d cells)" % (self.tag, self.n, len(self))

    def __or__(self, other):
        if other.n != self.n:
            raise DomainError("Regions of different arrays")
        return Region(self.n, self.mask | other.mask, "%s|%s" % (self.tag, other.tag))

    def indices(self):
        return np.flatnonzero(self.mask)

    def cells(self):
        return [index_position(self.n, c) for c in self.indices()]


def _grid(n):
    rows, cols = np.divmod(np.arange(n * n), n)
    return rows + 1, cols + 1


def rectangle(n, rows, cols, tag=None):
    """Cells with rows[0] <= row <= rows[1] and cols[0] <= col <= cols[1]."""
    r, s = _grid(n)
    mask = (rows[0] <= r) & (r <= rows[1]) & (cols[0] <= s) & (s <= cols[1])
    return Region(n, mask, tag or "rows %d-%d, cols %d-%d" % (*rows, *cols))


def region_a(n):
    """The upper-left block i, j <= n/3."""
    return rectangle(n, (1, n // 3), (1, n // 3), "A")


def region_b(n):
    """The lower-right block i, j >= 2n/3."""
    low = -(-2 * n // 3)
    return rectangle(n, (low, n), (low, n), "B")


def region_union(n):
    return region_a(n) | region_b(n)


def cell_region(n, cells, tag="cells"):
    mask = np.zeros(n * n, dtype=bool)
    mask[[position_index(n, Position(*p)) for p in cells]] = True
    return Region(n, mask, tag)


def regions(n):
    return {"A": region_a(n), "B": region_b(n), "A|B": region_union(n)}
