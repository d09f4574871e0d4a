import fractions
import functools
import itertools
import logging
import math

import numpy as np
from scipy import sparse

from cornershuffle.errors import CapExceeded
from cornershuffle.errors import DomainError
from cornershuffle.perm import position_index
from cornershuffle.walk.families import Family
from cornershuffle.walk.families import as_family

logger = logging.getLogger(__name__)

STATE_CAP = 20000


def tuple_count(cells, k):
    return math.perm(cells, k)


class TupleSpace:
    """Ordered k-tuples of distinct cells, enumerated lexicographically.

    ``states[s]`` holds the cell indices of state ``s``. Lexicographic order
    makes the base-``cells`` codes of the states increasing, so lookups are a
    binary search.
    """

    def __init__(self, n, k):
        if k < 1 or k > n * n:
            raise DomainError("Tuple size %d invalid for %d cells" % (k, n * n))
        self.n = n
        self.k = k
        self.cells = n * n
        self.states = np.array(
            list(itertools.permutations(range(self.cells), k)), dtype=np.int64
        ).reshape(-1, k)
        self.states.flags.writeable = False
        self._weights = self.cells ** np.arange(k - 1, -1, -1, dtype=np.int64)
        self.codes = self.states @ self._weights

    def __len__(self):
        return len(self.states)

    def encode(self, tuples):
        return np.asarray(tuples, dtype=np.int64) @ self._weights

    def index(self, tuples):
        """State indices of an (..., k) array of cell tuples."""
        codes = self.encode(tuples)
        idx = np.searchsorted(self.codes, codes)
        idx = np.minimum(idx, len(self.codes) - 1)
        if np.any(self.codes[idx] != codes):
            raise DomainError("Tuples with repeated cells are not states")
        return idx

    def state_of(self, positions):
        """State index of a tuple of Positions."""
        cells = [position_index(self.n, p) for p in positions]
        return int(self.index(np.array(cells)))


class SparseKernel:
    """A one-jump transition kernel with integer counts over a common
    denominator, so rows can be checked and read exactly.

    Args:
        space: the state space. Either a TupleSpace or a group element
            space (see ``cornershuffle.walk.group``).
        counts (scipy.sparse.csr_matrix): number of generators mapping row
            state to column state.
        denominator (int): total number of generators.
    """

    def __init__(self, space, counts, denominator):
        self.space = space
        self.counts = counts.tocsr()
        self.counts.sum_duplicates()
        self.denominator = int(denominator)

    def __len__(self):
        return self.counts.shape[0]

    @functools.cached_property
    def matrix(self):
        return (self.counts.astype(np.float64) / self.denominator).tocsr()

    @functools.cached_property
    def transpose(self):
        # Row vectors evolve as v K = K^T v.
        return self.matrix.T.tocsr()

    def row(self, state):
        """Exact row as a {state: Fraction} dict."""
        row = self.counts.getrow(state)
        return {
            int(c): fractions.Fraction(int(v), self.denominator)
            for c, v in zip(row.indices, row.data)
        }

    def row_sums(self):
        return np.asarray(self.counts.sum(axis=1)).ravel()

    def column_sums(self):
        return np.asarray(self.counts.sum(axis=0)).ravel()

    def is_doubly_stochastic(self):
        return bool(
            np.all(self.row_sums() == self.denominator)
            and np.all(self.column_sums() == self.denominator)
        )


def marginal_kernel(family, k, n=None, state_cap=STATE_CAP):
    """The one-jump kernel of the positions of k distinct cards."""
    family = as_family(family, n)
    size = tuple_count(family.cells, k)
    if size > state_cap:
        raise CapExceeded("state_cap", state_cap, size)
    space = TupleSpace(family.n, k)
    logger.info("Building %s kernel on %d %d-tuples", family, len(space), k)
    if family.tag == Family.R:
        rows, cols, data = _three_cycle_entries(space)
    else:
        rows, cols, data = _generator_entries(space, family.images)
    counts = sparse.coo_matrix(
        (data, (rows, cols)), shape=(len(space), len(space)), dtype=np.int64
    )
    kernel = SparseKernel(space, counts, family.num_generators)
    if not np.all(kernel.row_sums() == kernel.denominator):
        raise RuntimeError("Kernel rows of %s do not sum to one" % family)
    return kernel


def _generator_entries(space, images):
    rows = np.tile(np.arange(len(space)), len(images))
    cols = np.concatenate([space.index(image[space.states]) for image in images])
    return rows, cols, np.ones(rows.size, dtype=np.int64)


def _three_cycle_entries(space):
    """Counts three-cycles by how many of their cells the tuple occupies.

    A cycle touching no tuple cell fixes the tuple. A cycle through one tuple
    cell x sends x to any outside cell y, with N-k-1 choices for its third
    cell. A cycle through tuple cells x -> x' and an outside z moves x to x'
    and x' to z. Cycles within the tuple permute its entries.
    """
    states, k, cells = space.states, space.k, space.cells
    size = len(space)
    outside_cells = cells - k
    rows, cols, data = [], [], []

    def emit(targets, mask, weight):
        r = np.broadcast_to(np.arange(size)[:, None], mask.shape)[mask]
        rows.append(r)
        cols.append(space.index(targets[mask]))
        data.append(np.full(r.size, weight, dtype=np.int64))

    fixed = 2 * math.comb(outside_cells, 3)
    if fixed:
        rows.append(np.arange(size))
        cols.append(np.arange(size))
        data.append(np.full(size, fixed, dtype=np.int64))

    # outside[s, y] is true when cell y is not in state s.
    outside = np.ones((size, cells), dtype=bool)
    outside[np.arange(size)[:, None], states] = False
    everywhere = np.arange(cells)

    if outside_cells >= 2:
        for p in range(k):
            targets = np.repeat(states[:, None, :], cells, axis=1)
            targets[:, :, p] = everywhere
            emit(targets, outside, outside_cells - 1)

    if outside_cells >= 1:
        for p, q in itertools.permutations(range(k), 2):
            targets = np.repeat(states[:, None, :], cells, axis=1)
            targets[:, :, p] = states[:, q][:, None]
            targets[:, :, q] = everywhere
            emit(targets, outside, 1)

    for p, q, r in itertools.combinations(range(k), 3):
        for a, b, c in ((p, q, r), (p, r, q)):
            targets = states.copy()
            targets[:, a] = states[:, b]
            targets[:, b] = states[:, c]
            targets[:, c] = states[:, a]
            rows.append(np.arange(size))
            cols.append(space.index(targets))
            data.append(np.ones(size, dtype=np.int64))

    return np.concatenate(rows), np.concatenate(cols), np.concatenate(data)
