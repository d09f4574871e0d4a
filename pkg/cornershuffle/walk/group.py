import functools
import logging
import math

import numpy as np
from scipy import sparse

from cornershuffle.errors import CapExceeded
from cornershuffle.errors import DomainError
from cornershuffle.walk.families import Family
from cornershuffle.walk.families import as_family
from cornershuffle.walk.kernels import SparseKernel
from cornershuffle.walk.transient import DEFAULT_TOL
from cornershuffle.walk.transient import transient_distribution

logger = logging.getLogger(__name__)

FULL_GROUP_MAX_N = 3


def lehmer_rank(perms):
    """Lexicographic rank of each row of an (count, m) permutation array."""
    perms = np.asarray(perms)
    m = perms.shape[1]
    rank = np.zeros(len(perms), dtype=np.int64)
    for i in range(m):
        smaller = (perms[:, i + 1 :] < perms[:, i : i + 1]).sum(axis=1)
        rank = rank * (m - i) + smaller
    return rank


class GroupSpace:
    """The elements of the group generated by a set of cell permutations.

    Elements are stored in breadth-first order from the identity, so
    ``parent[e]`` and ``via[e]`` spell a shortest generator word:
    ``elements[e] = elements[parent[e]]`` followed by generator ``via[e]``.
    """

    def __init__(self, images):
        images = np.asarray(images, dtype=np.int8)
        m = images.shape[1]
        seen = np.zeros(math.factorial(m), dtype=bool)
        identity = np.arange(m, dtype=np.int8)[None]
        seen[lehmer_rank(identity)] = True
        layers, parents, vias = [identity], [np.array([-1])], [np.array([-1])]
        offset, frontier = 0, identity
        while len(frontier):
            # candidates[g, f] = frontier[f] followed by generator g.
            candidates = images[:, frontier].reshape(-1, m)
            ranks = lehmer_rank(candidates)
            ranks, first = np.unique(ranks, return_index=True)
            fresh = ~seen[ranks]
            seen[ranks[fresh]] = True
            first = first[fresh]
            via, local = np.divmod(first, len(frontier))
            frontier = candidates[first]
            layers.append(frontier)
            parents.append(offset + local)
            vias.append(via)
            offset += len(layers[-2])
        self.elements = np.concatenate(layers)
        self.parent = np.concatenate(parents)
        self.via = np.concatenate(vias)
        ranks = lehmer_rank(self.elements)
        self._order = np.argsort(ranks)
        self._sorted_ranks = ranks[self._order]
        self.degree = m

    def __len__(self):
        return len(self.elements)

    @property
    def order(self):
        return len(self.elements)

    def is_full(self):
        return self.order == math.factorial(self.degree)

    def index(self, perms):
        """Element indices of (count, m) images; callers check membership."""
        ranks = lehmer_rank(np.atleast_2d(perms))
        slots = np.searchsorted(self._sorted_ranks, ranks)
        return self._order[np.minimum(slots, len(self._order) - 1)]

    def word(self, element):
        """Generator indices of a shortest word for element index ``element``."""
        word = []
        while self.parent[element] >= 0:
            word.append(int(self.via[element]))
            element = int(self.parent[element])
        return word[::-1]


@functools.lru_cache(maxsize=8)
def group_kernel(family, n=None, max_n=FULL_GROUP_MAX_N):
    """The one-jump kernel of the walk on the generated subgroup."""
    family = as_family(family, n)
    if family.tag == Family.R:
        raise DomainError("Full-group kernels are only built for S0 and S")
    if family.n > max_n:
        raise CapExceeded("full_group_max_n", max_n, family.n)
    space = GroupSpace(family.images)
    logger.info("%s generates a group of order %d", family, space.order)
    cols = np.concatenate(
        [space.index(image[space.elements]) for image in family.images]
    )
    rows = np.tile(np.arange(space.order), len(family.images))
    counts = sparse.coo_matrix(
        (np.ones(rows.size, dtype=np.int64), (rows, cols)),
        shape=(space.order, space.order),
    )
    return SparseKernel(space, counts, family.num_generators)


def full_group_distribution(family, t, n=None, tol=DEFAULT_TOL):
    """Time-t law of the walk on the whole deck, started at the identity.

    Returns:
        (DistributionVector, int): the distribution over the generated
        subgroup and the subgroup's order.
    """
    kernel = group_kernel(as_family(family, n))
    return transient_distribution(kernel, 0, t, tol), kernel.space.order
