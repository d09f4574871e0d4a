import enum
import functools
import math

import numpy as np

from cornershuffle.errors import DomainError
from cornershuffle.perm import LR
from cornershuffle.perm import UL
from cornershuffle.perm import corner_move_perm


class Family(enum.Enum):
    S0 = "S0"  # Upper-left corner moves only.
    S = "S"  # Upper-left and lower-right corner moves.
    R = "R"  # Uniform three-cycles.


class ShuffleFamily:
    """One of the three continuous-time shuffles on an n x n array.

    Every family jumps at total rate 1. S0 picks one of its n^2 moves
    uniformly, S one of its 2n^2 moves, and R one of the 2*C(n^2, 3)
    three-cycles of cells.
    """

    def __init__(self, tag, n):
        self.tag = Family(tag)
        if n < 1:
            raise DomainError("Array side must be positive, got %d" % n)
        if self.tag == Family.R and n * n < 3:
            raise DomainError("R needs at least three cells, got n=%d" % n)
        self.n = n

    def __repr__(self):
        return "ShuffleFamily(%s, n=%d)" % (self.tag.value, self.n)

    def __eq__(self, other):
        return (
            isinstance(other, ShuffleFamily)
            and self.tag == other.tag
            and self.n == other.n
        )

    def __hash__(self):
        return hash((self.tag, self.n))

    @property
    def cells(self):
        return self.n * self.n

    @property
    def num_generators(self):
        if self.tag == Family.S0:
            return self.cells
        if self.tag == Family.S:
            return 2 * self.cells
        return 2 * math.comb(self.cells, 3)

    @property
    def moves(self):
        return family_moves(self.tag, self.n)

    @property
    def images(self):
        """(num_generators, n^2) array of generator images, in move order."""
        return _images(self.tag, self.n)


def as_family(family, n=None):
    if isinstance(family, ShuffleFamily):
        return family
    if n is None:
        raise DomainError("A family tag needs an array side")
    return ShuffleFamily(family, n)


@functools.lru_cache(maxsize=None)
def family_moves(tag, n):
    tag = Family(tag)
    if tag == Family.R:
        raise DomainError("R is not generated by corner moves")
    pivots = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    moves = [UL(i, j) for i, j in pivots]
    if tag == Family.S:
        moves += [LR(i, j) for i, j in pivots]
    return tuple(moves)


@functools.lru_cache(maxsize=None)
def _images(tag, n):
    images = np.stack([corner_move_perm(n, m).image for m in family_moves(tag, n)])
    images.flags.writeable = False
    return images
