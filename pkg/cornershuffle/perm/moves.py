import enum
import functools
import typing

import numpy as np

from cornershuffle.errors import DomainError
from cornershuffle.perm.perm import Perm


class Corner(enum.IntEnum):
    UL = 0  # Rotates the upper-left i x j rectangle.
    LR = 1  # Rotates the lower-right rectangle with upper-left cell (i, j).


class CornerMove(typing.NamedTuple):
    corner: Corner
    i: int
    j: int

    def __str__(self):
        return "%s(%d,%d)" % (self.corner.name, self.i, self.j)


def UL(i, j):
    return CornerMove(Corner.UL, i, j)


def LR(i, j):
    return CornerMove(Corner.LR, i, j)


def check_move(n, move):
    if not (1 <= move.i <= n and 1 <= move.j <= n):
        raise DomainError(
            "Pivot (%d, %d) outside a %dx%d array" % (move.i, move.j, n, n)
        )


@functools.lru_cache(maxsize=None)
def corner_move_perm(n, move):
    check_move(n, move)
    r, s = np.divmod(np.arange(n * n), n)
    r, s = r + 1, s + 1
    if move.corner == Corner.UL:
        inside = (r <= move.i) & (s <= move.j)
        r2 = np.where(inside, move.i + 1 - r, r)
        s2 = np.where(inside, move.j + 1 - s, s)
    else:
        inside = (r >= move.i) & (s >= move.j)
        r2 = np.where(inside, n + move.i - r, r)
        s2 = np.where(inside, n + move.j - s, s)
    return Perm(n, (r2 - 1) * n + (s2 - 1))


def move_code(n, move):
    """Index of a move in the S generator order: UL row-major, then LR."""
    check_move(n, move)
    return int(move.corner) * n * n + (move.i - 1) * n + (move.j - 1)


def code_move(n, code):
    corner, rest = divmod(int(code), n * n)
    i, j = divmod(rest, n)
    return CornerMove(Corner(corner), i + 1, j + 1)


def ul_sign(i, j):
    """Sign of UL(i, j): the rotation has floor(ij/2) two-cycles."""
    return -1 if (i * j // 2) % 2 else 1
