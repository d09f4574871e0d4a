import functools
import logging

import numpy as np

from cornershuffle.errors import DomainError
from cornershuffle.errors import VerificationFailure
from cornershuffle.perm import TOP
from cornershuffle.perm import UL
from cornershuffle.perm import Position
from cornershuffle.perm import code_move
from cornershuffle.perm import compose_all
from cornershuffle.perm import corner_move_perm
from cornershuffle.perm import move_code
from cornershuffle.perm import three_cycle
from cornershuffle.perm.perm import Perm
from cornershuffle.perm.perm import check_position

logger = logging.getLogger(__name__)

MAX_X = 4
MAX_Y = 16
MAX_Z = 64
MAX_W = 128
MAX_THREE_CYCLE = 640


class MoveWord:
    """A sequence of corner moves together with its product.

    The product (first move first) is checked against ``target`` when the
    word is built, so every MoveWord in existence realizes its target.
    Moves are stored as codes in the S generator order (see ``move_code``).
    """

    __slots__ = ("n", "codes", "target")

    def __init__(self, n, codes, target):
        codes = np.asarray(codes, dtype=np.int64)
        codes.flags.writeable = False
        self.n = n
        self.codes = codes
        self.target = target

    @classmethod
    def from_moves(cls, n, moves, target=None):
        product = compose_all(n, [corner_move_perm(n, m) for m in moves])
        if target is not None and product != target:
            raise VerificationFailure(
                "Word %s has product %r, expected %r"
                % ([str(m) for m in moves], product, target)
            )
        return cls(n, [move_code(n, m) for m in moves], product)

    @classmethod
    def concat(cls, n, words, target):
        product = compose_all(n, [w.target for w in words])
        if product != target:
            raise VerificationFailure(
                "Concatenated word has product %r, expected %r" % (product, target)
            )
        return cls(n, np.concatenate([w.codes for w in words]), target)

    def __len__(self):
        return len(self.codes)

    @property
    def moves(self):
        return tuple(code_move(self.n, c) for c in self.codes)

    def occurrences(self):
        """N(sigma, word) for every generator sigma of S, in code order."""
        return np.bincount(self.codes, minlength=2 * self.n * self.n)

    def __repr__(self):
        return "MoveWord(n=%d, %s)" % (self.n, " ".join(str(m) for m in self.moves))


def _check_pivot(n, i, j):
    if not (1 <= i <= n and 1 <= j <= n):
        raise DomainError("Pivot (%d, %d) outside a %dx%d array" % (i, j, n, n))


@functools.lru_cache(maxsize=None)
def build_X(n, i, j):
    _check_pivot(n, i, j)
    if i >= 3:
        moves = [UL(i, j), UL(i - 1, j), UL(i - 2, j), UL(i - 1, j)]
    else:
        moves = [UL(i, j)]
    return MoveWord.from_moves(n, moves)


def y_claim(n, i, j):
    """The product claimed for Y_ij when i, j >= 2: (i,j) <-> T and
    (i,1) <-> (1,j). None for boundary pivots, whose product is recorded
    rather than claimed."""
    if i < 2 or j < 2:
        return None
    return Perm.from_mapping(
        n,
        {
            Position(i, j): TOP,
            TOP: Position(i, j),
            Position(i, 1): Position(1, j),
            Position(1, j): Position(i, 1),
        },
    )


@functools.lru_cache(maxsize=None)
def build_Y(n, i, j):
    _check_pivot(n, i, j)
    if j >= 3:
        parts = [build_X(n, i, j), build_X(n, i, j - 1)]
        parts += [build_X(n, i, j - 2), build_X(n, i, j - 1)]
    else:
        parts = [build_X(n, i, j)]
    product = compose_all(n, [w.target for w in parts])
    claim = y_claim(n, i, j)
    return MoveWord.concat(n, parts, product if claim is None else claim)


def _y(n, pos):
    return build_Y(n, pos.row, pos.col)


@functools.lru_cache(maxsize=None)
def build_Z(n, p1, p2):
    """Y_p1 Y_p2 Y_p1 Y_p2, the three-cycle T -> p2 -> p1 -> T."""
    p1, p2 = Position(*p1), Position(*p2)
    check_position(n, p1)
    check_position(n, p2)
    if TOP in (p1, p2):
        raise DomainError("Z needs positions other than the top element")
    if p1.row == p2.row or p1.col == p2.col:
        raise DomainError("Z needs distinct rows and columns: %s, %s" % (p1, p2))
    y1, y2 = _y(n, p1), _y(n, p2)
    return MoveWord.concat(n, [y1, y2, y1, y2], three_cycle(n, TOP, p2, p1))


def build_W(n, p1, p2, p3):
    """Z(p1, p2) Z(p2, p3), the three-cycle p3 -> p2 -> p1 -> p3."""
    cells = [Position(*p) for p in (p1, p2, p3)]
    for p in cells:
        check_position(n, p)
    if TOP in cells:
        raise DomainError("W needs positions other than the top element")
    if len({p.row for p in cells}) != 3 or len({p.col for p in cells}) != 3:
        raise DomainError("W needs distinct rows and columns: %s" % (cells,))
    p1, p2, p3 = cells
    return MoveWord.concat(
        n, [build_Z(n, p1, p2), build_Z(n, p2, p3)], three_cycle(n, p3, p2, p1)
    )


def y_products(n):
    """Every Y_ij with its product and claim status.

    Returns:
        list of (i, j, MoveWord, status) where status is "claimed" when the
        product equals the double transposition, otherwise "recorded".
    """
    table = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            word = build_Y(n, i, j)
            status = "claimed" if y_claim(n, i, j) is not None else "recorded"
            table.append((i, j, word, status))
    return table
