import functools
import itertools
import logging

from cornershuffle.comparison.words import MAX_THREE_CYCLE
from cornershuffle.comparison.words import MAX_W
from cornershuffle.comparison.words import MAX_Z
from cornershuffle.comparison.words import MoveWord
from cornershuffle.comparison.words import build_W
from cornershuffle.comparison.words import build_Z
from cornershuffle.errors import DomainError
from cornershuffle.errors import InfeasibleDecomposition
from cornershuffle.perm import TOP
from cornershuffle.perm import all_positions
from cornershuffle.perm import code_move
from cornershuffle.perm import is_three_cycle
from cornershuffle.perm import three_cycle
from cornershuffle.perm import three_cycle_cells
from cornershuffle.walk import ShuffleFamily
from cornershuffle.walk import group_kernel

logger = logging.getLogger(__name__)

HELPER_RADIUS = 6
STRATEGIES = ("helpers", "shortest", "auto")
MAX_LENGTHS = {"A3": MAX_W, "A3_top": MAX_Z, "A2": MAX_THREE_CYCLE}


def classify(cells):
    """Case of a three-cycle by its cells: "A3", "A3_top" or "A2"."""
    rows = {p.row for p in cells}
    cols = {p.col for p in cells}
    if len(rows) == 3 and len(cols) == 3:
        return "A3_top" if TOP in cells else "A3"
    return "A2"


def _a3_candidates(n, x, y, z):
    """Words for x -> y -> z -> x with rows and columns distinct, in both
    orientations of the underlying construction."""
    cells = (x, y, z)
    if TOP in cells:
        shift = cells.index(TOP)
        _, y, z = cells[shift:] + cells[:shift]
        yield build_Z(n, z, y)
        yield build_Z(n, y, z)
    else:
        yield build_W(n, z, y, x)
        yield build_W(n, x, y, z)


def _a3_word(n, x, y, z):
    target = three_cycle(n, x, y, z)
    for word in _a3_candidates(n, x, y, z):
        if word.target == target:
            return word
    raise DomainError("No Z or W word realizes %s -> %s -> %s" % (x, y, z))


def helper_pair(n, cells):
    """First pair (d, e), row-major, of cells near the cycle whose rows and
    columns avoid the cycle's and each other's."""
    rows = {p.row for p in cells}
    cols = {p.col for p in cells}
    near = [
        p
        for p in all_positions(n)
        if p.row not in rows
        and p.col not in cols
        and any(
            abs(p.row - c.row) + abs(p.col - c.col) <= HELPER_RADIUS for c in cells
        )
    ]
    for index, d in enumerate(near):
        for e in near[index + 1 :]:
            if d.row != e.row and d.col != e.col:
                return d, e
    raise InfeasibleDecomposition(n)


def _shared_line_word(n, x, y, z):
    # W_ade W_bde W_cde W_ade W_bde realizes a -> c -> b -> a.
    a, c, b = x, y, z
    d, e = helper_pair(n, (a, b, c))
    w_a, w_b, w_c = (_a3_word(n, e, d, p) for p in (a, b, c))
    return MoveWord.concat(n, [w_a, w_b, w_c, w_a, w_b], three_cycle(n, x, y, z))


@functools.lru_cache(maxsize=4)
def _shortest_space(n):
    return group_kernel(ShuffleFamily("S0", n)).space


def _shortest_word(n, x, y, z):
    """A shortest word over upper-left moves, by search of the whole group."""
    target = three_cycle(n, x, y, z)
    space = _shortest_space(n)
    element = int(space.index(target.image)[0])
    if (space.elements[element] != target.image).any():
        raise InfeasibleDecomposition(
            n, "Upper-left moves do not generate %r for n=%d" % (target, n)
        )
    moves = [code_move(n, g) for g in space.word(element)]
    return MoveWord.from_moves(n, moves, target)


def decompose_cells(n, x, y, z, strategy="helpers"):
    """Word for the three-cycle x -> y -> z -> x."""
    if strategy not in STRATEGIES:
        raise DomainError("Unknown decomposition strategy '%s'" % strategy)
    if strategy == "shortest":
        return _shortest_word(n, x, y, z)
    if classify((x, y, z)) != "A2":
        return _a3_word(n, x, y, z)
    try:
        return _shared_line_word(n, x, y, z)
    except InfeasibleDecomposition:
        if strategy == "auto" and n <= 3:
            return _shortest_word(n, x, y, z)
        raise


def decompose_three_cycle(n, c, strategy="helpers"):
    if c.n != n:
        raise DomainError("Permutation is for n=%d, not n=%d" % (c.n, n))
    if not is_three_cycle(c):
        raise DomainError("%r is not a three-cycle" % (c,))
    return decompose_cells(n, *three_cycle_cells(c), strategy=strategy)


def three_cycles(n):
    """All 2*C(n^2, 3) three-cycles as (x, y, z) cell triples, x -> y -> z."""
    for a, b, c in itertools.combinations(all_positions(n), 3):
        yield a, b, c
        yield a, c, b


def shortest_words(n):
    """Shortest upper-left words for every three-cycle; n <= 3 only."""
    return {cells: _shortest_word(n, *cells) for cells in three_cycles(n)}
