import collections
import fractions
import functools
import logging

import numpy as np

from cornershuffle.errors import DomainError
from cornershuffle.geometry.regions import region_union
from cornershuffle.perm import Corner
from cornershuffle.perm import Position
from cornershuffle.perm import all_positions
from cornershuffle.perm import index_position
from cornershuffle.perm import position_index
from cornershuffle.walk import ShuffleFamily

logger = logging.getLogger(__name__)


@functools.lru_cache(maxsize=8)
def _cover(n):
    """(covers, images): covers[g, c] is true when generator g of S moves
    the block containing cell c."""
    family = ShuffleFamily("S", n)
    rows, cols = np.divmod(np.arange(n * n), n)
    rows, cols = rows + 1, cols + 1
    covers = np.zeros(family.images.shape, dtype=bool)
    for g, move in enumerate(family.moves):
        if move.corner == Corner.UL:
            covers[g] = (rows <= move.i) & (cols <= move.j)
        else:
            covers[g] = (rows >= move.i) & (cols >= move.j)
    covers.flags.writeable = False
    return covers, family.images


@functools.lru_cache(maxsize=8)
def jump_matrix(n):
    """Boolean (n^2, n^2) matrix with [x, y] true when y is in jump_set(x)."""
    covers, images = _cover(n)
    g, x = np.nonzero(covers)
    matrix = np.zeros((n * n, n * n), dtype=bool)
    matrix[x, images[g, x]] = True
    matrix.flags.writeable = False
    return matrix


def jump_set(n, x):
    """Cells a card at x reaches in one move that displaces it.

    Returns:
        (set of Position, Counter): the targets, and for each target the
        number of generators of S taking x there.
    """
    x = Position(*x)
    c = position_index(n, x)
    covers, images = _cover(n)
    counts = collections.Counter(
        index_position(n, target) for target in images[covers[:, c], c]
    )
    return set(counts), counts


def formula_jump_set(n, x):
    """{(a, b) : (n + 1 - a - i)(n + 1 - b - j) >= 0} for x = (i, j)."""
    i, j = Position(*x)
    return {
        p
        for p in all_positions(n)
        if (n + 1 - p.row - i) * (n + 1 - p.col - j) >= 0
    }


def jump_rate_into(n, x, region):
    """Rate at which a card at x lands in ``region`` under S."""
    c = position_index(n, Position(*x))
    _, images = _cover(n)
    hits = int(region.mask[images[:, c]].sum())
    return fractions.Fraction(hits, len(images))


def min_jump_rate(n, region):
    """Minimum of jump_rate_into over all cells, with a minimizing cell."""
    _, images = _cover(n)
    hits = region.mask[images].sum(axis=0)
    c = int(np.argmin(hits))
    return fractions.Fraction(int(hits[c]), len(images)), index_position(n, c)


def min_common_jump(n, region):
    """Fewest common jump targets over pairs of distinct cells of ``region``.

    Returns:
        (int, (Position, Position)): the minimum and a pair attaining it.
    """
    cells = region.indices()
    if len(cells) < 2:
        raise DomainError("Need at least two cells, got %d" % len(cells))
    rows = jump_matrix(n)[cells].astype(np.int64)
    common = rows @ rows.T
    np.fill_diagonal(common, np.iinfo(np.int64).max)
    a, b = np.unravel_index(np.argmin(common), common.shape)
    a, b = min(a, b), max(a, b)
    return int(common[a, b]), (
        index_position(n, cells[a]),
        index_position(n, cells[b]),
    )


def geometry_report(n):
    """Rate and common-jump minima over A|B against their claimed floors.

    The floors 1/(3n) and n^2/9 are asserted only for n divisible by 3;
    the minimum common jump is also reported relative to n^2/3.
    """
    region = region_union(n)
    logger.info("Scanning jump geometry of %r", region)
    rate, rate_cell = min_jump_rate(n, region)
    common, pair = min_common_jump(n, region)
    rate_floor = fractions.Fraction(1, 3 * n)
    divisible = n % 3 == 0
    return {
        "n": n,
        "region": region.tag,
        "region_size": len(region),
        "divisible_by_3": divisible,
        "min_rate": str(rate),
        "min_rate_float": float(rate),
        "min_rate_cell": list(rate_cell),
        "rate_over_1_3n": float(rate / rate_floor),
        "min_common_jump": common,
        "min_common_pair": [list(p) for p in pair],
        "common_over_n2_9": common / (n * n / 9),
        "common_over_n2_3": common / (n * n / 3),
        "rate_claim_holds": rate >= rate_floor if divisible else None,
        "common_claim_holds": 9 * common >= n * n if divisible else None,
    }
