import typing

import numpy as np

from cornershuffle.errors import DomainError


class Position(typing.NamedTuple):
    """A cell of the n x n array, 1-based, (1, 1) in the upper-left corner."""

    row: int
    col: int


TOP = Position(1, 1)


def check_position(n, pos):
    if not (1 <= pos.row <= n and 1 <= pos.col <= n):
        raise DomainError("Position %s outside a %dx%d array" % (tuple(pos), n, n))


def position_index(n, pos):
    check_position(n, pos)
    return (pos.row - 1) * n + (pos.col - 1)


def index_position(n, index):
    row, col = divmod(int(index), n)
    return Position(row + 1, col + 1)


def all_positions(n):
    return [Position(r, c) for r in range(1, n + 1) for c in range(1, n + 1)]


class Perm:
    """A bijection of the n^2 cells of an n x n array.

    ``image[c]`` is the cell the card at cell ``c`` moves to, with cells
    numbered row-major from zero. Instances are immutable.
    """

    __slots__ = ("n", "image", "_key")

    def __init__(self, n, image):
        image = np.array(image, dtype=np.int64)
        if image.shape != (n * n,):
            raise DomainError(
                "Image of length %d does not cover a %dx%d array"
                % (image.size, n, n)
            )
        if np.any(np.bincount(image, minlength=n * n) != 1):
            raise DomainError("Image is not a bijection of the %d cells" % (n * n))
        image.flags.writeable = False
        self.n = n
        self.image = image
        self._key = image.tobytes()

    @classmethod
    def identity(cls, n):
        return cls(n, np.arange(n * n))

    @classmethod
    def from_mapping(cls, n, mapping):
        """Builds the permutation sending each key Position to its value."""
        image = np.arange(n * n)
        for src, dst in mapping.items():
            image[position_index(n, src)] = position_index(n, dst)
        return cls(n, image)

    def __call__(self, pos):
        return index_position(self.n, self.image[position_index(self.n, pos)])

    def __eq__(self, other):
        if not isinstance(other, Perm):
            return NotImplemented
        return self.n == other.n and self._key == other._key

    def __hash__(self):
        return hash((self.n, self._key))

    def __repr__(self):
        cycles = [
            tuple(tuple(index_position(self.n, c)) for c in cycle)
            for cycle in cycles_of(self)
        ]
        return "Perm(n=%d, cycles=%s)" % (self.n, cycles)

    def is_identity(self):
        return bool(np.all(self.image == np.arange(self.image.size)))

    def layout(self):
        """The array of original cell labels after applying this permutation.

        Entry (r, c) holds the cell index of the card now lying at (r, c),
        so ``layout()`` of the identity is ``arange(n * n).reshape(n, n)``.
        """
        cards = np.empty_like(self.image)
        cards[self.image] = np.arange(self.image.size)
        return cards.reshape(self.n, self.n)


def compose(p, q):
    """First p, then q."""
    if p.n != q.n:
        raise DomainError("Cannot compose permutations of sizes %d and %d" % (p.n, q.n))
    return Perm(p.n, q.image[p.image])


def compose_all(n, perms):
    image = np.arange(n * n)
    for p in perms:
        image = p.image[image]
    return Perm(n, image)


def inverse(p):
    image = np.empty_like(p.image)
    image[p.image] = np.arange(p.image.size)
    return Perm(p.n, image)


def cycles_of(p):
    """Non-trivial cycles as tuples of cell indices, each starting at its
    smallest cell, ordered by that cell."""
    seen = np.zeros(p.image.size, dtype=bool)
    cycles = []
    for start in range(p.image.size):
        if seen[start]:
            continue
        cycle = [start]
        seen[start] = True
        cell = int(p.image[start])
        while cell != start:
            cycle.append(cell)
            seen[cell] = True
            cell = int(p.image[cell])
        if len(cycle) > 1:
            cycles.append(tuple(cycle))
    return cycles


def cycle_type(p):
    """Cycle lengths in decreasing order, fixed points included."""
    lengths = [len(c) for c in cycles_of(p)]
    fixed = p.image.size - sum(lengths)
    return tuple(sorted(lengths, reverse=True)) + (1,) * fixed


def sign(p):
    lengths = [len(c) for c in cycles_of(p)]
    return -1 if sum(length - 1 for length in lengths) % 2 else 1


def is_three_cycle(p):
    lengths = [len(c) for c in cycles_of(p)]
    return lengths == [3]


def three_cycle(n, a, b, c):
    """The permutation moving the card at a to b, at b to c and at c to a."""
    if len({a, b, c}) != 3:
        raise DomainError("Three-cycle needs distinct cells, got %s" % ((a, b, c),))
    return Perm.from_mapping(n, {a: b, b: c, c: a})


def three_cycle_cells(p):
    """(a, b, c) with a -> b -> c -> a and a the smallest cell, as Positions."""
    if not is_three_cycle(p):
        raise DomainError("%r is not a three-cycle" % (p,))
    (cycle,) = cycles_of(p)
    return tuple(index_position(p.n, c) for c in cycle)
