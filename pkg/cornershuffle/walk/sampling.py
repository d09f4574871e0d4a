import logging

import numpy as np

from cornershuffle.errors import DomainError
from cornershuffle.perm import Perm
from cornershuffle.walk.families import Family
from cornershuffle.walk.families import as_family

logger = logging.getLogger(__name__)

MC_BLOCK = 4096


def block_rng(seed, block):
    return np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=(block,))
    )


def _random_three_cycles(rng, cells, size):
    """Uniform three-cycles a -> b -> c -> a as three (size,) arrays."""
    a = rng.integers(cells, size=size)
    b = rng.integers(cells - 1, size=size)
    b += b >= a
    c = rng.integers(cells - 2, size=size)
    low, high = np.minimum(a, b), np.maximum(a, b)
    c += c >= low
    c += c >= high
    return a, b, c


def sample_trajectory(family, t, seed, n=None):
    """One draw of the time-t walk as a permutation of the whole deck."""
    family = as_family(family, n)
    if t < 0:
        raise DomainError("Time must be nonnegative, got %s" % t)
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed))
    jumps = rng.poisson(t)
    image = np.arange(family.cells)
    if family.tag == Family.R:
        for a, b, c in zip(*_random_three_cycles(rng, family.cells, jumps)):
            step = np.arange(family.cells)
            step[[a, b, c]] = [b, c, a]
            image = step[image]
    else:
        for g in rng.integers(family.num_generators, size=jumps):
            image = family.images[g][image]
    return Perm(family.n, image)


def _positions_block(family, starts, t, size, rng):
    jumps = rng.poisson(t, size=size)
    positions = np.tile(np.asarray(starts, dtype=np.int64), (size, 1))
    for step in range(int(jumps.max(initial=0))):
        active = np.flatnonzero(jumps > step)
        if family.tag == Family.R:
            a, b, c = _random_three_cycles(rng, family.cells, active.size)
            current = positions[active]
            moved = np.where(
                current == a[:, None],
                b[:, None],
                np.where(
                    current == b[:, None],
                    c[:, None],
                    np.where(current == c[:, None], a[:, None], current),
                ),
            )
            positions[active] = moved
        else:
            gens = rng.integers(family.num_generators, size=active.size)
            positions[active] = family.images[gens[:, None], positions[active]]
    return positions


def sample_positions(family, k, t, reps, seed, n=None, starts=None, threadpool=None):
    """Time-t cells of k tracked cards over ``reps`` independent walks.

    The cards start at ``starts`` (cell indices), by default the first k
    cells in row-major order. Replicates run in fixed blocks of MC_BLOCK,
    block b drawing from the generator spawned with key (b,), so results do
    not depend on how the blocks are scheduled.

    Returns:
        np.ndarray: (reps, k) cell indices.
    """
    family = as_family(family, n)
    if t < 0:
        raise DomainError("Time must be nonnegative, got %s" % t)
    starts = np.arange(k) if starts is None else np.asarray(starts)
    if len(starts) != k or len(set(starts.tolist())) != k:
        raise DomainError("Need %d distinct start cells, got %s" % (k, starts))
    sizes = [min(MC_BLOCK, reps - b) for b in range(0, reps, MC_BLOCK)]

    def run(block):
        return _positions_block(
            family, starts, t, sizes[block], block_rng(seed, block)
        )

    map_fn = threadpool.map if threadpool is not None else map
    blocks = list(map_fn(run, range(len(sizes))))
    logger.debug("Sampled %d replicates of %s at t=%s", reps, family, t)
    if not blocks:
        return np.empty((0, k), dtype=np.int64)
    return np.concatenate(blocks)
