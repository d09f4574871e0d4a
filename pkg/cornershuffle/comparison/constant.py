import collections
import dataclasses
import fractions
import logging
import math
import typing

import numpy as np
from scipy import linalg

from cornershuffle.comparison.decompose import MAX_LENGTHS
from cornershuffle.comparison.decompose import classify
from cornershuffle.comparison.decompose import decompose_cells
from cornershuffle.comparison.decompose import three_cycles
from cornershuffle.comparison.words import build_Y
from cornershuffle.errors import CapExceeded
from cornershuffle.errors import DomainError
from cornershuffle.errors import InfeasibleDecomposition
from cornershuffle.errors import VerificationFailure
from cornershuffle.perm import index_position
from cornershuffle.spectral import r_kernel
from cornershuffle.walk import Family
from cornershuffle.walk import ShuffleFamily
from cornershuffle.walk import group_kernel
from cornershuffle.walk.sampling import block_rng

logger = logging.getLogger(__name__)

EXHAUSTIVE_MAX_N = 10
CHUNK = 2048


@dataclasses.dataclass
class ComparisonReport:
    """Comparison constant of a corner shuffle against the three-cycle walk.

    Attributes:
        B: (|A1| / |A2|) * max over generators sigma of sum over three-cycles
            pi of |pi| * N(sigma, pi). In sampled mode |A2| is the number of
            sampled cycles, making B an estimate. None when any cycle failed
            to decompose, since the remaining cycles only give a lower value.
        max_support: max over sigma of #{pi in A3 : N(sigma, pi) > 0}.
        lengths: histogram of word lengths.
        cases: number of cycles in each of the cases A3, A3_top and A2.
        failures: cycles whose decomposition failed, with the reason.
    """

    n: int
    family: str
    B: typing.Optional[fractions.Fraction]
    max_support: int
    lengths: dict
    cases: dict
    cycles: int
    exhaustive: bool
    strategy: str
    failures: list = dataclasses.field(default_factory=list)

    @property
    def support_bound(self):
        return 27 * self.n**4

    @property
    def max_length(self):
        return max(self.lengths) if self.lengths else 0

    def constant(self):
        """B, raising VerificationFailure when some cycle failed to decompose."""
        if self.B is None:
            raise VerificationFailure(
                "%d of %d three-cycles of the %dx%d array failed to decompose; "
                "no comparison constant"
                % (len(self.failures), self.cycles, self.n, self.n)
            )
        return self.B

    def to_dict(self):
        return {
            "n": self.n,
            "family": self.family,
            "B": None if self.B is None else str(self.B),
            "B_float": None if self.B is None else float(self.B),
            "cycles": self.cycles,
            "exhaustive": self.exhaustive,
            "strategy": self.strategy,
            "counts_by_case": dict(sorted(self.cases.items())),
            "max_word_length": self.max_length,
            "word_lengths": {str(k): v for k, v in sorted(self.lengths.items())},
            "max_support": self.max_support,
            "support_bound": self.support_bound,
            "support_bound_holds": self.max_support <= self.support_bound,
            "failures": self.failures,
        }


def _scan(n, cycles, strategy):
    """Per-generator sums of |pi| N(sigma, pi) and A3 supports over cycles."""
    weighted = np.zeros(2 * n * n, dtype=np.int64)
    support = np.zeros(2 * n * n, dtype=np.int64)
    lengths = collections.Counter()
    cases = collections.Counter()
    failures = []
    for cells in cycles:
        case = classify(cells)
        cases[case] += 1
        try:
            word = decompose_cells(n, *cells, strategy=strategy)
        except (VerificationFailure, InfeasibleDecomposition) as e:
            failures.append({"cycle": [list(p) for p in cells], "reason": str(e)})
            continue
        if len(word) > MAX_LENGTHS[case]:
            failures.append(
                {
                    "cycle": [list(p) for p in cells],
                    "reason": "word length %d exceeds %d"
                    % (len(word), MAX_LENGTHS[case]),
                    "word": [str(m) for m in word.moves],
                }
            )
        counts = word.occurrences()
        weighted += len(word) * counts
        if case != "A2":
            support += counts > 0
        lengths[len(word)] += 1
    return weighted, support, lengths, cases, failures


def comparison_constant(
    n,
    family="S0",
    exhaustive=True,
    samples=1000,
    seed=0,
    strategy="helpers",
    max_n=EXHAUSTIVE_MAX_N,
    threadpool=None,
):
    family = Family(family)
    if family == Family.R:
        raise DomainError("The comparison constant compares S0 or S against R")
    if exhaustive and n > max_n:
        raise CapExceeded("exhaustive_max_n", max_n, n)
    cells = n * n
    if exhaustive:
        cycles = list(three_cycles(n))
    else:
        rng = block_rng(seed, 0)
        cycles = [
            tuple(index_position(n, c) for c in rng.choice(cells, 3, replace=False))
            for _ in range(samples)
        ]
    logger.info(
        "Decomposing %d three-cycles of a %dx%d array (%s)",
        len(cycles),
        n,
        n,
        "exhaustive" if exhaustive else "sampled",
    )
    chunks = [cycles[i : i + CHUNK] for i in range(0, len(cycles), CHUNK)]
    map_fn = threadpool.map if threadpool is not None else map
    weighted = np.zeros(2 * cells, dtype=np.int64)
    support = np.zeros(2 * cells, dtype=np.int64)
    lengths, cases, failures = collections.Counter(), collections.Counter(), []
    for w, s, hist, c, f in map_fn(lambda chunk: _scan(n, chunk, strategy), chunks):
        weighted += w
        support += s
        lengths.update(hist)
        cases.update(c)
        failures.extend(f)

    generators = cells if family == Family.S0 else 2 * cells
    population = 2 * math.comb(cells, 3) if exhaustive else len(cycles)
    B = None
    if failures:
        logger.warning(
            "%d of %d cycles failed to decompose", len(failures), len(cycles)
        )
    else:
        B = fractions.Fraction(
            generators * int(weighted[:generators].max()), population
        )
    return ComparisonReport(
        n=n,
        family=family.value,
        B=B,
        max_support=int(support.max()),
        lengths=dict(lengths),
        cases=dict(cases),
        cycles=len(cycles),
        exhaustive=exhaustive,
        strategy=strategy,
        failures=failures,
    )


def comparison_check(n=2, family="S", strategy="auto", tol=1e-9):
    """Checks 1 - lambda_i <= B (1 - lambda'_i) on the whole deck.

    lambda are the eigenvalues of the three-cycle walk and lambda' those of
    the corner shuffle on the group it generates, both sorted decreasingly.

    Returns:
        (bool, dict): whether the inequality holds, and the data behind it.
    """
    report = comparison_constant(n, family, strategy=strategy)
    B = report.constant()
    corner = group_kernel(ShuffleFamily(family, n))
    if not corner.space.is_full():
        raise DomainError("%s does not generate the full group for n=%d" % (family, n))
    corner_eigs = np.sort(linalg.eigvalsh(corner.matrix.toarray()))[::-1]
    three_eigs = np.sort(linalg.eigvalsh(r_kernel(n * n).matrix.toarray()))[::-1]
    gaps = 1 - three_eigs
    allowed = float(B) * (1 - corner_eigs)
    holds = bool(np.all(gaps <= allowed + tol))
    return holds, {
        "n": n,
        "family": report.family,
        "B": str(B),
        "worst_margin": float(np.min(allowed - gaps)),
    }


def verify_decompositions(
    n,
    exhaustive=True,
    samples=1000,
    seed=0,
    strategy="helpers",
    max_n=EXHAUSTIVE_MAX_N,
    threadpool=None,
):
    """Decomposes every (or a sample of) three-cycle and checks every claim.

    Besides the comparison report for S0, this checks the Y products of all
    pivots with i, j >= 2 against the double transposition they are claimed
    to be. A word whose product is wrong never gets built, so a wrong claim
    shows up as a failure entry.
    """
    report = comparison_constant(
        n,
        "S0",
        exhaustive=exhaustive,
        samples=samples,
        seed=seed,
        strategy=strategy,
        max_n=max_n,
        threadpool=threadpool,
    )
    result = report.to_dict()
    claimed = 0
    for i in range(2, n + 1):
        for j in range(2, n + 1):
            try:
                build_Y(n, i, j)
                claimed += 1
            except VerificationFailure as e:
                result["failures"].append({"pivot": [i, j], "reason": str(e)})
    result["y_claims_verified"] = claimed
    result["B_S"] = None if report.B is None else str(2 * report.B)
    result["ok"] = not result["failures"] and result["support_bound_holds"]
    return result
