import dataclasses
import typing

import numpy as np
import pandas as pd

from cornershuffle.errors import DomainError

METHODS = ("exact", "mc", "bound")
COLUMNS = ["t", "value", "lo", "hi", "method"]


@dataclasses.dataclass
class DistanceCurve:
    """Distance to uniformity of one shuffle over a grid of times.

    Attributes:
        family: family tag ("S0", "S" or "R").
        n: array side.
        k: number of tracked cards, or "full" for the whole deck.
        times, values, lo, hi: aligned arrays; lo == hi == values for exact
            values and bounds.
        method: "exact", "mc" or "bound".
        metadata: seed, replicates, tolerance and anything else needed to
            reproduce the values.
    """

    family: str
    n: int
    k: typing.Union[int, str]
    times: np.ndarray
    values: np.ndarray
    lo: np.ndarray = None
    hi: np.ndarray = None
    method: str = "exact"
    metadata: dict = dataclasses.field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise DomainError("Unknown curve method '%s'" % self.method)
        self.times = np.asarray(self.times, dtype=np.float64)
        # Summation error can leave values a few ulps outside [0, 1].
        self.values = np.clip(np.asarray(self.values, dtype=np.float64), 0.0, 1.0)
        self.lo = self.values if self.lo is None else np.asarray(self.lo, dtype=float)
        self.hi = self.values if self.hi is None else np.asarray(self.hi, dtype=float)
        shapes = {a.shape for a in (self.times, self.values, self.lo, self.hi)}
        if len(shapes) != 1:
            raise DomainError("Curve arrays must be aligned")

    def __len__(self):
        return len(self.times)

    def is_monotone(self, tol=1e-9):
        return bool(np.all(np.diff(self.values) <= tol))

    def crossing_time(self, level=0.5):
        return crossing_time(self.times, self.values, level)

    def to_frame(self):
        return pd.DataFrame(
            {
                "t": self.times,
                "value": self.values,
                "lo": self.lo,
                "hi": self.hi,
                "method": self.method,
            },
            columns=COLUMNS,
        )

    def describe(self):
        """JSON-ready header: everything but the point arrays."""
        return {
            "family": self.family,
            "n": self.n,
            "k": self.k,
            "method": self.method,
            "metadata": self.metadata,
        }


def crossing_time(times, values, level=0.5):
    """First time the curve drops to ``level``, interpolated linearly.

    Returns inf if the curve stays above the level on the whole grid and
    the first grid time if it starts at or below it.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    below = np.flatnonzero(values <= level)
    if below.size == 0:
        return float("inf")
    i = int(below[0])
    if i == 0:
        return float(times[0])
    t0, t1 = times[i - 1], times[i]
    v0, v1 = values[i - 1], values[i]
    return float(t0 + (v0 - level) * (t1 - t0) / (v0 - v1))


def fit_power_law(xs, ys):
    """Least-squares (exponent, prefactor) of ys ~ prefactor * xs**exponent."""
    xs, ys = np.asarray(xs, dtype=float), np.asarray(ys, dtype=float)
    if xs.size < 2 or np.any(xs <= 0) or np.any(ys <= 0):
        raise DomainError("Power-law fit needs two or more positive points")
    exponent, intercept = np.polyfit(np.log(xs), np.log(ys), 1)
    return float(exponent), float(np.exp(intercept))


def time_grid(t_min, t_max, points, log=False):
    if points < 1 or t_min < 0 or t_max < t_min:
        raise DomainError("Invalid time grid %s:%s:%s" % (t_min, t_max, points))
    if log:
        if t_min <= 0:
            raise DomainError("Logarithmic time grids need t_min > 0")
        return np.geomspace(t_min, t_max, points)
    return np.linspace(t_min, t_max, points)


def decade_grid(t_min, t_max, per_decade=40):
    """Geometric grid with ``per_decade`` points per factor of ten."""
    points = max(2, int(np.ceil(per_decade * np.log10(t_max / t_min))) + 1)
    return np.geomspace(t_min, t_max, points)
