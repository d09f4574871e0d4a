"""Artifact writers shared by the command line and the self test.

Curves are CSV files whose leading ``# `` lines hold JSON metadata, so
``pandas.read_csv(path, comment="#")`` reads the points back. Reports are
JSON. Neither carries timestamps or timings, so identical runs produce
identical bytes.
"""
import contextlib
import dataclasses
import fractions
import io
import json
import sys

import numpy as np

from cornershuffle.version import __version__

TOOL = "cornershuffle"
FLOAT_FORMAT = "%.12g"
# Bump when columns or header keys change.
SCHEMA_VERSION = 2


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, fractions.Fraction):
        return str(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError("%s is not JSON serializable" % type(obj).__name__)


def dumps(obj, indent=None):
    return json.dumps(obj, sort_keys=True, indent=indent, default=_jsonable)


def header(config, seed=None):
    if seed is None and config is not None:
        seed = config.seed
    return {
        "tool": TOOL,
        "schema": SCHEMA_VERSION,
        "version": __version__,
        "seed": seed,
        "config": dataclasses.asdict(config) if config is not None else None,
    }


def write_frame(frame, stream, meta, fmt="csv", provenance=None):
    """Writes a table; ``provenance`` tags every row and the header."""
    if provenance is not None:
        frame = frame.assign(method=provenance)
        meta = dict(meta, provenance=provenance)
    if fmt == "json":
        payload = dict(meta, rows=frame.to_dict(orient="list"))
        stream.write(dumps(payload, indent=2) + "\n")
        return
    for key in sorted(meta):
        stream.write("# %s\n" % dumps({key: meta[key]}))
    frame.to_csv(stream, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def write_curve(curve, stream, config=None, fmt="csv", extra=None):
    meta = dict(header(config, curve.metadata.get("seed")), curve=curve.describe())
    if extra:
        meta.update(extra)
    write_frame(curve.to_frame(), stream, meta, fmt)


def write_report(report, stream, config=None, provenance="exact", seed=None):
    """``provenance`` is a tag, or a dict of tags for the parts of ``report``."""
    payload = dict(header(config, seed), provenance=provenance, result=report)
    stream.write(dumps(payload, indent=2) + "\n")


def curve_bytes(curve, config=None):
    stream = io.StringIO()
    write_curve(curve, stream, config)
    return stream.getvalue().encode()


@contextlib.contextmanager
def open_output(path):
    if path is None or path == "-":
        yield sys.stdout
        return
    with open(path, "w", newline="") as f:
        yield f
