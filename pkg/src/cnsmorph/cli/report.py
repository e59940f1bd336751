"""JSON report envelope and value encoding.

Complex numbers travel as ``[re, im]`` pairs.  Floats are written with
Python's shortest round-trip representation, so reading a report back gives
bit-identical values.
"""

import json
from dataclasses import is_dataclass
from enum import Enum
from importlib import resources

import numpy as np

SCHEMA_VERSION = "1.0"
VOLATILE_KEYS = frozenset({"timing", "runtime"})


def encode(obj):
    """Convert numpy values, enums and complex numbers to JSON-ready data."""
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if np.isfinite(v) else None
    if isinstance(obj, (complex, np.complexfloating)):
        return [encode(obj.real), encode(obj.imag)]
    if isinstance(obj, np.ndarray):
        return [encode(v) for v in obj.tolist()] if obj.dtype.kind != "c" else [encode(v) for v in obj]
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if is_dataclass(obj):
        raise TypeError(f"encode {type(obj).__name__} explicitly")
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot encode {type(obj).__name__}")


def decode_complex(value):
    """Inverse of :func:`encode` for complex data: nested ``[re, im]`` pairs or plain reals."""
    arr = np.asarray(value, dtype=float)
    if arr.ndim >= 1 and arr.shape[-1] == 2 and _is_pairs(value):
        return arr[..., 0] + 1j * arr[..., 1]
    return arr.astype(complex)


def _is_pairs(value):
    v = value
    while isinstance(v, list) and v and isinstance(v[0], list):
        v = v[0]
    # innermost lists of length two are pairs; a flat list of numbers is real data
    return isinstance(value, list) and bool(value) and isinstance(value[0], list) and len(v) == 2


def make_report(command, argv, config, result, exit_code, seconds):
    return {
        "schema_version": SCHEMA_VERSION,
        "command": {"name": command, "argv": list(argv), "config": encode(config)},
        "exit_code": exit_code,
        "result": encode(result),
        "timing": {"seconds": seconds},
    }


def dumps(report):
    return json.dumps(report, indent=2, allow_nan=False)


def strip_volatile(obj):
    """Drop timing fields so two runs of the same command compare equal."""
    if isinstance(obj, dict):
        return {k: strip_volatile(v) for k, v in obj.items() if k not in VOLATILE_KEYS}
    if isinstance(obj, list):
        return [strip_volatile(v) for v in obj]
    return obj


def schema():
    """The published report schema."""
    return json.loads(resources.files(__package__).joinpath("report_schema.json").read_text())
