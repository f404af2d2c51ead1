"""CSV and JSON result serialization.

CSV values carry 17 significant digits so reruns are byte-identical and
round-trip exactly. JSON reports share a versioned envelope that embeds
the fully resolved configuration and the library version; nothing
time- or host-dependent is written.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

SCHEMA_VERSION = 1


def _fmt_cell(v) -> str:
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return f"{v:.17g}"
    return str(v)


def write_csv(path, header, rows) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(_fmt_cell(v) for v in row) + "\n")


def _jsonify(obj):
    import numpy as np

    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    if isinstance(obj, float) and (math.isnan(obj) or math.isinf(obj)):
        return repr(obj)
    return obj


def write_report(path, command: str, config: dict, results: dict) -> None:
    from . import __version__

    payload = {
        "schema": SCHEMA_VERSION,
        "library": "chemopattern",
        "version": __version__,
        "command": command,
        "config": _jsonify(config),
        "results": _jsonify(results),
    }
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")
