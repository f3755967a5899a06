"""The JSON report envelope shared by every command, its schema, and canonical serialization."""

from __future__ import annotations

import json
from fractions import Fraction

from . import __version__

__all__ = ["REPORT_SCHEMA", "dumps", "envelope", "jsonable"]

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "lclab report",
    "type": "object",
    "required": ["tool", "version", "command", "job", "status", "result"],
    "additionalProperties": False,
    "properties": {
        "tool": {"const": "lclab"},
        "version": {"type": "string"},
        "command": {
            "enum": [
                "frobenius",
                "torsion",
                "lcdim",
                "ainv",
                "hochster",
                "ffmod",
                "identity2x3",
                "cert",
                "predict",
                "localize",
            ]
        },
        "job": {
            "type": "object",
            "required": ["command", "params"],
            "properties": {
                "command": {"type": "string"},
                "params": {"type": "object"},
                "ring": {
                    "type": "object",
                    "properties": {"char": {"type": "integer"}, "nvars": {"type": "integer"}},
                },
                "ideal": {
                    "type": "object",
                    "required": ["source", "generators"],
                    "properties": {
                        "source": {"enum": ["family", "file", "complex"]},
                        "text": {"type": "string"},
                        "generators": {"type": "array", "items": {"type": "string"}},
                    },
                },
                "field": {"type": "string"},
                "output": {"type": ["string", "null"]},
            },
        },
        "status": {"enum": ["ok", "withheld"]},
        "reason": {"type": "string"},
        "result": {"type": ["object", "null"]},
    },
}


def jsonable(x):
    """Recursively convert to JSON-ready values; Fractions become 'p/q' strings, tuples lists."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    raise TypeError(f"cannot serialize {type(x).__name__}")


def envelope(command: str, job: dict, result, status: str = "ok", reason: str | None = None) -> dict:
    rep = {
        "tool": "lclab",
        "version": __version__,
        "command": command,
        "job": jsonable(job),
        "status": status,
        "result": jsonable(result),
    }
    if reason is not None:
        rep["reason"] = reason
    return rep


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
