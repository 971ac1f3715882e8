"""JSON encoding of library results and decoding of lattice configurations.

Integers beyond the 53-bit safe range become decimal strings, rationals
become ``{"num": "...", "den": "..."}`` in lowest terms.
"""

from __future__ import annotations

import dataclasses
import enum
import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .lattice import Lattice, LatticeError, Sublattice, mukai_from_ns
from .quadratic import BinaryForm, Orbits, PellSolution

SAFE = 2 ** 53 - 1


def big(x: int):
    return x if -SAFE <= x <= SAFE else str(x)


def rational(q) -> dict:
    q = Fraction(q)
    return {"num": str(q.numerator), "den": str(q.denominator)}


def parse_rational(obj) -> Fraction:
    if isinstance(obj, dict):
        return Fraction(int(obj["num"]), int(obj["den"]))
    if isinstance(obj, str):
        return Fraction(obj)
    return Fraction(obj)


def encode(obj: Any):
    """Convert a library value into plain JSON data."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return big(obj)
    if isinstance(obj, Fraction):
        return rational(obj) if obj.denominator != 1 else {"num": str(obj.numerator), "den": "1"}
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, BinaryForm):
        return [[big(x) for x in row] for row in obj.gram]
    if isinstance(obj, PellSolution):
        return {"x": str(obj.x), "y": str(obj.y)}
    if isinstance(obj, Orbits):
        return {"reps": encode(obj.reps), "generator": encode(obj.generator)}
    if isinstance(obj, Lattice):
        return {"kind": "gram", "rank": obj.rank, "gram": encode(obj.gram)}
    if isinstance(obj, Sublattice):
        return {"basis": encode(obj.basis), "gram": encode(obj.restricted_gram)}
    if dataclasses.is_dataclass(obj):
        return {f.name: encode(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(encode(k)) if not isinstance(k, str) else k: encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(x) for x in obj]
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(encode(obj), indent=2, ensure_ascii=False) + "\n"


def lattice_from_json(data: dict) -> Lattice:
    try:
        return _lattice_from_json(data)
    except KeyError as exc:
        raise LatticeError(f"lattice JSON is missing the field {exc}") from None


def _lattice_from_json(data: dict) -> Lattice:
    kind = data.get("kind")
    if kind == "gram":
        gram = [[int(x) for x in row] for row in data["gram"]]
        if "rank" in data and int(data["rank"]) != len(gram):
            raise LatticeError("declared rank does not match the Gram matrix")
        return Lattice(gram, tuple(data["labels"]) if data.get("labels") else None)
    if kind == "mukai_from_ns":
        return mukai_from_ns([[int(x) for x in row] for row in data["ns_gram"]])
    raise LatticeError(f"unknown lattice kind {kind!r}")


def load_lattice(source: str) -> Lattice:
    """From a file path or an inline JSON object."""
    text = source if source.lstrip().startswith("{") else Path(source).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LatticeError(f"lattice JSON is malformed: {exc}") from None
    return lattice_from_json(data)


def parse_vector(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError:
        raise LatticeError(f"cannot parse integer vector {text!r}") from None


def parse_rational_vector(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError:
        raise LatticeError(f"cannot parse rational vector {text!r}") from None
