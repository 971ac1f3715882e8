"""Reference result files regenerated from the library and compared byte for byte."""

from __future__ import annotations

import json
import os
from pathlib import Path

from .flops import strata_components, two_part_strata
from .hilbert import EQUALS_MOVABLE, movable_hilb, nef_hilb_n2, walls_table
from .quadratic import BinaryForm, isotropic_primitive, spherical_enumerate
from .serialize import dumps, encode
from .walls import WallLattice, classify, effective_cone

NAMES = ("ex13_2", "ex13_4", "prop13_1_grid", "rank2_examples", "ex14_3", "ex14_4")


def default_dir() -> Path:
    env = os.environ.get("K3WALLS_GOLDEN_DIR")
    if env:
        return Path(env)
    repo = Path(__file__).resolve().parents[2] / "tests" / "golden"
    return repo if repo.is_dir() else Path.cwd() / "tests" / "golden"


def table_rows(d: int, n: int) -> list[dict]:
    return [{"gamma": r.gamma, "a": r.a, "a_square": r.a_square, "pairing": r.pairing,
             "kind": r.classification.kind, "totally_semistable": r.classification.totally_semistable,
             "label": r.label} for r in walls_table(d, n)]


def _table_d1_n7():
    return {"d": 1, "n": 7, "movable": movable_hilb(1, 7), "rows": table_rows(1, 7)}


def _nef_d31_n2():
    return {"d": 31, "n": 2, "nef": nef_hilb_n2(31), "movable": movable_hilb(31, 2),
            "rows": table_rows(31, 2)}


def _movable_grid():
    movable = [{"d": d, "n": n, "boundary": movable_hilb(d, n)}
               for d in range(1, 21) for n in range(2, 11)]
    nef = []
    for d in range(1, 41):
        b = nef_hilb_n2(d)
        nef.append({"d": d, "nef": b if b != EQUALS_MOVABLE else EQUALS_MOVABLE})
    return {"movable": movable, "nef_n2": nef}


_RANK2 = [
    ("hilbert_chow", [[12, -1], [-1, 0]], (1, 0)),
    ("flop_d1_n7", [[12, 4], [4, -2]], (1, 0)),
    ("two_sphericals", [[-2, 3], [3, -2]], (2, 1)),
    ("fake_wall_d1_n7", [[12, 7], [7, -2]], (1, 0)),
    ("lgu_d1_n7", [[12, 2], [2, 0]], (1, 0)),
    ("no_special_classes", [[-4, 60], [60, 4]], (3, 2)),
]


def _rank2_examples():
    out = []
    for name, gram, v in _RANK2:
        H = WallLattice.from_gram(gram, v)
        Q = BinaryForm.from_gram(gram)
        cl = classify(H)
        entry = {"name": name, "gram2": gram, "v": v, "kind": cl.kind,
                 "totally_semistable": cl.totally_semistable, "label": cl.label,
                 "witnesses": cl.witnesses, "isotropic": isotropic_primitive(Q),
                 "spherical_box5": spherical_enumerate(Q, bound=5)}
        for o in ("plus", "minus"):
            C = effective_cone(H, o)
            entry[f"effective_{o}"] = [{"vector": r.vector, "kind": r.kind} for r in C.rays]
        out.append(entry)
    return out


def _strata(gram, v):
    H = WallLattice.from_gram(gram, v)
    s = strata_components(H)
    return {"gram2": gram, "v": v,
            "two_part": [{"parts": x["partition"].parts, "codim": x["codim"]}
                         for x in two_part_strata(H, v)],
            "irreducible": s.irreducible, "connected": s.connected,
            "components": [[P.parts for P in comp] for comp in s.components],
            "common_refinements": [P.parts if P else None for P in s.common_refinements]}


def _connected_strata():
    return [dict(m=m, M=M, **_strata([[2, M], [M, 2]], (1, m - 1))) for m, M in ((3, 10), (4, 10))]


def _isolated_strata():
    return [dict(m=m, M=10 * m, **_strata([[-4, 20 * m], [20 * m, 4]], (m, 2))) for m in (3, 5, 7)]


BUILDERS = {"ex13_2": _nef_d31_n2, "ex13_4": _table_d1_n7, "prop13_1_grid": _movable_grid,
            "rank2_examples": _rank2_examples, "ex14_3": _connected_strata, "ex14_4": _isolated_strata}


def render(name: str) -> str:
    if name not in BUILDERS:
        raise KeyError(f"unknown golden file {name!r}; choose from {', '.join(NAMES)}")
    return dumps(BUILDERS[name]())


def write(name: str, directory: Path | None = None) -> Path:
    directory = directory or default_dir()
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{name}.json"
    path.write_text(render(name))
    return path


def _diff(expected, actual, path="$") -> list[dict]:
    if type(expected) is not type(actual):
        return [{"path": path, "expected": expected, "actual": actual}]
    if isinstance(expected, dict):
        out = []
        for k in sorted(set(expected) | set(actual)):
            out += _diff(expected.get(k), actual.get(k), f"{path}.{k}")
        return out
    if isinstance(expected, list):
        out = []
        for i in range(max(len(expected), len(actual))):
            e = expected[i] if i < len(expected) else None
            a = actual[i] if i < len(actual) else None
            out += _diff(e, a, f"{path}[{i}]")
        return out
    return [] if expected == actual else [{"path": path, "expected": expected, "actual": actual}]


def check(name: str, directory: Path | None = None) -> list[dict]:
    """Empty list when the stored file matches byte for byte, else a structured diff."""
    directory = directory or default_dir()
    path = directory / f"{name}.json"
    fresh = render(name)
    if not path.exists():
        return [{"path": "$", "expected": None, "actual": f"missing file {path}"}]
    stored = path.read_text()
    if stored == fresh:
        return []
    try:
        diff = _diff(json.loads(stored), json.loads(fresh))
    except json.JSONDecodeError as exc:
        return [{"path": "$", "expected": f"unparseable: {exc}", "actual": "valid JSON"}]
    return diff or [{"path": "$", "expected": "stored bytes", "actual": "formatting differs"}]


__all__ = ["NAMES", "render", "write", "check", "default_dir", "table_rows", "encode"]
