"""Command-line interface: ``k3walls <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 input validation error,
3 golden-file mismatch.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction

from . import cones, flops, golden, hilbert
from .lattice import Lattice, LatticeError, pairing
from .quadratic import BinaryForm, pell_fundamental, represent
from .serialize import (dumps, encode, load_lattice, parse_rational_vector, parse_vector)
from .walls import (NotHyperbolic, WallLattice, classify, effective_cone, make_wall_lattice,
                    minimal_class, orbit_list)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _fmt_q(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _vec(u) -> str:
    return "(" + ", ".join(_fmt_q(x) for x in u) + ")"


def _mukai(a) -> str:
    """``(r, cH, s)`` rendering for rank-three Mukai vectors."""
    r, c, s = a
    ch = "0" if c == 0 else ("H" if c == 1 else "-H" if c == -1 else f"{c}H")
    return f"({r}, {ch}, {s})"


def _table(rows: list[list[str]], header: list[str]) -> str:
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
    line = lambda r: "  ".join(str(x).ljust(w) for x, w in zip(r, widths)).rstrip()
    return "\n".join([line(header), line(["-" * w for w in widths])] + [line(r) for r in rows]) + "\n"


def _kv(data: dict) -> str:
    out = []
    for k, v in data.items():
        out.append(f"{k}: {json.dumps(encode(v)) if not isinstance(v, str) else v}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# argument helpers


def _lattice(args) -> Lattice:
    if not args.lattice:
        raise LatticeError("--lattice (file path or inline JSON) is required")
    return load_lattice(args.lattice)


def _v(args, L: Lattice, name="v"):
    raw = getattr(args, name)
    if raw is None:
        raise LatticeError(f"--{name} is required")
    u = parse_vector(raw)
    return L.check(u)


def _rays(text: str):
    return [parse_rational_vector(r) for r in text.split(";") if r.strip()]


def _wall_lattice(args):
    """From ``--gram2 a,b,c --vh x,y`` or ``--lattice --v --a``."""
    if args.gram2:
        a, b, c = parse_vector(args.gram2)
        if args.vh is None:
            raise LatticeError("--vh (v in wall-lattice coordinates) is required with --gram2")
        return WallLattice.from_gram([[a, b], [b, c]], parse_vector(args.vh))
    L = _lattice(args)
    v = _v(args, L)
    a = _v(args, L, "a")
    H = make_wall_lattice(L, v, a)
    if isinstance(H, NotHyperbolic):
        raise LatticeError(f"span(v, a) has Gram {H.gram2.gram}, which is not hyperbolic")
    return H


def _add_wall_args(p):
    p.add_argument("--lattice")
    p.add_argument("--v")
    p.add_argument("--a")
    p.add_argument("--gram2", help="wall lattice Gram entries a,b,c")
    p.add_argument("--vh", help="v in wall-lattice coordinates")


# ---------------------------------------------------------------------------
# commands


def cmd_pair(args):
    L = _lattice(args)
    u, w = _v(args, L, "u"), _v(args, L, "w")
    return {"pairing": pairing(L, u, w)}, None


def cmd_classify(args):
    H = _wall_lattice(args)
    cl = classify(H)
    data = {"kind": cl.kind, "totally_semistable": cl.totally_semistable, "label": cl.label,
            "witnesses": cl.witnesses, "gram2": H.gram2, "v_coords": H.v_coords}
    if not args.gram2:
        data["basis"] = H.sublattice.basis
    return data, None


def cmd_minimal(args):
    H = _wall_lattice(args)
    C = effective_cone(H, args.orientation)
    v0, word = minimal_class(H, H.v_coords, C)
    return {"v0": v0, "word": word, "effective_rays": [{"vector": r.vector, "kind": r.kind}
                                                       for r in C.rays]}, None


def cmd_orbit(args):
    H = _wall_lattice(args)
    C = effective_cone(H, args.orientation)
    v0, _ = minimal_class(H, H.v_coords, C)
    return {"v0": v0, "orbit": orbit_list(H, v0, C, args.count)}, None


def _walls_render(cone):
    rows = [[_vec(w.normal), _vec(w.witness), str(w.witness_square), str(w.witness_pairing),
             w.kind, w.totally_semistable] for w in cone.walls]
    return _table(rows, ["normal", "witness", "a^2", "(v,a)", "kind", "totally semistable"])


def _cone_data(cone):
    return {"kind": cone.kind, "vperp_basis": cone.ambient.basis,
            "walls": [encode(w) for w in cone.walls],
            "generators": cone.generators, "provenance": cone.provenance,
            "complete": cone.complete}


def _region_args(args, L):
    v = _v(args, L)
    if args.ample is None:
        raise LatticeError("--ample is required")
    ample = parse_rational_vector(args.ample)
    return v, ample


def cmd_nef(args, fn=cones.nef_walls):
    L = _lattice(args)
    v, ample = _region_args(args, L)
    region = cones.SearchRegion(_rays(args.region) if args.region else [ample])
    cone = fn(L, v, region, ample)
    return _cone_data(cone), _walls_render(cone)


def cmd_movable(args):
    return cmd_nef(args, cones.movable_walls)


def cmd_mori(args):
    L = _lattice(args)
    v, ample = _region_args(args, L)
    region = cones.SearchRegion(_rays(args.region) if args.region else [ample])
    cone = cones.mori_generators(L, v, region, ample)
    rows = [[_vec(g), _vec(a)] for g, a in zip(cone.generators, cone.provenance)]
    return _cone_data(cone), _table(rows, ["curve class a0", "witness a"])


def cmd_effective(args):
    L = _lattice(args)
    v, ample = _region_args(args, L)
    cone = cones.effective_generators(L, v, ample, args.norm_bound)
    rows = [[_vec(g), _vec(a)] for g, a in zip(cone.generators, cone.provenance)]
    return _cone_data(cone), _table(rows, ["divisor", "source class"])


def cmd_fibration(args):
    L = _lattice(args)
    res = cones.fibration_classes(L, _v(args, L), args.bound)
    return {"classes": res.classes, "complete": res.complete}, None


def cmd_weyl(args):
    L = _lattice(args)
    v = _v(args, L)
    D = parse_rational_vector(args.D)
    if args.exceptional:
        exc = [parse_vector(e) for e in args.exceptional.split(";") if e.strip()]
    else:
        if args.ample is None:
            raise LatticeError("give --exceptional classes or an --ample class to derive them")
        exc = cones.effective_generators(L, v, parse_rational_vector(args.ample)).generators
    D1, word = cones.weyl_map_to_movable(L, v, D, exc)
    return {"D": D1, "word": word}, None


def cmd_hilb(args):
    if args.what == "movable":
        m = hilbert.movable_hilb(args.d, args.n)
        text = (f"case {m.case}: Mov = <H, H - {_fmt_q(m.gamma)} B>, witness {_mukai(m.witness)}"
                + (f", Pell solution {m.pell}" if m.pell else "") + "\n")
        return m, text
    if args.what == "nef2":
        if args.n not in (None, 2):
            raise LatticeError("nef2 is for n = 2")
        b = hilbert.nef_hilb_n2(args.d)
        if b == hilbert.EQUALS_MOVABLE:
            return {"nef": b}, "Nef = Mov\n"
        return b, (f"Nef = <H, H - {_fmt_q(b.gamma)} B>, spherical {_mukai(b.spherical)}, "
                   f"Pell solution {b.pell}\n")
    rows = golden.table_rows(args.d, args.n)
    text = _table([[_fmt_q(r["gamma"]), _mukai(r["a"]), str(r["a_square"]), str(r["pairing"]),
                    r["label"]] for r in rows], ["Gamma", "a", "a^2", "(v,a)", "type"])
    return {"d": args.d, "n": args.n, "rows": rows}, text


def cmd_pell(args):
    s = pell_fundamental(args.D)
    return {"x": str(s.x), "y": str(s.y)}, None


def cmd_represent(args):
    a, b, c = parse_vector(args.gram)
    Q = BinaryForm(a, b, c)
    res = represent(Q, args.n, args.mode, args.bound)
    if args.mode == "orbit_representatives":
        return {"reps": [[str(x), str(y)] for x, y in res.reps],
                "generator": [[str(x) for x in row] for row in res.generator]}, None
    return [[str(x), str(y)] for x, y in res], None


def cmd_flops(args):
    L = _lattice(args)
    if L.rank != 2:
        raise LatticeError("flops expects the rank-two wall lattice")
    v = _v(args, L)
    H = WallLattice.from_gram(L.gram, v)
    parts = flops.positive_partitions(H, v, strict=args.strict)
    summary = flops.strata_components(H, v, strict=args.strict)
    data = {"partitions": [P.parts for P in parts],
            "two_part": [{"parts": x["partition"].parts, "codim": x["codim"]}
                         for x in flops.two_part_strata(H, v, strict=args.strict)],
            "irreducible": summary.irreducible, "connected": summary.connected,
            "components": [[P.parts for P in c] for c in summary.components]}
    return data, None


def cmd_golden(args):
    names = golden.NAMES if args.name == "all" else [args.name]
    if any(n not in golden.NAMES for n in names):
        raise UsageError(f"unknown golden file {args.name!r}; choose from {', '.join(golden.NAMES)}")
    directory = None if args.dir is None else __import__("pathlib").Path(args.dir)
    if args.action == "write":
        return {"written": [str(golden.write(n, directory)) for n in names]}, None
    report = {n: golden.check(n, directory) for n in names}
    bad = {n: d for n, d in report.items() if d}
    if bad:
        raise _GoldenMismatch(bad)
    return {"ok": list(names)}, None


class _GoldenMismatch(Exception):
    def __init__(self, diff):
        self.diff = diff


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="k3walls", description="Walls, cones and Pell equations for moduli of sheaves on K3 surfaces.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, fn, help):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(fn=fn)
        sp.add_argument("--format", choices=["json", "table"], default="json")
        return sp

    sp = add("pair", cmd_pair, "Mukai pairing of two vectors")
    sp.add_argument("--lattice"); sp.add_argument("--u"); sp.add_argument("--w")
    sp = add("classify", cmd_classify, "classify the wall of span(v, a)")
    _add_wall_args(sp)
    for name, fn in (("minimal", cmd_minimal), ("orbit", cmd_orbit)):
        sp = add(name, fn, f"{name} class of v under the spherical reflection group")
        _add_wall_args(sp)
        sp.add_argument("--orientation", choices=["plus", "minus"], default="plus")
        if name == "orbit":
            sp.add_argument("--count", type=int, default=3)
    for name, fn in (("nef", cmd_nef), ("movable", cmd_movable), ("mori", cmd_mori)):
        sp = add(name, fn, f"{name} cone walls inside a search region")
        sp.add_argument("--lattice"); sp.add_argument("--v")
        sp.add_argument("--region", help="rays separated by ';', entries may be fractions")
        sp.add_argument("--ample")
    sp = add("effective", cmd_effective, "exceptional generators of the effective cone")
    sp.add_argument("--lattice"); sp.add_argument("--v"); sp.add_argument("--ample")
    sp.add_argument("--norm-bound", type=int, default=200)
    sp = add("fibration", cmd_fibration, "isotropic classes of v-perp")
    sp.add_argument("--lattice"); sp.add_argument("--v"); sp.add_argument("--bound", type=int, default=20)
    sp = add("weyl", cmd_weyl, "reflect a divisor into the movable chamber")
    sp.add_argument("--lattice"); sp.add_argument("--v"); sp.add_argument("--D", required=True)
    sp.add_argument("--exceptional"); sp.add_argument("--ample")
    sp = add("hilb", cmd_hilb, "closed forms for Hilbert schemes of Picard rank one")
    sp.add_argument("what", choices=["movable", "nef2", "table"])
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--n", type=int, default=None)
    sp = add("pell", cmd_pell, "fundamental solution of x^2 - D y^2 = 1")
    sp.add_argument("D", type=int)
    sp = add("represent", cmd_represent, "solve Q(x, y) = n")
    sp.add_argument("--gram", required=True, help="a,b,c for Q = a x^2 + 2 b x y + c y^2")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--mode", choices=["minimal_positive", "all_in_box", "orbit_representatives"],
                    default="minimal_positive")
    sp.add_argument("--bound", type=int)
    sp = add("flops", cmd_flops, "strata of the flopping locus")
    sp.add_argument("--lattice"); sp.add_argument("--v"); sp.add_argument("--strict", action="store_true")
    sp = add("golden", cmd_golden, "check or regenerate golden files")
    sp.add_argument("action", choices=["check", "write"])
    sp.add_argument("name", help=f"one of {', '.join(golden.NAMES)} or 'all'")
    sp.add_argument("--dir")
    return p


def main(argv=None) -> int:
    if os.environ.get("K3WALLS_VERBOSE") == "1":
        logging.basicConfig(level=logging.DEBUG, format="%(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_help())
        if args.command == "hilb" and args.what != "nef2" and args.n is None:
            raise UsageError("hilb movable/table need --n")
        data, text = args.fn(args)
    except UsageError as exc:
        sys.stderr.write(str(exc).rstrip() + "\n")
        return 1
    except _GoldenMismatch as exc:
        sys.stdout.write(dumps({"mismatch": exc.diff}))
        return 3
    except (LatticeError, ValueError, ZeroDivisionError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    if args.format == "table":
        sys.stdout.write(text if text is not None else _kv(encode(data) if not isinstance(data, dict) else data))
    else:
        sys.stdout.write(dumps(data))
    return 0


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
