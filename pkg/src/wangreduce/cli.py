"""Command-line interface.

Exit codes: 0 success / solvable / verified, 1 unsolvable or verification
failed (including an exhausted search budget), 2 usage or I/O error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Callable, Sequence

from . import blocks, reduction, render, solver, tiling
from .geometry import GeometryError, component_count, is_connected, onion_shells, read_poly, write_poly
from .lattice import LatticeError, parse_box, read_lattice
from .wang import WangAssignment, WangError, find_periodic, load_wang, solve_torus, verify_wang

OK, FAIL, USAGE = 0, 1, 2


class CliError(Exception):
    """Usage or I/O problem; reported with exit code 2."""


def _parse_torus(text: str) -> tuple[int, int]:
    try:
        a, b = (int(v) for v in text.lower().split("x"))
    except ValueError as exc:
        raise CliError(f"torus must look like AxB, got {text!r}") from exc
    return a, b


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _line(ok: bool, label: str) -> bool:
    print(f"{'PASS' if ok else 'FAIL'}  {label}")
    return ok


# ---------------------------------------------------------------------------
# blocks


def cmd_blocks_verify(args) -> int:
    ok = True
    for a, b in blocks.PAIRS_3D:
        va, vb = len(blocks.block(a)), len(blocks.block(b))
        ok &= _line(blocks.pair_complements(a, b), f"{a}/{b} complement ({va} + {vb} cells)")
    for bid in blocks.IDS_3D:
        want = 2 if bid == "u" else 1
        got = component_count(blocks.block(bid))
        ok &= _line(got == want, f"{bid} has {got} component(s)")
    ok &= _line(blocks.u_and_d_are_translates(), "U and D are translates")
    sizes = onion_shells().sizes()
    ok &= _line(sizes == (488, 296, 152, 56, 8), f"onion shell sizes {sizes}")
    for a, (b, shift) in blocks.PARTNERS_4D.items():
        ok &= _line(blocks.frame_complements(a, b, shift), f"{a}/{b} complement at time shift {shift}")
    ok &= _line(blocks.stacked_fill("E4", 10), "E4 stacks every 10 frames")
    for bid in blocks.IDS_4D:
        ok &= _line(is_connected(blocks.block(bid)), f"{bid} connected")
    return OK if ok else FAIL


# ---------------------------------------------------------------------------
# compile / wang


def cmd_compile(args) -> int:
    W = load_wang(args.wang)
    ts = reduction.build_tileset(W, args.dim)
    os.makedirs(args.out, exist_ok=True)
    for name, tile in ts.tiles.items():
        write_poly(tile, os.path.join(args.out, f"{name}.poly"))
        with open(os.path.join(args.out, f"{name}.layout"), "w", encoding="utf-8") as fh:
            fh.write(ts.layouts[name].manifest())
        print(f"{name}: {len(tile)} cells")
    return OK


def _assignment(W, args) -> WangAssignment | None:
    if getattr(args, "assignment", None):
        with open(args.assignment, encoding="utf-8") as fh:
            return WangAssignment.from_dict(json.load(fh))
    if getattr(args, "torus", None):
        a, b = _parse_torus(args.torus)
        return solve_torus(W, a, b)
    return find_periodic(W, args.max_side)


def cmd_wang_solve(args) -> int:
    W = load_wang(args.wang)
    A = _assignment(W, args)
    if A is None:
        print("no periodic tiling found")
        return FAIL
    _emit(json.dumps(A.to_dict()) + "\n", args.out)
    return OK


# ---------------------------------------------------------------------------
# tiling


def cmd_tiling_build(args) -> int:
    W = load_wang(args.wang)
    A = _assignment(W, args)
    if A is None:
        print("no periodic tiling found")
        return FAIL
    if not verify_wang(W, A):
        print("assignment is not a valid Wang tiling")
        return FAIL
    cert = tiling.build_tiling(W, A, args.dim)
    tiling.write_certificate(cert, args.out)
    print(f"wrote {args.out}: {len(cert.placements)} placements, {cert.region.size} cells")
    return OK


def cmd_tiling_verify(args) -> int:
    cert = tiling.read_certificate(args.certificate)
    verdict = tiling.verify_partition(cert)
    print(verdict.describe())
    return OK if verdict.ok else FAIL


def cmd_tiling_check_lattice(args) -> int:
    cert = tiling.read_certificate(args.certificate)
    ok = _line(tiling.linker_lattice_check(cert), f"linker points form the lattice {tiling.linker_basis(cert)}")
    ok &= _line(tiling.encoder_column_check(cert), "encoders form vertical columns")
    if cert.dim == 4:
        ok &= _line(tiling.time_alignment_check(cert), "encoders share one time offset")
    return OK if ok else FAIL


# ---------------------------------------------------------------------------
# solve / render


def _load_tiles(directory: str) -> dict:
    names = sorted(f for f in os.listdir(directory) if f.endswith(".poly"))
    if not names:
        raise CliError(f"no .poly files in {directory}")
    return {n[:-5]: read_poly(os.path.join(directory, n)) for n in names}


def cmd_solve(args) -> int:
    tiles = _load_tiles(args.tiles)
    region = parse_box(args.region) if args.region else read_lattice(args.lattice)
    res = solver.solve(tiles, region, args.mode, args.budget, max_cells=args.max_cells)
    if res.status == "count":
        print(f"count {res.count} ({res.nodes} nodes)")
        return OK
    if res.status == "solution":
        for pl in res.certificate.placements:
            print(pl.line())
        return OK
    print(f"{res.status} ({res.nodes} nodes)")
    return FAIL


def cmd_render(args) -> int:
    fmt = "svg" if args.svg else "text"
    if args.level == 1:
        if args.poly:
            p = read_poly(args.poly)
        elif args.block:
            p = blocks.block(args.block)
        else:
            raise CliError("render 1 needs --block or --poly")
        text = render.render_level1(p, fmt)
    else:
        if not args.wang:
            raise CliError("render 2 needs --wang")
        W = load_wang(args.wang)
        ts = reduction.build_tileset(W, args.dim)
        if args.tile not in ts.layouts:
            raise CliError(f"unknown tile {args.tile!r}; choose from {', '.join(ts.layouts)}")
        text = render.render_level2(ts.layouts[args.tile], fmt, W)
    _emit(text, args.out)
    return OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wangreduce", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    bl = sub.add_parser("blocks", help="building-block catalog")
    bl_sub = bl.add_subparsers(dest="action", required=True)
    bl_sub.add_parser("verify", help="check the shipped catalog").set_defaults(func=cmd_blocks_verify)

    co = sub.add_parser("compile", help="compile a Wang set into tiles")
    co.add_argument("wang")
    co.add_argument("--dim", type=int, choices=(3, 4), default=3)
    co.add_argument("--out", default="tiles")
    co.set_defaults(func=cmd_compile)

    wa = sub.add_parser("wang", help="Wang tile utilities")
    wa_sub = wa.add_subparsers(dest="action", required=True)
    ws = wa_sub.add_parser("solve", help="find a periodic Wang tiling")
    ws.add_argument("wang")
    ws.add_argument("--torus", help="fixed torus size AxB")
    ws.add_argument("--max-side", type=int, default=4)
    ws.add_argument("--out")
    ws.set_defaults(func=cmd_wang_solve)

    ti = sub.add_parser("tiling", help="tiling certificates")
    ti_sub = ti.add_subparsers(dest="action", required=True)
    tb = ti_sub.add_parser("build", help="build a certificate from a periodic Wang tiling")
    tb.add_argument("wang")
    tb.add_argument("--dim", type=int, choices=(3, 4), default=3)
    tb.add_argument("--assignment", help="JSON assignment from 'wang solve'")
    tb.add_argument("--torus", help="solve on this torus size AxB")
    tb.add_argument("--max-side", type=int, default=4)
    tb.add_argument("--out", default="tiling.cert")
    tb.set_defaults(func=cmd_tiling_build)
    tv = ti_sub.add_parser("verify", help="check that a certificate is an exact partition")
    tv.add_argument("certificate")
    tv.set_defaults(func=cmd_tiling_verify)
    tl = ti_sub.add_parser("check-lattice", help="linker lattice and encoder column checks")
    tl.add_argument("certificate")
    tl.set_defaults(func=cmd_tiling_check_lattice)

    so = sub.add_parser("solve", help="exact-cover search on a box or quotient region")
    so.add_argument("--tiles", required=True, help="directory of .poly files")
    grp = so.add_mutually_exclusive_group(required=True)
    grp.add_argument("--region", help="box size, e.g. 3x3 or 10x10x10")
    grp.add_argument("--lattice", help="file with one period vector per line")
    so.add_argument("--mode", choices=(solver.FIRST, solver.COUNT), default=solver.FIRST)
    so.add_argument("--budget", type=int)
    so.add_argument("--max-cells", type=int, default=solver.DEFAULT_MAX_CELLS)
    so.set_defaults(func=cmd_solve)

    rd = sub.add_parser("render", help="layer diagrams")
    rd.add_argument("level", type=int, choices=(1, 2))
    rd.add_argument("--block", help="level 1: catalog block id")
    rd.add_argument("--poly", help="level 1: 3D .poly file")
    rd.add_argument("--wang", help="level 2: Wang set file")
    rd.add_argument("--tile", default="encoder", help="level 2: tile name")
    rd.add_argument("--dim", type=int, choices=(3, 4), default=3)
    rd.add_argument("--svg", action="store_true")
    rd.add_argument("--out")
    rd.set_defaults(func=cmd_render)
    return ap


_HANDLED = (CliError, WangError, GeometryError, LatticeError, tiling.TilingError,
            solver.SolverError, reduction.ReductionError, blocks.UnknownBlockError,
            OSError, json.JSONDecodeError, KeyError)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    func: Callable = args.func
    try:
        return func(args)
    except _HANDLED as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
