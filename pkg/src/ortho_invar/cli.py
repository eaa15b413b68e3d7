"""ortho-invar command line."""
from __future__ import annotations

import argparse
import json
import logging
import sys

from . import invariants as inv
from .matgroup import generators
from .ring import parse, render, s_frame, to_json
from .solver import express, invariant_dimension
from .verifier import REGISTRY, run_suite, select, write_json


def _named(name, m, q):
    """Look up a generator name: xi<i>, d<i>, u, N(y<i>), N(x<i>), y<i>, x<i>, c22."""
    s = name.strip()
    if s.startswith("xi"):
        return inv.xi(int(s[2:]), m, q)
    if s == "u":
        return inv.catalog(q, m).u()
    if s.startswith("d"):
        return inv.catalog(q, m).d(int(s[1:]))
    if s.startswith("N(") and s.endswith(")"):
        return inv.catalog(q, m).norm(s[2:-1])
    if s == "c22":
        return inv.c22(q, m)
    if s[0] in "xy":
        return inv.var(m, q, s)
    raise ValueError(f"unknown generator {name!r}")


def _emit(obj, fmt):
    if fmt == "json":
        print(json.dumps(obj, indent=1))
    else:
        for k, v in obj.items():
            print(f"{k}: {v}")


def cmd_verify(a):
    names = select(a.suite)
    if not names:
        raise ValueError(f"no checks match {a.suite!r}")
    if a.q is not None and a.q % 2 == 0:
        raise ValueError("q must be odd")
    reps = run_suite(a.suite, q=a.q, m=a.m, D=a.max_degree, heavy=a.heavy, workers=a.workers)
    for r in reps:
        extra = r["reason"] if r["status"] == "skip" else (r["witness"] if r["status"] == "fail" else "")
        print(f"{r['status'].upper():4s}  {r['name']:24s} {r['seconds']:8.2f}s  {extra if extra else ''}")
    if a.json:
        write_json(reps, a.json)
    return 1 if any(r["status"] == "fail" for r in reps) else 0


def cmd_construct(a):
    q, m = a.q, a.m
    what = a.object
    if what == "catalog":
        out = {"xi": {i: inv.deg_xi(i, q) for i in range(2 * m)},
               "d": {i: inv.deg_d(i, m, q) for i in range(1, m + 1)},
               "u": inv.deg_u(m, q),
               "N(y)": {i: inv.deg_norm_y(i, m, q) for i in range(1, m + 1)},
               "N(x)": {i: inv.deg_norm_x(i, q) for i in range(1, m + 1)}}
        print(json.dumps({"q": q, "m": m, "degrees": out}, indent=1))
        return 0
    i = a.i
    if what == "xi":
        f = inv.xi(i if i is not None else 0, m, q)
    elif what == "norm":
        f = inv.catalog(q, m).norm(a.var or f"y{i or 1}")
    elif what == "u":
        f = inv.catalog(q, m).u()
    elif what == "d":
        f = inv.catalog(q, m).d(i if i is not None else 1)
    elif what == "minor":
        f = inv.minor_M(i if i is not None else 0, m, q)
    elif what == "c22":
        f = inv.c22_T(q) if a.abstract else inv.c22(q, m)
    else:
        raise ValueError(what)
    if a.format == "json":
        print(json.dumps(to_json(f, q=q, m=m)))
    else:
        print(render(f))
    return 0


def cmd_hilbert(a):
    gens = generators(a.group, a.m, a.q)
    dims = [invariant_dimension(gens, d, m=a.m, q=a.q) for d in range(a.max_degree + 1)]
    _emit({"group": a.group, "q": a.q, "m": a.m, "dims": dims}, a.format)
    return 0


def cmd_express(a):
    with open(a.target) as fh:
        text = fh.read().strip()
    fr = s_frame(a.m)
    f = parse(text, fr, a.q)
    names = [s for s in a.gens.split(",") if s.strip()]
    gens = [_named(s, a.m, a.q) for s in names]
    ex = express(f, gens, names=[s.replace("(", "").replace(")", "") for s in names])
    if ex.ok:
        print(render(ex.rep))
        return 0
    print("not expressible (certificate rows: %d)" % len(ex.certificate or []))
    return 1


def build_parser():
    p = argparse.ArgumentParser(prog="ortho-invar", description="Invariants of O+(2m, q), q odd.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True)

    v = sub.add_parser("verify", help="run named checks")
    v.add_argument("--suite", default="*", help="comma separated glob patterns over check names")
    v.add_argument("--q", type=int)
    v.add_argument("--m", type=int)
    v.add_argument("--max-degree", type=int)
    v.add_argument("--heavy", action="store_true")
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--json")
    v.add_argument("--list", action="store_true", help="list check names and exit")
    v.set_defaults(fn=cmd_verify)

    c = sub.add_parser("construct", help="print an invariant")
    c.add_argument("object", choices=["xi", "norm", "u", "d", "minor", "c22", "catalog"])
    c.add_argument("--q", type=int, required=True)
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--i", type=int)
    c.add_argument("--var", help="variable for norm, e.g. y1 or x2")
    c.add_argument("--abstract", action="store_true", help="c22 as a polynomial in T0, T1")
    c.add_argument("--format", choices=["text", "json"], default="text")
    c.set_defaults(fn=cmd_construct)

    h = sub.add_parser("hilbert", help="dimensions of invariants by degree")
    h.add_argument("--group", choices=["sylow", "oplus", "hook", "borel"], required=True)
    h.add_argument("--q", type=int, required=True)
    h.add_argument("--m", type=int, required=True)
    h.add_argument("--max-degree", type=int, required=True)
    h.add_argument("--format", choices=["text", "json"], default="text")
    h.set_defaults(fn=cmd_hilbert)

    e = sub.add_parser("express", help="write a polynomial over named generators")
    e.add_argument("--target", required=True, help="file holding the polynomial in y1..ym, xm..x1")
    e.add_argument("--gens", required=True, help="comma separated: xi0,d1,N(y1),x1,...")
    e.add_argument("--q", type=int, required=True)
    e.add_argument("--m", type=int, required=True)
    e.set_defaults(fn=cmd_express)
    return p


def main(argv=None):
    p = build_parser()
    try:
        a = p.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    logging.basicConfig(level=logging.DEBUG if a.verbose else logging.WARNING)
    if a.cmd == "verify" and a.list:
        for n in sorted(REGISTRY):
            print(f"{n:24s} {REGISTRY[n].anchor}")
        return 0
    for attr in ("q",):
        val = getattr(a, attr, None)
        if val is not None and val % 2 == 0:
            print("error: q must be odd", file=sys.stderr)
            return 2
    try:
        return a.fn(a)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        logging.exception("internal error")
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
