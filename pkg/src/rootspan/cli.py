"""Command-line front end.

Exit codes: 0 success, 1 invalid datum, 2 verification/assertion failure,
64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .affine import cartan_and_delta, classify_affine, family_of_label
from .elliptic import (EllipticDatum, InvalidDatumError, affine_quotient,
                       compute_kg, preset_datum, PRESET_NAMES)
from .lie import (LISTRAB_GRAMS, encode_serre, homogeneity_check,
                  verify_adfone, verify_adftwo)
from .marking import marking_line, mult_at, mult_table
from . import affine as affine_mod
from . import core


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        sys.exit(64)


def _add_datum_args(p):
    p.add_argument("--datum", help="path to a datum JSON file")
    p.add_argument("--preset", choices=PRESET_NAMES, help="named preset datum")
    p.add_argument("--rank", type=int, default=2, help="rank l for --preset")
    p.add_argument("--format", choices=("text", "json"), default="text")


def _load_datum(args):
    if args.datum:
        with open(args.datum) as fh:
            datum = EllipticDatum.from_json(json.load(fh))
    elif args.preset:
        datum = preset_datum(args.preset, args.rank)
    else:
        print("error: provide --datum or --preset", file=sys.stderr)
        sys.exit(64)
    report = datum.validate()
    if not report.valid:
        print("invalid datum:", file=sys.stderr)
        print(report.summary(), file=sys.stderr)
        sys.exit(1)
    return datum


def _parse_pair(text, what):
    try:
        x, y = (int(t) for t in text.split(","))
        return x, y
    except ValueError:
        print(f"error: {what} must be 'p,z'", file=sys.stderr)
        sys.exit(64)


def _quotient_base(datum, direction):
    quotient, _ = affine_quotient(datum, direction)
    alpha0 = affine_mod.affine_alpha0(quotient)
    base = (alpha0,) + quotient.pi_prime
    marked = cartan_and_delta(base, quotient.membership)
    label = classify_affine(marked)
    return quotient, marked, label


_DISPLAY_ORDER = {
    "A(1)": lambda l: [1, 0] if l == 1 else None,
    "A2l(2)": lambda l: list(range(1, l + 1)) + [0],
    "Dl+1(2)": lambda l: list(range(1, l + 1)) + [0],
    "C(2)(l+1)": lambda l: list(range(1, l + 1)) + [0],
    "A(4)(0,2l)": lambda l: list(range(1, l + 1)) + [0],
    "B(1)(0,l)": lambda l: list(range(1, l + 1)) + [0],
    "C(1)": lambda l: [2, 1, 0] if l == 2 else [1] + list(range(2, l + 1)) + [0],
    "A(2)(0,2l-1)": lambda l: [2, 1, 0] if l == 2 else None,
    "G2(1)": lambda l: [1, 2, 0],
    "D4(3)": lambda l: [0, 1, 2],
    "E6(2)": lambda l: [0, 1, 2, 3, 4],
    "F4(1)": lambda l: [0, 4, 3, 2, 1],
}

_BARS = {2: "==", 3: "≡", 4: "≣"}


def render_diagram(label):
    """ASCII diagram of an affine type in its canonical presentation."""
    key, l = family_of_label(label)
    gcm, marks = affine_mod._catalog_entry(key, l)
    order_fn = _DISPLAY_ORDER.get(key)
    order = order_fn(l) if order_fn else None

    def glyph(i):
        return "●" if marks[i] else "o"

    if order is not None:
        chain_ok = all(gcm[a][b] != 0 for a, b in zip(order, order[1:]))
        if chain_ok:
            parts, labels = [], []
            for idx, node in enumerate(order):
                parts.append(glyph(node))
                labels.append(f"a{node}")
                if idx + 1 < len(order):
                    nxt = order[idx + 1]
                    aij, aji = gcm[node][nxt], gcm[nxt][node]
                    n = max(abs(aij), abs(aji))
                    if n == 1:
                        parts.append("---")
                    elif abs(aij) == abs(aji):
                        parts.append("<=>")
                    elif abs(aij) > abs(aji):
                        parts.append("<" + _BARS[n])
                    else:
                        parts.append(_BARS[n] + ">")
            line1 = " ".join(parts)
            line2 = "   ".join(labels)
            return f"{label}\n{line1}\n{line2}"

    lines = [label]
    lines.append("nodes: " + ", ".join(f"a{i} {glyph(i)}" for i in range(l + 1)))
    edges = []
    for i in range(l + 1):
        for j in range(i + 1, l + 1):
            if gcm[i][j] != 0:
                edges.append(f"a{i}~a{j} ({gcm[i][j]},{gcm[j][i]})")
    lines.append("edges: " + "; ".join(edges))
    return "\n".join(lines)


def _cmd_classify(args):
    datum = _load_datum(args)
    direction = _parse_pair(args.marking, "--marking") if args.marking else (0, 1)
    _, marked, label = _quotient_base(datum, direction)
    if args.format == "json":
        print(json.dumps({"schema": 1, "type": label,
                          "delta_marks": list(marked.delta_marks),
                          "black": list(marked.marks)}))
    else:
        print(label)
    return 0


def _cmd_base(args):
    datum = _load_datum(args)
    direction = _parse_pair(args.marking, "--marking") if args.marking else (0, 1)
    _, marked, label = _quotient_base(datum, direction)
    line = marking_line(datum, direction)
    payload = {
        "schema": 1,
        "type": label,
        "marking": list(direction),
        "pi": [[str(c) for c in v.coords] for v in line.pi],
        "k": list(line.k),
        "g": [bool(x) for x in line.g],
        "gcm": [list(r) for r in marked.gcm],
        "delta_marks": list(marked.delta_marks),
    }
    if args.format == "json":
        print(json.dumps(payload))
    else:
        print(f"affine type: {label}")
        print(f"delta marks: {payload['delta_marks']}")
        for i, v in enumerate(line.pi):
            print(f"  pi'[{i}] = {list(v.coords)}  k'={line.k[i]}"
                  f"  g'={'odd' if line.g[i] else 'none'}")
    return 0


def _cmd_roots(args):
    datum = _load_datum(args)
    try:
        fb, pb, zb = (int(t) for t in args.box.split(","))
    except ValueError:
        print("error: --box must be 'F,P,Z'", file=sys.stderr)
        sys.exit(64)
    roots = datum.generate_roots(fb, pb, zb)
    if args.format == "json":
        print(json.dumps({"schema": 1, "count": len(roots),
                          "roots": [[int(c) for c in v.coords] for v in roots]}))
    else:
        for v in roots:
            print(" ".join(str(int(c)) for c in v.coords),
                  datum.membership(v) or "?")
        print(f"total {len(roots)}")
    return 0


def _cmd_mult(args):
    datum = _load_datum(args)
    p, z = _parse_pair(args.sigma, "--sigma")
    print(mult_at(datum, (p, z)))
    return 0


def _cmd_mult_table(args):
    datum = _load_datum(args)
    parts = [int(t) for t in args.box.split(",")]
    if len(parts) == 2:
        box = (0, parts[0], 0, parts[1])
    elif len(parts) == 4:
        box = tuple(parts)
    else:
        print("error: --box must be 'P,Z' or 'pmin,pmax,zmin,zmax'", file=sys.stderr)
        sys.exit(64)
    table = mult_table(datum, box)
    if args.format == "json":
        print(json.dumps(table.to_json()))
    else:
        print(table.render_text())
    return 0


def _cmd_diagram(args):
    datum = _load_datum(args)
    direction = _parse_pair(args.marking, "--marking") if args.marking else (0, 1)
    _, _, label = _quotient_base(datum, direction)
    print(render_diagram(label))
    return 0


def _verify_suites(datum, box):
    fin_b = min(2, box)
    yield "datum admissibility", datum.validate().valid

    window = datum.generate_roots(fin_b, box, box)
    report = core.verify_axioms(window, datum.l + 2)
    yield "axioms on window (boundary-tolerant)", report.all_pass

    by_member = []
    for phi in sorted(c for cls in datum.fin_classes.values() for c in cls):
        if any(abs(x) > fin_b for x in phi):
            continue
        for p in range(-box, box + 1):
            for z in range(-box, box + 1):
                v = datum.space.vector(phi + (p, z))
                if datum.member(v):
                    by_member.append(v)
    yield "oracle equivalence (generation == membership)", \
        sorted(by_member) == sorted(window)

    gen_set = {v.coords for v in window}
    yield "reducedness (no root with its double)", \
        not any(tuple(2 * c for c in v.coords) in gen_set for v in window)

    stable = True
    classes = {v.coords: datum.membership(v) for v in window}
    for v in window:
        for alpha in datum.pi:
            img = alpha.reflect(v)
            if img.coords in classes and classes[img.coords] != classes[v.coords]:
                stable = False
    yield "Weyl stability of length classes on window", stable

    lsh, llg, lex = datum.coset_sets()
    ok = True
    gamma1 = datum.gamma1()
    for p in range(-6, 7):
        for z in range(-6, 7):
            v = gamma1 + datum.iso_point(p, z)
            if datum.member(v) != lsh.contains(p, z):
                ok = False
    yield "coset closure matches membership (short class)", ok

    ks, gs = compute_kg(datum.member, datum.pi, datum.a)
    yield "k/g round trip", ks == datum.k and gs == datum.g


def _cmd_verify(args):
    datum = _load_datum(args)
    failures = 0
    for name, ok in _verify_suites(datum, args.box):
        print(f"{'ok  ' if ok else 'FAIL'} {name}")
        failures += 0 if ok else 1
    return 0 if failures == 0 else 2


def _cmd_lie_check(args):
    datum = _load_datum(args)
    failures = 0

    def emit(name, ok):
        nonlocal failures
        print(f"{'ok  ' if ok else 'FAIL'} {name}")
        failures += 0 if ok else 1

    for idx, gram in enumerate(LISTRAB_GRAMS):
        ok = all(verify_adfone(gram, k) for k in range(1, 5))
        emit(f"bracket identity (50) on rank-2 row {idx + 1}, k=1..4", ok)
    for m in range(0, -4, -1):
        gram = [[2, m], [m, max(2, -2 * m)]]
        ok = all(verify_adftwo(gram, i) for i in range(0, -m + 1))
        emit(f"n-operator identities (52) at m={m}", ok)
    rels = encode_serre(datum)
    emit(f"homogeneity of {len(rels)} Serre relation instances",
         homogeneity_check(rels))
    return 0 if failures == 0 else 2


def main(argv=None):
    parser = _Parser(prog="rootspan",
                     description="affine and elliptic root system toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn, extras in (
        ("classify", _cmd_classify, ("marking",)),
        ("base", _cmd_base, ("marking",)),
        ("roots", _cmd_roots, ("rbox",)),
        ("mult", _cmd_mult, ("sigma",)),
        ("mult-table", _cmd_mult_table, ("tbox",)),
        ("verify", _cmd_verify, ("vbox",)),
        ("diagram", _cmd_diagram, ("marking",)),
        ("lie-check", _cmd_lie_check, ()),
    ):
        p = sub.add_parser(name)
        _add_datum_args(p)
        if "marking" in extras:
            p.add_argument("--marking", help="marking direction 'x,y' (default 0,1)")
        if "rbox" in extras:
            p.add_argument("--box", default="2,3,3", help="bounds 'F,P,Z'")
        if "sigma" in extras:
            p.add_argument("--sigma", required=True, help="lattice point 'p,z'")
        if "tbox" in extras:
            p.add_argument("--box", default="8,9",
                           help="'P,Z' for [0,P]x[0,Z] or 'pmin,pmax,zmin,zmax'")
        if "vbox" in extras:
            p.add_argument("--box", type=int, default=3, help="window bound")
        p.set_defaults(func=fn)

    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 64
    except InvalidDatumError as exc:
        print(f"invalid datum: {exc}", file=sys.stderr)
        return 1
    except AssertionError as exc:
        print(f"internal assertion failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
