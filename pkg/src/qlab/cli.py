"""Command line interface.

Commands read and write the canonical JSON quiver format, so they compose
through pipes:

    qlab gen abelian --orders 4,4 | qlab classify --n 2

Exit status is 0 on success, 2 for invalid input and 3 when the mathematics
refuses (for instance a trivial extension that is not quadratic).
"""
from __future__ import annotations

import argparse
import json
import math
import sys

from . import __version__
from .algebra import (
    GradedAlgebra,
    default_degree_cap,
    graded_dims,
    is_n_properly_graded,
    stable_translation_check,
    trivial_extension,
)
from .covers import complete_tau_slice, mutate_sources, tau_mutation, z_separated, znq_cover
from .dual import quadratic_dual
from .errors import DegreeCapExceeded, QlabError, ValidationError
from .koszul import koszul_profile
from .loewy import classify, default_h_max, gk_estimate, loewy_matrix
from .mckay import (
    mckay_abelian,
    mckay_ade,
    mckay_add_loops,
    mckay_from_characters,
    relations_sr,
    relations_sr_dual,
    relations_xi,
    relations_xi_dual,
    slice_relations_sr,
    slice_relations_xi,
)
from .quiver import BoundQuiver, parse_bound_quiver, serialize, to_dot

REPORT_SCHEMA = "qlab-report/1"


def _read_input(path):
    if path in (None, "-"):
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise ValidationError(f"cannot read {path}: {e.strerror}") from None
    return parse_bound_quiver(text)


def _write(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _emit_quiver(bq, args):
    if getattr(args, "format", "json") == "dot":
        _write(to_dot(bq), args.output)
    else:
        _write(serialize(bq), args.output)


def _emit_json(obj, args):
    _write(json.dumps(obj, sort_keys=True, indent=2) + "\n", args.output)


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ValidationError("expected comma-separated integers", text) from None


def _vertex_list(text):
    return [x.strip() for x in (text or "").split(",") if x.strip()]


def _positive(name, value, minimum=0):
    if value is not None and value < minimum:
        raise ValidationError(f"--{name} must be at least {minimum}", value)


def _table(matrix, labels):
    width = max([len(x) for x in labels] + [len(str(x)) for row in matrix for x in row] + [1])
    lines = [" " * width + " " + " ".join(x.rjust(width) for x in labels)]
    for lab, row in zip(labels, matrix):
        lines.append(lab.rjust(width) + " " + " ".join(str(x).rjust(width) for x in row))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# commands


def cmd_gen(args):
    kind = args.kind
    if kind == "abelian":
        orders = _int_list(args.orders)
        rel = args.relations
        if rel == "auto":
            rel = "sr" if len(orders) == 2 and min(orders) >= 4 else "none"
        if rel == "none":
            bq = BoundQuiver(mckay_abelian(orders))
        elif len(orders) != 2:
            raise ValidationError("relation families need two orders", orders)
        elif rel == "sr":
            bq = relations_sr(*orders)
        else:
            bq = relations_sr_dual(*orders)
    elif kind == "ade":
        J = _vertex_list(args.J)
        if args.relations == "xi":
            bq = relations_xi(args.family, args.l, J)
        elif args.relations == "xi-dual":
            bq = relations_xi_dual(args.family, args.l, J)
        else:
            q = mckay_ade(args.family, args.l, loops=False)
            bq = BoundQuiver(mckay_add_loops(q, "c") if args.loops else q)
    elif kind == "chartable":
        try:
            with open(args.file, encoding="utf-8") as fh:
                table = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise ValidationError(f"cannot read character table: {e}") from None
        bq = BoundQuiver(mckay_from_characters(table, args.faithful))
    elif kind == "relations":
        which = "dual" if args.dual else "primal"
        if args.family == "sr":
            s, r = _int_list(args.orders)
            if args.slice:
                bq = slice_relations_sr(s, r, which)
            else:
                bq = relations_sr_dual(s, r) if args.dual else relations_sr(s, r)
        else:
            J = _vertex_list(args.J)
            if args.slice:
                bq = slice_relations_xi(args.xi, args.l, J, which)
            else:
                bq = (relations_xi_dual if args.dual else relations_xi)(args.xi, args.l, J)
    else:
        raise ValidationError("unknown generator", kind)
    _emit_quiver(bq, args)


def cmd_dual(args):
    _emit_quiver(quadratic_dual(_read_input(args.input)), args)


def cmd_trivext(args):
    bq = _read_input(args.input)
    _emit_quiver(trivial_extension(bq, args.twist, args.cap), args)


def _translation_degree(bq, n):
    if n is not None:
        _positive("n", n)
        return n
    if bq.n is not None:
        return bq.n
    raise ValidationError("the input has no 'n'; pass --n")


def cmd_cover(args):
    bq = _read_input(args.input)
    if args.mode == "separated":
        w = z_separated(bq, args.start, args.stop, args.n if args.n is not None else bq.n)
    else:
        w = znq_cover(bq, args.start, args.stop)
    _emit_quiver(w.bound, args)


def cmd_slice(args):
    bq = _read_input(args.input)
    n = _translation_degree(bq, args.n)
    w = z_separated(bq, args.at, args.at + n, n)
    _emit_quiver(complete_tau_slice(w, args.at), args)


def cmd_mutate(args):
    bq = _read_input(args.input)
    n = _translation_degree(bq, args.n)
    lo = args.at - (n + 1)
    hi = args.at + 2 * n + 1
    w = z_separated(bq, lo, hi, n)
    cur = complete_tau_slice(w, args.at)
    if args.all_sources:
        cur = mutate_sources(cur, w)
    for v in args.vertex or []:
        cur = tau_mutation(cur, w, v, args.kind)
    _emit_quiver(cur, args)


def cmd_hilbert(args):
    bq = _read_input(args.input)
    _positive("tmax", args.tmax)
    gd, _ = graded_dims(bq, args.tmax)
    if args.format == "json":
        _emit_json(gd.to_json(), args)
        return
    out = []
    for t, m in enumerate(gd.matrices):
        out.append(f"A_{t}  (row j, column i: dim e_j L_{t} e_i)")
        out.append(_table(m, list(gd.vertices)))
    out.append("Hilbert series per vertex:")
    for v in gd.vertices:
        out.append(f"  {v}: " + " ".join(str(x) for x in gd.hilbert(v)))
    _write("\n".join(out) + "\n", args.output)


def cmd_koszul(args):
    bq = _read_input(args.input)
    _positive("tmax", args.tmax)
    cap = default_degree_cap(bq)
    alg = GradedAlgebra(bq, cap)
    if alg.vanishes_from is None:
        raise DegreeCapExceeded(f"Lambda_{cap} is nonzero; raise QLAB_DEGREE_CAP")
    prof = koszul_profile(alg, args.tmax)
    if args.format == "json":
        _emit_json(prof.to_json(), args)
    else:
        lines = [prof.summary()]
        for t, ds in enumerate(prof.generator_degrees):
            lines.append(f"  P^{t}: generators in degrees {sorted(set(ds))} (count {len(ds)})")
        _write("\n".join(lines) + "\n", args.output)


def _classification(bq, n, h_max):
    gd, _ = graded_dims(bq, n + 2)
    L = loewy_matrix(gd, n)
    if h_max is not None:
        _positive("hmax", h_max, 1)
    return L, classify(L, h_max)


def cmd_classify(args):
    bq = _read_input(args.input)
    n = _translation_degree(bq, args.n)
    L, rep = _classification(bq, n, args.hmax)
    blob = rep.to_json()
    blob["n"] = n
    blob["loewy_size"] = L.size
    if args.format == "json":
        _emit_json(blob, args)
        return
    gk = gk_estimate(rep)
    text = [
        f"verdict: {rep.label()}",
        f"Loewy matrix: {L.size} x {L.size}, n = {n}",
        f"multiplicity of eigenvalue 1: {rep.multiplicity_of_one}",
        f"GK estimate: {'inf' if gk == math.inf else gk}",
    ]
    text += [f"note: {x}" for x in rep.notes]
    _write("\n".join(text) + "\n" + json.dumps(blob, sort_keys=True, indent=2) + "\n", args.output)


def cmd_report(args):
    if args.input is not None or args.family is None:
        bq = _read_input(args.input)
        source = {"input": args.input or "-"}
    elif args.family == "sr":
        s, r = _int_list(args.orders)
        bq = relations_sr(s, r)
        source = {"family": "sr", "orders": [s, r]}
    else:
        J = _vertex_list(args.J)
        bq = relations_xi(args.xi, args.l, J)
        source = {"family": "xi", "xi": args.xi, "l": args.l, "J": J}
    config = {
        "degree_cap": default_degree_cap(bq),
        "hmax": args.hmax,
        "tmax": args.tmax,
        "twist": args.twist,
        "seed": args.seed,
        "version": __version__,
    }
    steps = {}
    n = args.n if args.n is not None else bq.n
    stable = stable_translation_check(bq, n) if n is not None else None
    if stable is None or not stable.stable:
        grading = is_n_properly_graded(bq)
        if not grading.yes:
            raise ValidationError("input is neither stable nor properly graded")
        bq = trivial_extension(bq, args.twist)
        n = grading.n
        steps["trivext"] = {"n": n, "arrows": len(bq.quiver.arrows), "relations": len(bq.relations)}
        stable = stable_translation_check(bq, n)
    steps["stable"] = {"stable": stable.stable, "tau": stable.tau, "reason": stable.reason}
    gd, alg = graded_dims(bq, n + 2)
    steps["hilbert"] = gd.to_json()
    steps["koszul"] = koszul_profile(alg, args.tmax).to_json()
    L, rep = _classification(bq, n, args.hmax)
    steps["classify"] = rep.to_json()
    config["hmax"] = rep.h_max
    doc = {"schema": REPORT_SCHEMA, "config": config, "source": source, "n": n, "steps": steps}
    _emit_json(doc, args)


# ---------------------------------------------------------------------------
# parser


def _add_io(p, quiver_out=True):
    p.add_argument("--input", "-i", help="input JSON file (default stdin)")
    p.add_argument("--output", "-o", help="output file (default stdout)")
    if quiver_out:
        p.add_argument("--format", choices=["json", "dot"], default="json")


def build_parser():
    ap = argparse.ArgumentParser(prog="qlab", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate McKay quivers and relation families")
    g.add_argument("kind", choices=["abelian", "ade", "chartable", "relations"])
    g.add_argument("--orders", default="4,4")
    g.add_argument("--family", default="sr", help="ADE family (A, D, E6, E7, E8) or sr|xi for 'relations'")
    g.add_argument("--xi", default="A", help="ADE family for 'relations --family xi'")
    g.add_argument("--l", type=int)
    g.add_argument("--loops", action="store_true")
    g.add_argument("--relations", default="auto", choices=["auto", "none", "sr", "sr-dual", "xi", "xi-dual"])
    g.add_argument("--J", default="")
    g.add_argument("--file")
    g.add_argument("--faithful", type=int)
    g.add_argument("--dual", action="store_true")
    g.add_argument("--slice", action="store_true")
    g.add_argument("--output", "-o")
    g.add_argument("--format", choices=["json", "dot"], default="json")
    g.set_defaults(func=cmd_gen)

    p = sub.add_parser("dual", help="quadratic dual")
    _add_io(p)
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("trivext", help="trivial extension of an n-properly-graded algebra")
    _add_io(p)
    p.add_argument("--twist", type=int, choices=[1, -1])
    p.add_argument("--cap", type=int)
    p.set_defaults(func=cmd_trivext)

    p = sub.add_parser("cover", help="window of a covering quiver")
    _add_io(p)
    p.add_argument("--mode", choices=["separated", "znq"], default="separated")
    p.add_argument("--from", dest="start", type=int, default=0)
    p.add_argument("--to", dest="stop", type=int, default=2)
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("slice", help="complete tau-slice of the separated cover")
    _add_io(p)
    p.add_argument("--at", type=int, default=0)
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_slice)

    p = sub.add_parser("mutate", help="tau-mutate the slice at --at")
    _add_io(p)
    p.add_argument("--at", type=int, default=0)
    p.add_argument("--n", type=int)
    p.add_argument("--vertex", action="append")
    p.add_argument("--kind", choices=["source", "sink"], default="source")
    p.add_argument("--all-sources", action="store_true")
    p.set_defaults(func=cmd_mutate)

    p = sub.add_parser("hilbert", help="graded dimension matrices")
    _add_io(p, quiver_out=False)
    p.add_argument("--tmax", type=int, default=4)
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.set_defaults(func=cmd_hilbert)

    p = sub.add_parser("koszul", help="resolution profile of the simple modules")
    _add_io(p, quiver_out=False)
    p.add_argument("--tmax", type=int, default=4)
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.set_defaults(func=cmd_koszul)

    p = sub.add_parser("classify", help="finite/tame/wild verdict from the Loewy matrix")
    _add_io(p, quiver_out=False)
    p.add_argument("--n", type=int)
    p.add_argument("--hmax", type=int)
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("report", help="full pipeline in one JSON document")
    _add_io(p, quiver_out=False)
    p.add_argument("--family", choices=["sr", "xi"])
    p.add_argument("--orders", default="4,4")
    p.add_argument("--xi", default="A")
    p.add_argument("--l", type=int)
    p.add_argument("--J", default="")
    p.add_argument("--n", type=int)
    p.add_argument("--hmax", type=int)
    p.add_argument("--tmax", type=int, default=4)
    p.add_argument("--twist", type=int, choices=[1, -1])
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except QlabError as e:
        sys.stderr.write(json.dumps({"error": e.code, "message": str(e)}) + "\n")
        return e.exit_status
    return 0


if __name__ == "__main__":
    sys.exit(main())
