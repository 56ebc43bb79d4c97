"""Command-line front end.

Exit codes: 0 when the checked property holds (or the artifact was
produced), 1 when it fails (the report carries a witness), 2 on usage or
input errors.  Every path argument may be ``-`` for stdin.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import syntax as sx
from .algebra import AlgebraError, check_residuated, holds, load_dle
from .canext import canonical_extension, check_extension_props
from .frames import (FrameError, check_rcc, frame_from_json, frame_to_json, heap_frame, unit_orientation,
                     validate_frame)
from .jt import Inconsistent, canonical_frame, compare_jt_canext, truth_lemma_check
from .lattice import LatticeError, bits, load_lattice, mask_of, prime_filters
from .semantics import Model, NotFound, countermodel_search, denote, frame_valid


class UsageError(Exception):
    pass


def _read(path):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _emit(args, report, text=None):
    if args.json or text is None:
        print(json.dumps(report, sort_keys=True, default=_jsonable))
    else:
        print(text)


def _jsonable(x):
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    if isinstance(x, tuple):
        return list(x)
    return str(x)


# handlers return an exit code

def cmd_lattice_check(args):
    obj = _read(args.file)
    try:
        A = load_lattice(obj)
    except LatticeError as exc:
        _emit(args, {"ok": False, "error": type(exc).__name__, "detail": str(exc)}, f"not a distributive lattice: {exc}")
        return 1
    spec = prime_filters(A)
    rep = {"ok": True, "size": A.size, "prime_filters": [sorted(bits(m)) for m in spec.masks()],
           "boolean": A.is_boolean()}
    _emit(args, rep, f"distributive lattice with {A.size} elements and {len(spec)} prime filters")
    return 0


def cmd_algebra_check(args):
    obj = _read(args.file)
    try:
        A = load_dle(obj)
    except (AlgebraError, LatticeError) as exc:
        _emit(args, {"ok": False, "error": type(exc).__name__, "detail": str(exc)}, f"invalid: {exc}")
        return 1
    rep = {"ok": True, "signature": list(A.signature), "size": A.carrier.size}
    if all(A.has(s) for s in ("tensor", "lres", "rres")):
        r = check_residuated(A)
        rep["residuated"] = r.ok
        rep["ok"] = r.ok
        if not r:
            rep["witness"] = r.witness
    _emit(args, rep, f"{'valid' if rep['ok'] else 'not residuated'}: {rep}")
    return 0 if rep["ok"] else 1


def cmd_algebra_holds(args):
    A = load_dle(_read(args.file))
    e = sx.parse_inequation(args.eq)
    r = holds(A, e)
    rep = {"ok": r.ok, "equation": str(e), "witness": r.witness}
    _emit(args, rep, "holds" if r else f"fails at {r.witness}")
    return 0 if r else 1


def cmd_canext_report(args):
    A = load_dle(_read(args.file))
    ce = canonical_extension(A.carrier)
    rep = {"size": ce.carrier.size, "prime_filters": len(ce.spectrum), "closed": len(ce.closed),
           "open": len(ce.open), "embedding": ce.embed, "ops": {}}
    ok = True
    for sym in A.signature:
        if sym in ("I", "J"):
            continue
        t = A.tables[sym]
        arity = 1 if sym in ("dia", "box") else 2
        r = check_extension_props(t, ce, arity)
        rep["ops"][sym] = {"restricts": r.restricts.ok, "sigma_below_pi": r.below.ok,
                           "monotone": r.monotone, "smooth": None if r.smooth is None else r.smooth.ok}
        ok &= r.ok
    rep["ok"] = ok
    _emit(args, rep, json.dumps(rep, sort_keys=True))
    return 0 if ok else 1


def _load_frame(path, validate=False):
    """Read a frame file, or the frame inside an emitted countermodel."""
    obj = _read(path)
    if "frame" in obj:
        obj = obj["frame"]
    return frame_from_json(obj, validate=validate)


def cmd_frame_check(args):
    frame = _load_frame(args.file)
    try:
        validate_frame(frame)
    except FrameError as exc:
        _emit(args, {"ok": False, "error": type(exc).__name__, "detail": str(exc)}, f"invalid: {exc}")
        return 1
    rep = {"ok": True, "worlds": frame.size, "units": unit_orientation(frame)}
    _emit(args, rep, f"valid frame with {frame.size} worlds")
    return 0


def cmd_frame_rcc(args):
    frame = _load_frame(args.file)
    r = check_rcc(frame.gammaTensor, frame.worlds)
    rep = {"ok": r.ok, "witness": r.witness}
    if frame.dual is not None:
        d = check_rcc(frame.dual.gammaPar, frame.worlds)
        rep["dual"] = {"ok": d.ok, "witness": d.witness}
        rep["ok"] = r.ok and d.ok
    _emit(args, rep, "RCC holds" if rep["ok"] else f"RCC fails: {rep}")
    return 0 if rep["ok"] else 1


def cmd_frame_heap(args):
    unit = None
    if args.unit_upset is not None:
        unit = [int(x) for x in args.unit_upset.split(",") if x.strip()]
    if (args.vals + 1) ** args.addrs > args.max_worlds_heap:
        raise UsageError("too many heaps for the cap")
    frame = heap_frame(args.addrs, args.vals, unit, par=args.par, cap=args.max_worlds_heap)
    print(json.dumps(frame_to_json(frame), sort_keys=True))
    return 0


def _valuation(frame, obj):
    val = {k: mask_of(v) for k, v in obj.items()}
    return Model(frame, val)


def cmd_mc(args):
    frame = _load_frame(args.frame, validate=True)
    M = _valuation(frame, _read(args.val) if args.val else {})
    phi = sx.parse(args.phi)
    den = sorted(denote(phi, M))
    rep = {"formula": sx.to_text(phi), "worlds": den}
    if args.world is not None:
        rep["ok"] = args.world in den
        _emit(args, rep, f"{'true' if rep['ok'] else 'false'} at {args.world}")
        return 0 if rep["ok"] else 1
    _emit(args, rep, f"{rep['formula']} holds at {den}")
    return 0


def cmd_valid(args):
    frame = _load_frame(args.frame, validate=False)
    e = sx.parse_inequation(args.eq)
    r = frame_valid(frame, e, var_cap=args.var_cap)
    rep = {"ok": r.ok, "equation": str(e), "counter_valuation": r.witness}
    _emit(args, rep, "valid" if r else f"fails under {r.witness}")
    return 0 if r else 1


def cmd_counter(args):
    e = sx.parse_inequation(args.eq)
    r, info = countermodel_search(e, max_worlds=args.max_worlds, max_elements=args.max_elements,
                                  seed=args.seed, budget=args.budget, with_info=True)
    if isinstance(r, NotFound):
        rep = {"found": False, "bounds": r.bounds, "examined": r.examined}
        _emit(args, rep, f"no countermodel within {r.bounds}")
        return 1
    rep = {"found": True, "route": info["route"], **r.to_json()}
    print(json.dumps(rep, sort_keys=True))
    return 0


def cmd_jt_frame(args):
    A = load_dle(_read(args.file))
    cf = canonical_frame(A, cap=args.max_worlds)
    out = frame_to_json(cf.frame)
    print(json.dumps(out, sort_keys=True))
    return 0


def cmd_jt_compare(args):
    A = load_dle(_read(args.file))
    r = compare_jt_canext(A)
    rep = {"ok": r.ok, "mismatches": r.witness or []}
    _emit(args, rep, "equal" if r else f"mismatches: {r.witness}")
    return 0 if r else 1


def cmd_jt_truth(args):
    A = load_dle(_read(args.file))
    v = json.loads(args.val) if args.val else {}
    r = truth_lemma_check(A, args.phi or [], args.psi or [], v)
    if isinstance(r, Inconsistent):
        rep = {"ok": False, "inconsistent": {"meet": r.meet, "join": r.join}}
        _emit(args, rep, f"inconsistent: meet {r.meet} <= join {r.join}")
        return 1
    rep = {"ok": r.verified, "world": r.index, "filter": r.filter.elements()}
    _emit(args, rep, f"world {r.index} = prime filter {r.filter.elements()}")
    return 0 if r.verified else 1


def cmd_selftest(args):
    from .acceptance import run_all
    only = {int(x) for x in args.only.split(",")} if args.only else None
    results = run_all(only)
    if args.json:
        print(json.dumps([{"number": r.number, "title": r.title, "ok": r.ok, "seconds": round(r.seconds, 3),
                           "summary": r.detail.get("summary")} for r in results], sort_keys=True))
    else:
        for r in results:
            print(r.line())
    return 0 if all(r.ok for r in results) else 1


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-elements", type=int, default=64)
    common.add_argument("--max-worlds", type=int, default=8)

    p = argparse.ArgumentParser(prog="substruct", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="group", required=True)

    def add(parent, name, fn, help_=None):
        q = parent.add_parser(name, parents=[common], help=help_)
        q.set_defaults(fn=fn)
        return q

    lat = sub.add_parser("lattice").add_subparsers(dest="cmd", required=True)
    add(lat, "check", cmd_lattice_check, "validate a lattice file").add_argument("file")

    alg = sub.add_parser("algebra").add_subparsers(dest="cmd", required=True)
    add(alg, "check", cmd_algebra_check, "validate an algebra file").add_argument("file")
    q = add(alg, "holds", cmd_algebra_holds, "check an (in)equation in an algebra")
    q.add_argument("--eq", required=True)
    q.add_argument("file")

    ce = sub.add_parser("canext").add_subparsers(dest="cmd", required=True)
    add(ce, "report", cmd_canext_report, "canonical extension report").add_argument("file")

    fr = sub.add_parser("frame").add_subparsers(dest="cmd", required=True)
    add(fr, "check", cmd_frame_check, "validate a frame file").add_argument("file")
    add(fr, "rcc", cmd_frame_rcc, "residuation compatibility").add_argument("file")
    q = add(fr, "heap", cmd_frame_heap, "emit a heap frame")
    q.add_argument("--addrs", type=int, required=True)
    q.add_argument("--vals", type=int, required=True)
    q.add_argument("--unit-upset", default=None, help="comma-separated world indices")
    q.add_argument("--par", choices=("restrict", "agree"), default="restrict")
    q.add_argument("--max-worlds-heap", type=int, default=4096)

    q = add(sub, "mc", cmd_mc, "denotation of a formula")
    q.add_argument("--frame", required=True)
    q.add_argument("--val", default=None, help="valuation file: {var: [worlds]}")
    q.add_argument("--phi", required=True)
    q.add_argument("--world", type=int, default=None)

    q = add(sub, "valid", cmd_valid, "frame validity of an (in)equation")
    q.add_argument("--frame", required=True)
    q.add_argument("--eq", required=True)
    q.add_argument("--var-cap", type=int, default=3)

    q = add(sub, "counter", cmd_counter, "bounded countermodel search")
    q.add_argument("--eq", required=True)
    q.add_argument("--budget", type=int, default=20000)
    # the search enumerates every algebra and frame up to the caps
    q.set_defaults(max_worlds=4, max_elements=4)

    jt = sub.add_parser("jt").add_subparsers(dest="cmd", required=True)
    add(jt, "frame", cmd_jt_frame, "canonical frame of an algebra").add_argument("file")
    add(jt, "compare", cmd_jt_compare, "JT extension vs canonical extension").add_argument("file")
    q = add(jt, "truth", cmd_jt_truth, "find a world separating formulas")
    q.add_argument("--phi", action="append")
    q.add_argument("--psi", action="append")
    q.add_argument("--val", default=None, help='JSON valuation into the algebra, e.g. {"p": 1}')
    q.add_argument("file")

    q = add(sub, "selftest", cmd_selftest, "run the acceptance suite")
    q.add_argument("--only", default=None, help="comma-separated criterion numbers")
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return args.fn(args)
    except (UsageError, sx.FormulaError, LatticeError, AlgebraError, FrameError, KeyError, ValueError,
            TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
