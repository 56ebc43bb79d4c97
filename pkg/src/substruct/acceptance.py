"""The acceptance suite: one function per criterion, shared by tests and ``selftest``.

Each function returns a :class:`Result`; ``ok`` is the criterion's verdict
and ``detail`` a short account (counts, first counterexample, timing).
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field

from . import syntax as sx
from .algebra import DLE, dual_residuals_of, regression_suite
from .canext import (SLOT_PROPERTIES, canonical_extension, canonicity_check, check_extension_props,
                     check_preservation)
from .frames import (biclosed_tensors, check_rcc, check_structural, closure_frame, frame_from_tensor,
                     heap_frame, random_frame, small_posets, triple_biconditional, validate_frame)
from .jt import compare_jt_canext, truth_lemma_check, World
from .lattice import (birkhoff_map, enumerate_dls, is_isomorphism, prime_filters, upset_lattice)
from .semantics import countermodel_search, denotation_tuples, frame_valid, frame_valid_all, upset_valuations


@dataclass
class Result:
    number: int
    title: str
    ok: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0
    limit: float | None = None

    def line(self):
        status = "PASS" if self.ok else "FAIL"
        lim = f" (limit {self.limit:.0f} s)" if self.limit else ""
        return f"[{status}] {self.number:2d}. {self.title}: {self.detail.get('summary', '')} [{self.seconds:.1f} s{lim}]"


def _timed(number, title, limit=None):
    def wrap(fn):
        def run(**kw):
            t = time.perf_counter()
            ok, detail = fn(**kw)
            secs = time.perf_counter() - t
            if limit is not None and secs > limit:
                ok = False
                detail["summary"] = detail.get("summary", "") + f"; exceeded {limit} s"
            return Result(number, title, ok, detail, secs, limit)
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


@_timed(1, "Birkhoff round-trip", limit=10)
def criterion_1(max_size=6):
    """Every DL up to max_size is isomorphic to the upsets of its prime filters via the embedding."""
    dls = enumerate_dls(max_size)
    bad = []
    for A in dls:
        U = upset_lattice(prime_filters(A).poset)
        f = birkhoff_map(A, U=U)
        same = U.size == A.size and is_isomorphism(A, U, f)
        if same:
            # order matrices agree after relabelling
            same = all(A.leq(a, b) == U.leq(f[a], f[b]) for a in range(A.size) for b in range(A.size))
        if not same:
            bad.append(A.to_json())
    return not bad, {"summary": f"{len(dls)} lattices, {len(bad)} failures", "lattices": len(dls),
                     "failures": bad[:3]}


def _monotone_hull(A, vals, arity):
    """f(x) = join of vals over arguments below x: always monotone."""
    out = {}
    for x in itertools.product(range(A.size), repeat=arity):
        acc = A.bottom
        for y in itertools.product(range(A.size), repeat=arity):
            if all(A.leq(y[k], x[k]) for k in range(arity)):
                acc = A.join(acc, vals[y])
        out[x] = acc
    return out


@_timed(2, "Extension laws")
def criterion_2(count=120, seed=0, max_size=5):
    """Random maps: restriction, sigma below pi, and smoothness of monotone maps."""
    rng = random.Random(seed)
    dls = [A for A in enumerate_dls(max_size) if A.size >= 2]
    bad, mono = [], 0
    for k in range(count):
        A = rng.choice(dls)
        arity = rng.choice((1, 2))
        vals = {x: rng.randrange(A.size) for x in itertools.product(range(A.size), repeat=arity)}
        if k % 2:
            vals = _monotone_hull(A, vals, arity)
        ce = canonical_extension(A)
        rep = check_extension_props(vals, ce, arity)
        mono += rep.monotone
        if not rep.ok:
            bad.append((k, A.size, arity))
    return not bad, {"summary": f"{count} maps ({mono} monotone), {len(bad)} failures", "failures": bad[:5]}


@_timed(3, "Preservation transfer")
def criterion_3(max_size=4):
    """Sigma-extensions keep each slot's join/meet behaviour for all nonempty sets."""
    suite = regression_suite(max_size)
    checks, bad = 0, []
    for A in suite:
        ce = canonical_extension(A.carrier)
        for sym in ("tensor", "lres", "rres"):
            if sym not in A.tables:
                continue
            t = A.tables[sym]
            f = {(a, b): t[a][b] for a in range(A.carrier.size) for b in range(A.carrier.size)}
            for slot, prop in enumerate(SLOT_PROPERTIES[sym]):
                checks += 1
                if not check_preservation(f, ce, 2, slot, prop):
                    bad.append((A.name, sym, slot, prop))
    return not bad, {"summary": f"{len(suite)} algebras, {checks} slot checks, {len(bad)} failures",
                     "failures": bad[:5]}


@_timed(4, "JT extension equals canonical extension", limit=60)
def criterion_4(max_size=4):
    suite = regression_suite(max_size)
    bad = [(A.name, compare_jt_canext(A).witness) for A in suite if not compare_jt_canext(A)]
    return not bad, {"summary": f"{len(suite)} algebras, {len(bad)} mismatches", "failures": bad[:3]}


def with_join_par(A: DLE) -> DLE:
    """A copy of A with par = join, J = bottom and the matching dual residuals."""
    L = A.carrier
    p = [[L.join(a, b) for b in range(L.size)] for a in range(L.size)]
    dl, dr = dual_residuals_of(L, p)
    tables = dict(A.tables)
    tables.update({"J": L.bottom, "par": p, "dlres": dl, "drres": dr})
    return DLE(L, tables, (A.name or "") + "+join")


CANONICITY_SCHEMAS = ("FC1", "FC2", "FC3", "FC4", "FC5", "FC6", "exchange", "contraction", "weak-distribution")


@_timed(5, "Canonicity never refuted")
def criterion_5(max_size=4):
    """canonicity_check over the suite; the par schema runs on copies with par = join."""
    suite = regression_suite(max_size)
    counts = {"canonical-instance": 0, "hypothesis false": 0, "REFUTED": 0}
    refuted = []
    for A in suite:
        B = with_join_par(A)
        for name in CANONICITY_SCHEMAS:
            alg = B if name == "weak-distribution" else A
            for e in sx.instantiate(name):
                r = canonicity_check(alg, e)
                counts[r["status"]] += 1
                if r["status"] == "REFUTED":
                    refuted.append((A.name, str(e)))
    return not refuted, {"summary": ", ".join(f"{k}: {v}" for k, v in counts.items()), "refuted": refuted[:5]}


RESIDUATION_SCHEMAS = ("FC2", "FC3", "FC4", "FC5", "FC6")


@_timed(6, "Residuation correspondence", limit=300)
def criterion_6(max_worlds=3, sample=2000, seed=0, cap=300000):
    """FC2-FC6 valid iff the triple biconditional, over frames from bi-closed tensors.

    The unit flag is 1 everywhere so the unit denotes the empty set.
    Posets whose bi-closed relations exceed ``cap`` are sampled.
    """
    eqs = [e for n in RESIDUATION_SCHEMAS for e in sx.instantiate(n)]
    frames = agree = 0
    sampled = []
    first = None
    per_schema = {n: 0 for n in RESIDUATION_SCHEMAS}
    for P in small_posets(max_worlds):
        for g, exhaustive in biclosed_tensors(P, cap=cap, sample=sample, seed=seed):
            if not exhaustive and P.pairs() not in [s[0] for s in sampled]:
                sampled.append((P.pairs(), sample))
            if not check_rcc(g, P):
                continue
            F = frame_from_tensor(P, [1] * P.size, g, check=False)
            frames += 1
            valid = frame_valid_all(F, eqs, var_cap=3)
            bic = triple_biconditional(F)
            if bool(valid) == bool(bic):
                agree += 1
                continue
            for n in RESIDUATION_SCHEMAS:
                if not frame_valid_all(F, sx.instantiate(n), var_cap=3):
                    per_schema[n] += 1
            if first is None:
                first = {"worlds": P.size, "leq": P.pairs(), "tensor": [sorted(s) for s in g],
                         "fc_valid": bool(valid), "fc_witness": valid.witness, "biconditional": bool(bic)}
    mism = frames - agree
    return mism == 0, {"summary": f"{frames} frames, {mism} disagreements "
                                  f"(failing schemas {per_schema}); sampled posets: {len(sampled)}",
                       "first": first, "sampled": sampled}


@_timed(7, "Closure invariance")
def criterion_7(frames=500, seed=0, max_worlds=3, depth=3):
    """Satisfaction agrees between a random frame and its closure for all depth-3 formulas in p, q."""
    rng = random.Random(seed)
    posets = small_posets(max_worlds)
    bad = []
    for k in range(frames):
        P = rng.choice(posets)
        F = random_frame(P, rng)
        C = closure_frame(F)
        for val in upset_valuations(F, ["p", "q"]):
            tuples = denotation_tuples([F, C], val, depth)
            diff = next((t for t in tuples if t[0] != t[1]), None)
            if diff is not None:
                bad.append((k, P.pairs(), {n: v for n, v in val.items()}, diff))
                break
    return not bad, {"summary": f"{frames} frames, {len(bad)} disagreements", "failures": bad[:3]}


BV_SCHEMAS = ("FCd1-left", "FCd1-right", "dual-contraction", "weak-distribution")


@_timed(8, "Heap model", limit=120)
def criterion_8(unit_samples=3, seed=0):
    H = heap_frame(2, 2)
    detail = {}
    try:
        validate_frame(H)
        detail["validate_frame"] = True
    except ValueError as exc:
        detail["validate_frame"] = f"{type(exc).__name__}: {exc}"
    rcc = check_rcc(H.gammaTensor, H.worlds)
    detail["rcc"] = rcc.ok if rcc else ["fails", rcc.witness]
    fc = {}
    for n in ("FC1", "FC2", "FC3", "FC4", "FC5", "FC6"):
        r = frame_valid_all(H, sx.instantiate(n), var_cap=3)
        fc[n] = True if r else r.witness
    detail["fc"] = fc
    e = check_structural(H, "e")
    c = check_structural(H, "c")
    cv = frame_valid(H, sx.parse_inequation("p <= p * p"), var_cap=1)
    detail["exchange"] = e.ok
    detail["contraction"] = c.ok
    detail["contraction_witness"] = {"world": c.witness, "valuation": cv.witness,
                                     "heap": H.labels[c.witness] if c.witness is not None else None}
    rng = random.Random(seed)
    ups = H.worlds.upsets()
    picks = sorted(rng.sample(range(len(ups)), unit_samples))
    dual_rcc, bv = [], []
    for i in picks:
        U = [w for w in range(H.size) if ups[i] >> w & 1]
        D = heap_frame(2, 2, unit_upset=U)
        dual_rcc.append(check_rcc(D.dual.gammaPar, D.worlds).ok)
        status = {n: frame_valid_all(D, sx.instantiate(n), var_cap=3).ok for n in BV_SCHEMAS}
        bv.append({"unit_upset": U, "failing": [n for n, ok in status.items() if not ok]})
    detail["dual_rcc"] = dual_rcc
    detail["unit_upsets"] = bv
    ok = (detail["validate_frame"] is True and detail["rcc"] is True and all(v is True for v in fc.values())
          and e.ok and not c.ok and all(dual_rcc) and all(b["failing"] for b in bv))
    failed = [k for k, good in [("validate_frame", detail["validate_frame"] is True),
                                ("rcc", detail["rcc"] is True),
                                ("fc", all(v is True for v in fc.values())), ("exchange", e.ok),
                                ("contraction fails", not c.ok), ("dual rcc", all(dual_rcc)),
                                ("unit upsets each break a schema", all(b["failing"] for b in bv))] if not good]
    detail["summary"] = "all parts hold" if ok else "failing parts: " + ", ".join(failed)
    return ok, detail


@_timed(9, "Truth lemma")
def criterion_9(pairs=50, seed=0, max_size=4):
    rng = random.Random(seed)
    suite = [A for A in regression_suite(max_size) if A.carrier.size >= 2]
    found, tries, bad, inconsistent = 0, 0, [], 0
    while found < pairs and tries < 100 * pairs:
        tries += 1
        A = rng.choice(suite)
        names = ["p", "q"]
        v = {n: rng.randrange(A.carrier.size) for n in names}
        Phi = [sx.random_formula(rng, names, 2) for _ in range(rng.randint(1, 2))]
        Psi = [sx.random_formula(rng, names, 2) for _ in range(rng.randint(0, 2))]
        r = truth_lemma_check(A, Phi, Psi, v)
        if not isinstance(r, World):
            inconsistent += 1
            continue
        found += 1
        if not r.verified:
            bad.append((A.name, [sx.to_text(p) for p in Phi], [sx.to_text(p) for p in Psi], v))
    ok = found == pairs and not bad
    return ok, {"summary": f"{found} consistent pairs ({inconsistent} inconsistent skipped), "
                           f"{len(bad)} failures", "failures": bad[:3]}


COUNTER_CASES = (("p * q <= q * p", True), ("p <= p * p", True), ("p <= p", False))


@_timed(10, "Countermodel regressions")
def criterion_10(seed=0, max_worlds=4, max_elements=4):
    rows = []
    ok = True
    for text, expect in COUNTER_CASES:
        e = sx.parse_inequation(text)
        r, info = countermodel_search(e, max_worlds=max_worlds, max_elements=max_elements, seed=seed,
                                      with_info=True)
        again = countermodel_search(e, max_worlds=max_worlds, max_elements=max_elements, seed=seed)
        if expect:
            good = bool(r) and r.frame.size <= max_worlds and not frame_valid(r.frame, e, var_cap=3)
            good = good and again.to_json() == r.to_json()
            rows.append({"eq": text, "route": info["route"], "worlds": r.frame.size if r else None,
                         "ok": good})
        else:
            good = not r and not again
            rows.append({"eq": text, "result": "NotFound" if not r else "Model", "ok": good})
        ok &= good
    return ok, {"summary": "; ".join(f"{r['eq']} -> {r.get('route') or r.get('result')}"
                                     f"{'' if r['ok'] else ' (bad)'}" for r in rows), "rows": rows}


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10)


def run_all(only=None):
    out = []
    for fn in CRITERIA:
        r_num = int(fn.__name__.split("_")[1])
        if only and r_num not in only:
            continue
        out.append(fn())
    return out

