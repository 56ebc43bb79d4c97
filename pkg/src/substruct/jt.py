"""The canonical frame of a finite residuated algebra and its complex algebra.

Worlds are the prime filters of the carrier ordered by inclusion.  The
successor clauses, for prime filters F, F1, F2, G1, G2, H1, H2:

* unit flag 0 at F iff I is in F;
* (F1, F2) is a tensor successor of F iff a*b is in F for all a in F1, b in F2;
* (G1, G2) is a left-residual successor of F iff a -* b in F and a in G1
  imply b in G2;
* (H1, H2) is a right-residual successor of F iff a *- b in F and b in H2
  imply a in H1.

The dual block uses the order-dual clauses: J flag 1 at F iff J is in F;
(F1, F2) is a par successor iff a + b in F implies a in F1 or b in F2;
(G1, G2) is a -+ successor iff a outside G1 and b in G2 imply a -+ b in F;
(H1, H2) is a +- successor iff a in H1 and b outside H2 imply a +- b in F.
Modal successors: G is a diamond successor iff a in G implies <>a in F,
and a box successor iff []a in F implies a in G.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

from . import syntax as sx
from .algebra import AlgebraError, DLE, Verdict, check_dual_residuated, check_residuated, eval_term, validate_dle
from .canext import canonical_extension, extend_dle
from .frames import DualBlock, ResourceFrame, frame_from_tensor
from .lattice import DEFAULT_UPSET_CAP, FilterSet, SizeLimitExceeded, bits, prime_filters, separate, upset_lattice
from .semantics import apply_op, denote_mask


class NotResiduated(AlgebraError):
    pass


@dataclass
class CanonicalFrame:
    frame: ResourceFrame
    source: DLE
    filters: tuple  # prime filters as element masks, indexed by world

    def world_of(self, members: int) -> int:
        return self.filters.index(members)


def _member(m, a):
    return m >> a & 1


def canonical_frame(A: DLE, cap: int = 64) -> CanonicalFrame:
    missing = [s for s in ("I", "tensor", "lres", "rres") if not A.has(s)]
    if missing:
        raise NotResiduated(f"missing tables: {', '.join(missing)}")
    r = check_residuated(A)
    if not r:
        raise NotResiduated(f"residuation fails at {r.witness}")
    if A.has("par") and A.has("dlres") and A.has("drres"):
        r = check_dual_residuated(A)
        if not r:
            raise NotResiduated(f"dual residuation fails at {r.witness}")
    L = A.carrier
    spec = prime_filters(L)
    Fs = tuple(spec.masks())
    n = len(Fs)
    if n > cap:
        raise SizeLimitExceeded(f"{n} prime filters exceed the cap of {cap}")
    E = range(L.size)
    t, lr, rr = A.tensor, A.lres, A.rres
    gI = [0 if _member(F, A.I) else 1 for F in Fs]
    gT, gL, gR = [], [], []
    for F in Fs:
        gT.append({(i, j) for i, j in itertools.product(range(n), repeat=2)
                   if all(_member(F, t[a][b]) for a in bits(Fs[i]) for b in bits(Fs[j]))})
        gL.append({(i, j) for i, j in itertools.product(range(n), repeat=2)
                   if all(_member(Fs[j], b) for a in bits(Fs[i]) for b in E if _member(F, lr[a][b]))})
        gR.append({(i, j) for i, j in itertools.product(range(n), repeat=2)
                   if all(_member(Fs[i], a) for a in E for b in bits(Fs[j]) if _member(F, rr[a][b]))})
    dual = None
    if A.has("J") and A.has("par"):
        p = A.par
        gJ = tuple(1 if _member(F, A.J) else 0 for F in Fs)
        gP, gDL, gDR = [], [], []
        for F in Fs:
            gP.append(frozenset((i, j) for i, j in itertools.product(range(n), repeat=2)
                                if all(_member(Fs[i], a) or _member(Fs[j], b)
                                       for a in E for b in E if _member(F, p[a][b]))))
            if A.has("dlres"):
                dl = A.dlres
                gDL.append(frozenset((i, j) for i, j in itertools.product(range(n), repeat=2)
                                     if all(_member(F, dl[a][b]) for a in E if not _member(Fs[i], a)
                                            for b in bits(Fs[j]))))
            if A.has("drres"):
                dr = A.drres
                gDR.append(frozenset((i, j) for i, j in itertools.product(range(n), repeat=2)
                                     if all(_member(F, dr[a][b]) for a in bits(Fs[i])
                                            for b in E if not _member(Fs[j], b))))
        empty = tuple(frozenset() for _ in range(n))
        dual = DualBlock(gJ, tuple(gP), tuple(gDL) or empty, tuple(gDR) or empty)
    modal = None
    if A.has("dia") or A.has("box"):
        dia = [frozenset(g for g in range(n) if all(_member(F, A.dia[a]) for a in bits(Fs[g])))
               if A.has("dia") else frozenset() for F in Fs]
        box = [frozenset(g for g in range(n) if all(_member(Fs[g], a) for a in E if _member(F, A.box[a])))
               if A.has("box") else frozenset() for F in Fs]
        modal = (tuple(dia), tuple(box))
    frame = ResourceFrame(spec.poset, tuple(gI), tuple(frozenset(s) for s in gT), tuple(frozenset(s) for s in gL),
                          tuple(frozenset(s) for s in gR), dual, modal,
                          labels=tuple(tuple(bits(F)) for F in Fs))
    return CanonicalFrame(frame, A, Fs)


def model_valuation(cf: CanonicalFrame, v: dict) -> dict:
    """p is true at exactly the prime filters containing v(p)."""
    return {k: sum(1 << i for i, F in enumerate(cf.filters) if _member(F, a)) for k, a in v.items()}


def as_tensor_frame(cf: CanonicalFrame) -> ResourceFrame:
    """The canonical frame rebuilt from its tensor successors alone."""
    f = cf.frame
    return frame_from_tensor(f.worlds, f.gammaI, f.gammaTensor, labels=f.labels)


def verify_existence_lemmas(A: DLE) -> dict:
    """For every prime filter and argument pair, search successors realising each membership fact."""
    cf = canonical_frame(A)
    f, Fs = cf.frame, cf.filters
    failures = []
    checked = 0
    E = range(A.carrier.size)

    def record(kind, w, a, b, lhs, rhs):
        nonlocal checked
        checked += 1
        if lhs != rhs:
            failures.append({"kind": kind, "world": w, "a": a, "b": b, "member": lhs})

    for w, F in enumerate(Fs):
        for a in E:
            for b in E:
                record("tensor", w, a, b, bool(_member(F, A.tensor[a][b])),
                       any(_member(Fs[i], a) and _member(Fs[j], b) for i, j in f.gammaTensor[w]))
                record("lres", w, a, b, not _member(F, A.lres[a][b]),
                       any(_member(Fs[i], a) and not _member(Fs[j], b) for i, j in f.gammaLRes[w]))
                record("rres", w, a, b, not _member(F, A.rres[a][b]),
                       any(not _member(Fs[i], a) and _member(Fs[j], b) for i, j in f.gammaRRes[w]))
                if f.dual is not None:
                    record("par", w, a, b, not _member(F, A.par[a][b]),
                           any(not _member(Fs[i], a) and not _member(Fs[j], b) for i, j in f.dual.gammaPar[w]))
                    if A.has("dlres"):
                        record("dlres", w, a, b, bool(_member(F, A.dlres[a][b])),
                               any(not _member(Fs[i], a) and _member(Fs[j], b) for i, j in f.dual.gammaDLRes[w]))
                    if A.has("drres"):
                        record("drres", w, a, b, bool(_member(F, A.drres[a][b])),
                               any(_member(Fs[i], a) and not _member(Fs[j], b) for i, j in f.dual.gammaDRRes[w]))
            if f.modal is not None:
                if A.has("dia"):
                    record("dia", w, a, None, bool(_member(F, A.dia[a])), any(_member(Fs[g], a) for g in f.modal[0][w]))
                if A.has("box"):
                    record("box", w, a, None, not _member(F, A.box[a]),
                           any(not _member(Fs[g], a) for g in f.modal[1][w]))
    return {"ok": not failures, "checked": checked, "failures": failures}


def jt_extension(A: DLE) -> DLE:
    """The complex algebra of the canonical frame on the upsets of prime filters."""
    cf = canonical_frame(A)
    U = upset_lattice(cf.frame.worlds, DEFAULT_UPSET_CAP)
    masks = list(U.labels)
    index = {m: i for i, m in enumerate(masks)}
    tables = {}
    for sym in A.signature:
        if sym in ("I", "J"):
            tables[sym] = index[apply_op(cf.frame, sym)]
        elif sym in ("dia", "box"):
            tables[sym] = [index[apply_op(cf.frame, sym, u)] for u in masks]
        else:
            tables[sym] = [[index[apply_op(cf.frame, sym, u, v)] for v in masks] for u in masks]
    return validate_dle(U, tables, (A.name + "^JT") if A.name else None)


def compare_jt_canext(A: DLE) -> Verdict:
    """Cell-by-cell comparison of the JT algebra with the sigma-extension."""
    ce = canonical_extension(A.carrier)
    ext = extend_dle(A, ce)
    jt = jt_extension(A)
    if list(ce.carrier.labels) != list(jt.carrier.labels):
        return Verdict(False, [("carrier", None, None, None)])
    mismatches = []
    for sym in A.signature:
        x, y = ext.tables[sym], jt.tables[sym]
        if isinstance(x, int):
            if x != y:
                mismatches.append((sym, (), x, y))
        elif isinstance(x[0], int):
            mismatches += [(sym, (i,), x[i], y[i]) for i in range(len(x)) if x[i] != y[i]]
        else:
            mismatches += [(sym, (i, j), x[i][j], y[i][j]) for i in range(len(x)) for j in range(len(x))
                           if x[i][j] != y[i][j]]
    return Verdict(not mismatches, mismatches or None)


class Inconsistent(NamedTuple):
    meet: int
    join: int

    def __bool__(self):
        return False


class World(NamedTuple):
    index: int
    filter: FilterSet
    verified: bool


def truth_lemma_check(A: DLE, Phi, Psi, v: dict):
    """A prime filter satisfying all of Phi and none of Psi, or Inconsistent."""
    L = A.carrier
    Phi = [sx.parse(p) if isinstance(p, str) else p for p in Phi]
    Psi = [sx.parse(p) if isinstance(p, str) else p for p in Psi]
    m = L.meet_all(eval_term(p, A, v) for p in Phi)
    j = L.join_all(eval_term(p, A, v) for p in Psi)
    if L.leq(m, j):
        return Inconsistent(m, j)
    F = separate(L, L.principal_filter(m), L.principal_ideal(j))
    cf = canonical_frame(A)
    w = cf.world_of(F.members)
    val = model_valuation(cf, v)
    ok = all(denote_mask(p, cf.frame, val) >> w & 1 for p in Phi) and \
        not any(denote_mask(p, cf.frame, val) >> w & 1 for p in Psi)
    return World(w, F, ok)


def truth_lemma_table(A: DLE, formulas, names) -> Verdict:
    """F in the denotation of phi iff the value of phi lies in F, for every valuation and world."""
    cf = canonical_frame(A)
    for args in itertools.product(range(A.carrier.size), repeat=len(names)):
        v = dict(zip(names, args))
        val = model_valuation(cf, v)
        for phi in formulas:
            den = denote_mask(phi, cf.frame, val)
            a = eval_term(phi, A, v)
            want = sum(1 << i for i, F in enumerate(cf.filters) if _member(F, a))
            if den != want:
                return Verdict(False, (sx.to_text(phi), v))
    return Verdict(True)
