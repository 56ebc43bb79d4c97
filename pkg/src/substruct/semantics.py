"""Model checking over resource frames.

Denotations are world sets stored as bitmasks.  Each connective reads its
own component of the frame:

* ``a * b`` holds at w when some (x, y) in the tensor successors of w has
  x in a and y in b;
* ``a -* c`` holds at w when every (x, y) in the left-residual successors
  with x in a has y in c;
* ``c *- b`` holds at w when every (x, z) in the right-residual successors
  with z in b has x in c;
* ``a + b`` holds when every par successor (x, y) has x in a or y in b;
* ``a -+ c`` holds when some successor (x, y) has x outside a and y in c;
* ``c +- b`` holds when some successor (x, y) has x in c and y outside b;
* ``I`` holds where the unit flag is 0 and ``J`` where its flag is 1;
* ``<>a`` and ``[]a`` read the first and second modal successor sets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import syntax as sx
from .algebra import Verdict, enumerate_residuated, holds
from .frames import (FrameError, ResourceFrame, biclosed_tensors, check_rcc, frame_from_tensor,
                     frame_to_json, frame_from_json, small_posets)
from .lattice import bits, enumerate_dls, mask_of


class MissingDualBlock(FrameError):
    pass


class NotUpset(ValueError):
    pass


@dataclass(frozen=True)
class Model:
    frame: ResourceFrame
    valuation: dict

    def __post_init__(self):
        P = self.frame.worlds
        for name, m in self.valuation.items():
            if not P.is_upset(m):
                raise NotUpset(f"the value of {name} is not an upset")

    def worlds_of(self, name):
        return sorted(bits(self.valuation[name]))

    def to_json(self):
        return {"frame": frame_to_json(self.frame),
                "valuation": {k: sorted(bits(m)) for k, m in sorted(self.valuation.items())}}


def model_from_json(obj) -> Model:
    frame = frame_from_json(obj["frame"])
    return Model(frame, {k: mask_of(v) for k, v in obj.get("valuation", {}).items()})


@dataclass(frozen=True)
class NotFound:
    bounds: dict
    examined: int

    def __bool__(self):
        return False


# successor tables, built once per frame and memoised per argument pair

def _succ(frame: ResourceFrame):
    c = frame._cache
    if "succ" not in c:
        s = {"tensor": [sorted(g) for g in frame.gammaTensor],
             "lres": [sorted(g) for g in frame.gammaLRes],
             "rres": [sorted(g) for g in frame.gammaRRes]}
        if frame.dual is not None:
            s["par"] = [sorted(g) for g in frame.dual.gammaPar]
            s["dlres"] = [sorted(g) for g in frame.dual.gammaDLRes]
            s["drres"] = [sorted(g) for g in frame.dual.gammaDRRes]
        if frame.modal is not None:
            s["dia"] = [mask_of(g) for g in frame.modal[0]]
            s["box"] = [mask_of(g) for g in frame.modal[1]]
        c["succ"] = s
        c["memo"] = {}
    return c["succ"], c["memo"]


def _binary(sym, rows, a, b):
    out = 0
    for w, pairs in enumerate(rows):
        if sym == "tensor":
            ok = any(a >> x & 1 and b >> y & 1 for x, y in pairs)
        elif sym == "lres":
            ok = all(b >> y & 1 for x, y in pairs if a >> x & 1)
        elif sym == "rres":
            ok = all(a >> x & 1 for x, z in pairs if b >> z & 1)
        elif sym == "par":
            ok = all(a >> x & 1 or b >> y & 1 for x, y in pairs)
        elif sym == "dlres":
            ok = any(not a >> x & 1 and b >> y & 1 for x, y in pairs)
        else:  # drres
            ok = any(a >> x & 1 and not b >> y & 1 for x, y in pairs)
        if ok:
            out |= 1 << w
    return out


def apply_op(frame: ResourceFrame, sym: str, *args) -> int:
    """The complex-algebra operation ``sym`` on world masks."""
    succ, memo = _succ(frame)
    key = (sym,) + args
    r = memo.get(key)
    if r is not None:
        return r
    n = frame.size
    if sym == "I":
        r = mask_of(w for w in range(n) if frame.gammaI[w] == 0)
    elif sym == "J":
        if frame.dual is None:
            raise MissingDualBlock("J needs a dual block")
        r = mask_of(w for w in range(n) if frame.dual.gammaJ[w] == 1)
    elif sym in ("dia", "box"):
        if sym not in succ:
            raise sx.FragmentViolation("modal operators need a modal block")
        a = args[0]
        rows = succ[sym]
        r = mask_of(w for w in range(n) if (rows[w] & a if sym == "dia" else rows[w] & ~a == 0))
    else:
        if sym not in succ:
            raise MissingDualBlock(f"{sym} needs a dual block")
        r = _binary(sym, succ[sym], *args)
    memo[key] = r
    return r


_NODE = {sx.Fuse: "tensor", sx.LRes: "lres", sx.RRes: "rres", sx.Par: "par", sx.DLRes: "dlres",
         sx.DRRes: "drres", sx.Dia: "dia", sx.Box: "box"}


def denote_mask(phi: sx.Formula, frame: ResourceFrame, val: dict) -> int:
    full = frame.worlds.full
    if isinstance(phi, sx.Var):
        if phi.name not in val:
            raise sx.UnknownVariable(phi.name)
        return val[phi.name]
    if isinstance(phi, sx.Top):
        return full
    if isinstance(phi, sx.Bot):
        return 0
    if isinstance(phi, sx.UnitI):
        return apply_op(frame, "I")
    if isinstance(phi, sx.UnitJ):
        return apply_op(frame, "J")
    if isinstance(phi, sx.And):
        return denote_mask(phi.l, frame, val) & denote_mask(phi.r, frame, val)
    if isinstance(phi, sx.Or):
        return denote_mask(phi.l, frame, val) | denote_mask(phi.r, frame, val)
    sym = _NODE[type(phi)]
    if sym in ("dia", "box"):
        return apply_op(frame, sym, denote_mask(phi.x, frame, val))
    return apply_op(frame, sym, denote_mask(phi.l, frame, val), denote_mask(phi.r, frame, val))


def denote(phi: sx.Formula, M: Model) -> frozenset:
    return frozenset(bits(denote_mask(phi, M.frame, M.valuation)))


def fused_denote(phi: sx.Formula, M: Model) -> frozenset:
    """Denotation over the product of the residuated and dual blocks."""
    if M.frame.dual is None:
        raise MissingDualBlock("fused evaluation needs a dual block")
    return denote(phi, M)


def upset_check(phi: sx.Formula, M: Model) -> bool:
    return M.frame.worlds.is_upset(denote_mask(phi, M.frame, M.valuation))


def upset_valuations(frame: ResourceFrame, names):
    ups = frame.worlds.upsets()
    for combo in itertools.product(ups, repeat=len(names)):
        yield dict(zip(names, combo))


def _fails(frame, e, val):
    a = denote_mask(e.lhs, frame, val)
    b = denote_mask(e.rhs, frame, val)
    return a != b if e.relation == "==" else a & ~b != 0


def frame_valid(frame: ResourceFrame, e: sx.Inequation, var_cap: int = 3) -> Verdict:
    """Check e under every upset valuation; the witness maps variables to world lists."""
    names = e.variables()
    if len(names) > var_cap:
        raise sx.FormulaError(f"{len(names)} variables exceed the cap of {var_cap}")
    for val in upset_valuations(frame, names):
        if _fails(frame, e, val):
            return Verdict(False, {k: sorted(bits(m)) for k, m in val.items()})
    return Verdict(True)


def frame_valid_all(frame: ResourceFrame, eqs, var_cap: int = 3) -> Verdict:
    for e in eqs:
        r = frame_valid(frame, e, var_cap)
        if not r:
            return Verdict(False, (str(e), r.witness))
    return Verdict(True)


def satisfaction_table(frame: ResourceFrame, formulas, names) -> list:
    """Denotation masks of each formula under each upset valuation (for comparisons)."""
    return [[denote_mask(f, frame, val) for f in formulas] for val in upset_valuations(frame, names)]


def _ops_for(signature):
    consts = [("T", None), ("_|_", None)]
    binary = ["and", "or"]
    unary = []
    if sx.RL in signature:
        consts.append(("I", None))
        binary += ["tensor", "lres", "rres"]
    if sx.RLD in signature:
        consts.append(("J", None))
        binary += ["par", "dlres", "drres"]
    if sx.ML in signature:
        unary += ["dia", "box"]
    return consts, unary, binary


def _eval_sym(frame, sym, *args):
    if sym == "T":
        return frame.worlds.full
    if sym == "_|_":
        return 0
    if sym == "and":
        return args[0] & args[1]
    if sym == "or":
        return args[0] | args[1]
    return apply_op(frame, sym, *args)


def denotation_tuples(frames, val, depth, signature=(sx.RL,)) -> set:
    """Tuples (denotation in each frame) realised by formulas up to ``depth`` at ``val``.

    Formulas with equal denotation tuples behave identically as subformulas,
    so this layered closure covers every formula of that depth without
    listing them.  Atoms have depth 0.
    """
    consts, unary, binary = _ops_for(signature)
    names = sorted(val)
    level = set()
    for k in names:
        v = val[k]
        level.add(v if isinstance(v, tuple) else tuple(v for _ in frames))
    for c, _ in consts:
        level.add(tuple(_eval_sym(f, c) for f in frames))
    seen = set(level)
    for _ in range(depth):
        new = set()
        for sym in unary:
            for t in seen:
                new.add(tuple(_eval_sym(f, sym, x) for f, x in zip(frames, t)))
        items = list(seen)
        for sym in binary:
            for t in items:
                for u in items:
                    new.add(tuple(_eval_sym(f, sym, x, y) for f, x, y in zip(frames, t, u)))
        seen |= new
    return seen


# countermodel search

def _rl_only(e):
    frags = sx.fragments(e.lhs) | sx.fragments(e.rhs)
    return frags <= {sx.LATTICE, sx.BOUNDS, sx.RL}


def _algebraic_route(e, max_elements, max_worlds, budget, counter):
    from .jt import canonical_frame, model_valuation
    for L in enumerate_dls(max_elements):
        for A in enumerate_residuated(L, max_elements=max_elements):
            counter[0] += 1
            if counter[0] > budget:
                return None
            r = holds(A, e)
            if r:
                continue
            cf = canonical_frame(A)
            if cf.frame.size > max_worlds:
                continue
            M = Model(cf.frame, model_valuation(cf, r.witness))
            if _fails(cf.frame, e, M.valuation):
                return M, {"route": "algebraic", "algebra": A.to_json(), "valuation": r.witness}
    return None


def _frame_route(e, max_worlds, seed, budget, counter, sample):
    names = e.variables()
    for n in range(1, max_worlds + 1):
        for P in small_posets(n):
            units = P.upsets()
            for gT, _ in biclosed_tensors(P, sample=sample, seed=seed):
                counter[0] += 1
                if counter[0] > budget:
                    return None
                if not check_rcc(gT, P):
                    continue
                for u in units:
                    gI = [0 if u >> w & 1 else 1 for w in range(n)]
                    frame = frame_from_tensor(P, gI, gT, check=False)
                    r = frame_valid(frame, e, var_cap=max(3, len(names)))
                    if not r:
                        val = {k: mask_of(v) for k, v in r.witness.items()}
                        return Model(frame, val), {"route": "frame"}
    return None


def countermodel_search(e: sx.Inequation, max_worlds: int = 4, max_elements: int = 4, seed: int = 0,
                        budget: int = 20000, sample: int = 2000, with_info: bool = False):
    """Look for a finite model refuting e: small algebras first, then small frames.

    Returns a :class:`Model` or :class:`NotFound`; with ``with_info`` a pair
    (result, info) where info says which route succeeded.
    """
    if isinstance(e, str):
        e = sx.parse_inequation(e)
    counter = [0]
    hit = None
    if _rl_only(e):
        hit = _algebraic_route(e, max_elements, max_worlds, budget, counter)
        if hit is None and counter[0] <= budget:
            hit = _frame_route(e, max_worlds, seed, budget, counter, sample)
    if hit is None:
        res = NotFound({"max_worlds": max_worlds, "max_elements": max_elements, "seed": seed,
                        "budget": budget}, counter[0])
        return (res, {"route": None}) if with_info else res
    return hit if with_info else hit[0]


def is_countermodel(M: Model, e: sx.Inequation) -> bool:
    return _fails(M.frame, e, M.valuation)

