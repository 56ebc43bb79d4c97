"""Finite resource frames: posets with convex-set-valued successor maps.

A frame has a unit flag ``gammaI`` (0 marks unit states) and three maps
from worlds to sets of world pairs: ``gammaTensor`` on W x W,
``gammaLRes`` on W^op x W and ``gammaRRes`` on W x W^op.  An optional dual
block carries ``gammaJ``, ``gammaPar``, ``gammaDLRes``, ``gammaDRRes`` of
the same shapes, and an optional modal block a pair of world-set maps.

Product orders with reversed coordinates are described by a polarity
vector: ``(1, 1)`` for W x W, ``(-1, 1)`` for W^op x W and ``(1, -1)`` for
W x W^op.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field, replace

from .algebra import Verdict
from .lattice import FinitePoset, SizeLimitExceeded, bits

TENSOR = (1, 1)
LRES = (-1, 1)
RRES = (1, -1)

# which way each closure reaches: -1 adds smaller points, +1 larger ones
CLOSE_TENSOR = (-1, -1)
CLOSE_LRES = (-1, 1)
CLOSE_RRES = (1, -1)
CLOSE_PAR = (1, 1)
CLOSE_DLRES = (1, -1)
CLOSE_DRRES = (-1, 1)

DEFAULT_WORLD_CAP = 4096


class FrameError(ValueError):
    pass


class BaseMismatch(FrameError):
    pass


class NotConvex(FrameError):
    def __init__(self, w, component, witness=None):
        self.w, self.component, self.witness = w, component, witness
        super().__init__(f"{component}({w}) is not convex: {witness}")


class NotMonotone(FrameError):
    def __init__(self, w, w2, component):
        self.w, self.w2, self.component = w, w2, component
        super().__init__(f"{component} is not monotone: {w} <= {w2} but images are not Egli-Milner ordered")


class RCCViolated(FrameError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"residuation compatibility fails: {witness}")


class DualBlockMissing(FrameError):
    pass


def pair_leq(P: FinitePoset, pol, p, q) -> bool:
    return all(P.leq(a, b) if s > 0 else P.leq(b, a) for s, a, b in zip(pol, p, q))


@dataclass(frozen=True)
class ConvexSet:
    """A set of points of a product of copies of a poset with a polarity per coordinate."""

    base: FinitePoset
    polarity: tuple
    members: frozenset

    def leq(self, p, q):
        return pair_leq(self.base, self.polarity, p, q)

    def is_convex(self):
        return is_convex(self.base, self.polarity, self.members)


def is_convex(P, pol, S) -> bool:
    return convexity_witness(P, pol, S) is None


def convexity_witness(P, pol, S):
    S = set(S)
    if len(S) < 2:
        return None
    k = len(pol)
    for lo in S:
        for hi in S:
            if lo == hi or not pair_leq(P, pol, lo, hi):
                continue
            ranges = []
            for c in range(k):
                a, b = (lo[c], hi[c]) if pol[c] > 0 else (hi[c], lo[c])
                ranges.append([m for m in bits(P.up[a] & P.down[b])])
            for mid in itertools.product(*ranges):
                if mid not in S:
                    return (lo, mid, hi)
    return None


def em_leq(P, pol, U, V) -> bool:
    """Egli-Milner: every u has some v above it, every v has some u below it."""
    return all(any(pair_leq(P, pol, u, v) for v in V) for u in U) and \
        all(any(pair_leq(P, pol, u, v) for u in U) for v in V)


def egli_milner_leq(U: ConvexSet, V: ConvexSet) -> bool:
    if U.base != V.base or U.polarity != V.polarity:
        raise BaseMismatch("sets live over different product posets")
    return em_leq(U.base, U.polarity, U.members, V.members)


def _norm(gamma):
    return tuple(frozenset(tuple(p) for p in g) for g in gamma)


@dataclass(frozen=True)
class DualBlock:
    gammaJ: tuple
    gammaPar: tuple
    gammaDLRes: tuple
    gammaDRRes: tuple


@dataclass(frozen=True)
class ResourceFrame:
    worlds: FinitePoset
    gammaI: tuple
    gammaTensor: tuple
    gammaLRes: tuple
    gammaRRes: tuple
    dual: DualBlock | None = None
    modal: tuple | None = None
    labels: tuple | None = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def size(self):
        return self.worlds.size

    def components(self):
        out = [("gammaTensor", TENSOR, self.gammaTensor), ("gammaLRes", LRES, self.gammaLRes),
               ("gammaRRes", RRES, self.gammaRRes)]
        if self.dual is not None:
            out += [("gammaPar", TENSOR, self.dual.gammaPar), ("gammaDLRes", LRES, self.dual.gammaDLRes),
                    ("gammaDRRes", RRES, self.dual.gammaDRRes)]
        return out

    def __repr__(self):
        return f"<ResourceFrame worlds={self.size} dual={self.dual is not None}>"


def make_frame(P: FinitePoset, gammaI, gT, gL, gR, dual=None, modal=None, labels=None) -> ResourceFrame:
    if dual is not None and not isinstance(dual, DualBlock):
        dual = DualBlock(tuple(dual[0]), *(_norm(g) for g in dual[1:]))
    if modal is not None:
        modal = tuple(tuple(frozenset(s) for s in m) for m in modal)
    return ResourceFrame(P, tuple(int(x) for x in gammaI), _norm(gT), _norm(gL), _norm(gR), dual, modal, labels)


def validate_frame(frame: ResourceFrame, unit_order: str | None = None) -> ResourceFrame:
    """Check convexity and Egli-Milner monotonicity of every component.

    ``unit_order`` may be "zero-bottom" or "zero-top" to also demand that the
    unit flag is monotone for that order on {0, 1}; by default the flag is
    only reported on by :func:`unit_orientation`.
    """
    P = frame.worlds
    n = P.size
    comps = frame.components()
    for name, pol, gamma in comps:
        if len(gamma) != n:
            raise FrameError(f"{name} is not total")
        for w in range(n):
            for p in gamma[w]:
                if not all(0 <= c < n for c in p):
                    raise FrameError(f"{name}({w}) mentions a world out of range")
            wit = convexity_witness(P, pol, gamma[w])
            if wit is not None:
                raise NotConvex(w, name, wit)
    for name, pol, gamma in comps:
        for w in range(n):
            for w2 in bits(P.up[w]):
                if w2 != w and not em_leq(P, pol, gamma[w], gamma[w2]):
                    raise NotMonotone(w, w2, name)
    if frame.modal is not None:
        for k, m in enumerate(frame.modal):
            for w in range(n):
                for w2 in bits(P.up[w]):
                    if w2 != w and not em_leq(P, (1,), [(x,) for x in m[w]], [(x,) for x in m[w2]]):
                        raise NotMonotone(w, w2, ("dia", "box")[k])
    flags = [("gammaI", frame.gammaI)] + ([("gammaJ", frame.dual.gammaJ)] if frame.dual else [])
    for name, g in flags:
        if len(g) != n or any(x not in (0, 1) for x in g):
            raise FrameError(f"{name} must map every world to 0 or 1")
        if unit_order is not None:
            sign = 1 if unit_order == "zero-bottom" else -1
            for w in range(n):
                for w2 in bits(P.up[w]):
                    if sign * (g[w2] - g[w]) < 0:
                        raise NotMonotone(w, w2, name)
    return frame


def unit_orientation(frame: ResourceFrame) -> dict:
    """Report both monotonicity readings of the unit flags and whether their denotations are upsets."""
    P = frame.worlds
    out = {}
    flags = [("I", frame.gammaI, 0)]
    if frame.dual is not None:
        flags.append(("J", frame.dual.gammaJ, 1))
    for name, g, marker in flags:
        pairs = [(w, w2) for w in range(P.size) for w2 in bits(P.up[w])]
        den = sum(1 << w for w in range(P.size) if g[w] == marker)
        out[name] = {
            "monotone_zero_bottom": all(g[w] <= g[w2] for w, w2 in pairs),
            "monotone_zero_top": all(g[w] >= g[w2] for w, w2 in pairs),
            "denotation_is_upset": P.is_upset(den),
        }
    return out


def close(gamma, P: FinitePoset, direction) -> tuple:
    """Pointwise closure; direction -1 per coordinate adds points below, +1 above."""
    out = []
    for S in gamma:
        acc = set()
        for p in S:
            ranges = [list(bits(P.down[c] if d < 0 else P.up[c])) for d, c in zip(direction, p)]
            acc.update(itertools.product(*ranges))
        out.append(frozenset(acc))
    return tuple(out)


def close_tensor(gamma, P):
    return close(gamma, P, CLOSE_TENSOR)


def close_lres(gamma, P):
    return close(gamma, P, CLOSE_LRES)


def close_rres(gamma, P):
    return close(gamma, P, CLOSE_RRES)


def closure_frame(frame: ResourceFrame) -> ResourceFrame:
    """The frame with every residuated-block component replaced by its closure."""
    P = frame.worlds
    dual = frame.dual
    if dual is not None:
        dual = DualBlock(dual.gammaJ, close(dual.gammaPar, P, CLOSE_PAR),
                         close(dual.gammaDLRes, P, CLOSE_DLRES), close(dual.gammaDRRes, P, CLOSE_DRRES))
    return ResourceFrame(P, frame.gammaI, close_tensor(frame.gammaTensor, P),
                         close_lres(frame.gammaLRes, P), close_rres(frame.gammaRRes, P),
                         dual, frame.modal, frame.labels)


def overline(gamma, n=None) -> tuple:
    """z -> {(y, x) : (y, z) in gamma(x)}."""
    n = len(gamma) if n is None else n
    out = [set() for _ in range(n)]
    for x in range(n):
        for y, z in gamma[x]:
            out[z].add((y, x))
    return tuple(frozenset(s) for s in out)


def underline(gamma, n=None) -> tuple:
    """y -> {(x, z) : (y, z) in gamma(x)}."""
    n = len(gamma) if n is None else n
    out = [set() for _ in range(n)]
    for x in range(n):
        for y, z in gamma[x]:
            out[y].add((x, z))
    return tuple(frozenset(s) for s in out)


def check_rcc(gamma, P: FinitePoset) -> Verdict:
    """Both Egli-Milner conditions of residuation compatibility."""
    over, under = overline(gamma, P.size), underline(gamma, P.size)
    for z in range(P.size):
        for z2 in bits(P.up[z]):
            if z2 != z and not em_leq(P, LRES, over[z], over[z2]):
                return Verdict(False, ("overline", z, z2))
    for y in range(P.size):
        for y2 in bits(P.up[y]):
            if y2 != y and not em_leq(P, RRES, under[y], under[y2]):
                return Verdict(False, ("underline", y, y2))
    return Verdict(True)


def check_monotone(gamma, P: FinitePoset, pol=TENSOR) -> Verdict:
    for w in range(P.size):
        for w2 in bits(P.up[w]):
            if w2 != w and not em_leq(P, pol, gamma[w], gamma[w2]):
                return Verdict(False, (w, w2))
    return Verdict(True)


def _require_tensor_shape(P, gamma, name):
    gamma = _norm(gamma)
    if len(gamma) != P.size:
        raise FrameError(f"{name} is not total")
    for w in range(P.size):
        wit = convexity_witness(P, TENSOR, gamma[w])
        if wit is not None:
            raise NotConvex(w, name, wit)
    mono = check_monotone(gamma, P)
    if not mono:
        raise NotMonotone(*mono.witness, name)
    rcc = check_rcc(gamma, P)
    if not rcc:
        raise RCCViolated(rcc.witness)
    return gamma


def frame_from_tensor(P: FinitePoset, gammaI, gammaTensor, check: bool = True, labels=None) -> ResourceFrame:
    """Complete a tensor component into a frame using its two transposes."""
    g = _require_tensor_shape(P, gammaTensor, "gammaTensor") if check else _norm(gammaTensor)
    return ResourceFrame(P, tuple(int(x) for x in gammaI), g, overline(g, P.size), underline(g, P.size),
                         labels=labels)


def with_dual(frame: ResourceFrame, gammaJ, gammaPar, check: bool = True) -> ResourceFrame:
    """Attach a dual block rebuilt from its par component."""
    P = frame.worlds
    g = _require_tensor_shape(P, gammaPar, "gammaPar") if check else _norm(gammaPar)
    dual = DualBlock(tuple(int(x) for x in gammaJ), g, overline(g, P.size), underline(g, P.size))
    return replace(frame, dual=dual, _cache={})


def transpose_comparison(frame: ResourceFrame, mode: str = "exact") -> Verdict:
    """Does the frame have the shape rebuilt from its tensor?

    ``exact`` compares the residual components with the transposes directly,
    ``closure`` compares them after the matching closures.
    """
    P = frame.worlds
    over, under = overline(frame.gammaTensor, P.size), underline(frame.gammaTensor, P.size)
    if mode == "exact":
        pairs = [("gammaLRes", frame.gammaLRes, over), ("gammaRRes", frame.gammaRRes, under)]
    else:
        pairs = [("gammaLRes", close_lres(frame.gammaLRes, P), close_lres(over, P)),
                 ("gammaRRes", close_rres(frame.gammaRRes, P), close_rres(under, P))]
    for name, got, want in pairs:
        for w in range(P.size):
            if got[w] != want[w]:
                return Verdict(False, (name, w))
    return Verdict(True)


def triple_biconditional(frame: ResourceFrame) -> Verdict:
    """(y,z) in closed tensor(x) iff (y,x) in closed lres(z) iff (x,z) in closed rres(y)."""
    P = frame.worlds
    n = P.size
    T = close_tensor(frame.gammaTensor, P)
    L = close_lres(frame.gammaLRes, P)
    R = close_rres(frame.gammaRRes, P)
    for x in range(n):
        for y in range(n):
            for z in range(n):
                a, b, c = (y, z) in T[x], (y, x) in L[z], (x, z) in R[y]
                if not (a == b == c):
                    return Verdict(False, (x, y, z))
    return Verdict(True)


def dual_triple_biconditional(frame: ResourceFrame) -> Verdict:
    if frame.dual is None:
        raise DualBlockMissing("frame has no dual block")
    P = frame.worlds
    n = P.size
    T = close(frame.dual.gammaPar, P, CLOSE_PAR)
    L = close(frame.dual.gammaDLRes, P, CLOSE_DLRES)
    R = close(frame.dual.gammaDRRes, P, CLOSE_DRRES)
    for x in range(n):
        for y in range(n):
            for z in range(n):
                a, b, c = (y, z) in T[x], (y, x) in L[z], (x, z) in R[y]
                if not (a == b == c):
                    return Verdict(False, (x, y, z))
    return Verdict(True)


def check_unit_condition(frame: ResourceFrame, var_cap: int = 1) -> Verdict:
    """FC1 read semantically; the structural reading is attached as a diagnostic."""
    from . import semantics
    from .syntax import instantiate
    P = frame.worlds
    T = close_tensor(frame.gammaTensor, P)
    units = {w for w in range(P.size) if frame.gammaI[w] == 0}
    structural = all(any(a == w and b in units for a, b in T[w]) and any(b == w and a in units for a, b in T[w])
                     for w in range(P.size))
    for e in instantiate("FC1"):
        r = semantics.frame_valid(frame, e, var_cap=max(var_cap, 1))
        if not r:
            return Verdict(False, {"equation": str(e), "valuation": r.witness, "structural": structural})
    return Verdict(True, {"structural": structural})


def check_structural(frame: ResourceFrame, rule: str) -> Verdict:
    """Exchange, contraction and the two weakening rules read on the frame."""
    P = frame.worlds
    n = P.size
    rule = {"exchange": "e", "contraction": "c", "left-weakening": "lw", "right-weakening": "rw"}.get(rule, rule)
    if rule == "e":
        T = close_tensor(frame.gammaTensor, P)
        for x in range(n):
            for y, z in sorted(frame.gammaTensor[x]):
                if (z, y) not in T[x]:
                    return Verdict(False, (x, y, z))
        return Verdict(True)
    if rule == "c":
        for x in range(n):
            if not any(P.leq(x, y) and P.leq(x, z) for y, z in frame.gammaTensor[x]):
                return Verdict(False, x)
        return Verdict(True)
    if rule == "lw":
        bad = next((w for w in range(n) if frame.gammaI[w] != 0), None)
        return Verdict(bad is None, bad)
    if rule == "rw":
        if frame.dual is None:
            raise DualBlockMissing("right weakening needs a dual block")
        bad = next((w for w in range(n) if frame.dual.gammaJ[w] != 0), None)
        return Verdict(bad is None, bad)
    raise ValueError(f"unknown structural rule {rule!r}")


# heaps

def heap_worlds(n: int, v: int, cap: int = DEFAULT_WORLD_CAP):
    """All partial maps {1..n} -> {1..v} as tuples with 0 for undefined, and their order."""
    if (v + 1) ** n > cap:
        raise SizeLimitExceeded(f"{(v + 1) ** n} heaps exceed the cap of {cap}")
    worlds = list(itertools.product(range(v + 1), repeat=n))
    leq = [(i, j) for i, f in enumerate(worlds) for j, g in enumerate(worlds)
           if all(a == 0 or a == b for a, b in zip(f, g))]
    return worlds, FinitePoset(len(worlds), leq, closed=True)


def _dom(f):
    return frozenset(i for i, a in enumerate(f) if a)


def heap_frame(addresses: int, values: int, unit_upset=None, par: str = "restrict",
               cap: int = DEFAULT_WORLD_CAP, check: bool = False) -> ResourceFrame:
    """The heap model over partial maps ordered by extension.

    With ``unit_upset`` (world indices or heap tuples) a dual block is added:
    J holds exactly on the upset and ``par`` selects the par component.
    "restrict" pairs (g, h) whose domains meet exactly in dom(f) and which
    agree with each other there; "agree" further asks them to agree with f.
    The residual components are the transposes of the tensor.  With
    ``check`` the construction raises when monotonicity or residuation
    compatibility fails; by default those are left to the caller.
    """
    worlds, P = heap_worlds(addresses, values, cap)
    index = {f: i for i, f in enumerate(worlds)}
    n = len(worlds)
    doms = [_dom(f) for f in worlds]
    gI = [0 if not doms[i] else 1 for i in range(n)]
    gT = []
    for i in range(n):
        gT.append({(j, k) for j in range(n) for k in range(n)
                   if not doms[j] & doms[k] and P.leq(j, i) and P.leq(k, i)})
    frame = frame_from_tensor(P, gI, gT, check=check, labels=tuple(worlds))
    if unit_upset is None:
        return frame
    U = {index[tuple(u)] if isinstance(u, (tuple, list)) else int(u) for u in unit_upset}
    if not P.is_upset(sum(1 << u for u in U)):
        raise FrameError("unit_upset is not an upset of heaps")
    gJ = [1 if i in U else 0 for i in range(n)]
    gP = []
    for i in range(n):
        f = worlds[i]
        S = set()
        for j in range(n):
            for k in range(n):
                if doms[j] & doms[k] != doms[i]:
                    continue
                g, h = worlds[j], worlds[k]
                if any(g[a] != h[a] for a in doms[i]):
                    continue
                if par == "agree" and any(g[a] != f[a] for a in doms[i]):
                    continue
                S.add((j, k))
        gP.append(S)
    return with_dual(frame, gJ, gP, check=check)


def heap_par_report(addresses: int, values: int, unit_upset=(), par: str = "restrict") -> dict:
    """Well-typedness facts about a par component (without raising)."""
    frame = heap_frame(addresses, values, unit_upset, par=par, check=False)
    P = frame.worlds
    g = frame.dual.gammaPar
    return {
        "par": par,
        "upclosed": all(close(g, P, CLOSE_PAR)[w] == g[w] for w in range(P.size)),
        "convex": all(is_convex(P, TENSOR, g[w]) for w in range(P.size)),
        "monotone": bool(check_monotone(g, P)),
        "rcc": bool(check_rcc(g, P)),
    }


# enumeration and sampling

def small_posets(max_size: int) -> list:
    """Posets with 1..max_size points up to isomorphism (fine for max_size <= 4)."""
    out = []
    for n in range(1, max_size + 1):
        pairs = [(i, j) for i in range(n) for j in range(n) if i < j]
        found = []
        for choice in itertools.product((False, True), repeat=len(pairs)):
            rel = [p for p, c in zip(pairs, choice) if c]
            try:
                P = FinitePoset(n, rel)
            except ValueError:
                continue
            if P.pairs() != sorted(set(P.pairs())):
                continue
            if any(_poset_iso(P, Q) for Q in found):
                continue
            found.append(P)
        out.extend(found)
    return out


def _poset_iso(P, Q):
    if P.size != Q.size:
        return False
    for perm in itertools.permutations(range(P.size)):
        if all(P.leq(a, b) == Q.leq(perm[a], perm[b]) for a in range(P.size) for b in range(P.size)):
            return True
    return False


def _triple_order(P):
    """Points (w, x, y) ordered so that bi-closed relations are exactly the upsets."""
    n = P.size
    pts = [(w, x, y) for w in range(n) for x in range(n) for y in range(n)]
    up = []
    for (w, x, y) in pts:
        m = 0
        for k, (w2, x2, y2) in enumerate(pts):
            if P.leq(w, w2) and P.leq(x2, x) and P.leq(y2, y):
                m |= 1 << k
        up.append(m)
    return pts, up


def count_biclosed(P: FinitePoset) -> int:
    from .lattice import enumerate_upsets
    if P.is_discrete():
        return 2 ** (P.size ** 3)
    _, up = _triple_order(P)
    return len(enumerate_upsets(up))


def _mask_to_gamma(P, pts, m):
    g = [set() for _ in range(P.size)]
    for k in bits(m):
        w, x, y = pts[k]
        g[w].add((x, y))
    return tuple(frozenset(s) for s in g)


def biclosed_tensors(P: FinitePoset, cap: int = 300000, sample: int = 20000, seed: int = 0):
    """Yield tensor maps that are up-closed in the world and down-closed in both successors.

    When the number of such relations is at most ``cap`` they are all
    produced (ascending mask order); otherwise ``sample`` of them are drawn
    with a seeded generator.  The second item of each yielded pair says
    whether the enumeration is exhaustive.
    """
    from .lattice import enumerate_upsets
    pts, up = _triple_order(P)
    total = count_biclosed(P)
    if total <= cap:
        for m in enumerate_upsets(up):
            yield _mask_to_gamma(P, pts, m), True
        return
    rng = random.Random(seed)
    for _ in range(sample):
        m = 0
        for k in rng.sample(range(len(pts)), rng.randint(0, len(pts))):
            m |= 1 << k
        # close upward in the triple order to land on a bi-closed relation
        acc = 0
        for k in bits(m):
            acc |= up[k]
        yield _mask_to_gamma(P, pts, acc), False


def random_convex(P, pol, rng, density=0.3):
    """A random convex set: the convex hull of a random set of points."""
    pts = list(itertools.product(range(P.size), repeat=len(pol)))
    S = [p for p in pts if rng.random() < density]
    return frozenset(q for q in pts if any(pair_leq(P, pol, s, q) for s in S)
                     and any(pair_leq(P, pol, q, s) for s in S))


def _random_monotone(P, pol, rng, tries=200):
    for _ in range(tries):
        g = tuple(random_convex(P, pol, rng, rng.choice((0.15, 0.3, 0.5))) for _ in range(P.size))
        if check_monotone(g, P, pol):
            return g
    # constant maps are always monotone
    S = random_convex(P, pol, rng)
    return tuple(S for _ in range(P.size))


def random_frame(P: FinitePoset, rng: random.Random) -> ResourceFrame:
    """A random frame whose unit denotation is an upset."""
    ups = P.upsets()
    unit = rng.choice(ups)
    gI = tuple(0 if unit >> w & 1 else 1 for w in range(P.size))
    return ResourceFrame(P, gI, _random_monotone(P, TENSOR, rng), _random_monotone(P, LRES, rng),
                         _random_monotone(P, RRES, rng))


# serialisation

def _gamma_json(g):
    return [[w, sorted([list(p) for p in g[w]])] for w in range(len(g))]


def _gamma_from_json(n, items):
    g = [set() for _ in range(n)]
    for w, pairs in items:
        g[int(w)] = {tuple(p) for p in pairs}
    return tuple(frozenset(s) for s in g)


def frame_to_json(frame: ResourceFrame) -> dict:
    out = {"worlds": frame.size, "leq": [list(p) for p in frame.worlds.pairs()],
           "gammaI": list(frame.gammaI), "gammaTensor": _gamma_json(frame.gammaTensor),
           "gammaLRes": _gamma_json(frame.gammaLRes), "gammaRRes": _gamma_json(frame.gammaRRes)}
    if frame.dual is not None:
        out["dual"] = {"gammaJ": list(frame.dual.gammaJ), "gammaPar": _gamma_json(frame.dual.gammaPar),
                       "gammaDLRes": _gamma_json(frame.dual.gammaDLRes),
                       "gammaDRRes": _gamma_json(frame.dual.gammaDRRes)}
    if frame.modal is not None:
        out["modal"] = {"dia": [sorted(s) for s in frame.modal[0]], "box": [sorted(s) for s in frame.modal[1]]}
    if frame.labels is not None:
        out["labels"] = [list(x) if isinstance(x, tuple) else x for x in frame.labels]
    return out


def frame_from_json(obj, validate: bool = True) -> ResourceFrame:
    """Load a frame; missing residual components are rebuilt from the tensor."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    n = int(obj["worlds"])
    P = FinitePoset(n, [tuple(p) for p in obj.get("leq", [])])
    gT = _gamma_from_json(n, obj.get("gammaTensor", []))
    gL = _gamma_from_json(n, obj["gammaLRes"]) if "gammaLRes" in obj else overline(gT, n)
    gR = _gamma_from_json(n, obj["gammaRRes"]) if "gammaRRes" in obj else underline(gT, n)
    gI = tuple(int(x) for x in obj.get("gammaI", [1] * n))
    dual = None
    if "dual" in obj:
        d = obj["dual"]
        gP = _gamma_from_json(n, d.get("gammaPar", []))
        dual = DualBlock(tuple(int(x) for x in d.get("gammaJ", [0] * n)), gP,
                         _gamma_from_json(n, d["gammaDLRes"]) if "gammaDLRes" in d else overline(gP, n),
                         _gamma_from_json(n, d["gammaDRRes"]) if "gammaDRRes" in d else underline(gP, n))
    modal = None
    if "modal" in obj:
        modal = (tuple(frozenset(s) for s in obj["modal"]["dia"]),
                 tuple(frozenset(s) for s in obj["modal"]["box"]))
    labels = tuple(tuple(x) if isinstance(x, list) else x for x in obj["labels"]) if "labels" in obj else None
    frame = ResourceFrame(P, gI, gT, gL, gR, dual, modal, labels)
    return validate_frame(frame) if validate else frame
