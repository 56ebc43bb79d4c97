"""Finite distributive lattice expansions (DLEs).

A DLE is a :class:`FiniteDL` carrier plus operation tables.  Symbols are
named ``I``, ``tensor``, ``lres``, ``rres`` (the residuated block), ``J``,
``par``, ``dlres``, ``drres`` (the dual block) and ``dia``, ``box``.
Binary tables are nested lists ``t[a][b]``, unary ones flat lists and
constants plain ints.

Residual conventions: ``lres[a][c]`` is the largest b with ``a*b <= c`` and
``rres[c][b]`` the largest a with ``a*b <= c``.  Dually ``dlres[a][c]`` is
the least b with ``c <= a+b`` and ``drres[c][b]`` the least a with
``c <= a+b``.
"""

from __future__ import annotations

import itertools
import json
import random
from typing import NamedTuple

from . import syntax as sx
from .lattice import FiniteDL, LatticeError, bits, chain, diamond, load_lattice

CONSTANTS = ("I", "J")
UNARY = ("dia", "box")
BINARY = ("tensor", "lres", "rres", "par", "dlres", "drres")
SYMBOLS = ("I", "tensor", "lres", "rres", "J", "par", "dlres", "drres", "dia", "box")
BLOCKS = {sx.RL: ("I", "tensor", "lres", "rres"), sx.RLD: ("J", "par", "dlres", "drres"),
          sx.ML: ("dia", "box")}

NODE_SYMBOL = {sx.UnitI: "I", sx.UnitJ: "J", sx.Fuse: "tensor", sx.LRes: "lres", sx.RRes: "rres",
               sx.Par: "par", sx.DLRes: "dlres", sx.DRRes: "drres", sx.Dia: "dia", sx.Box: "box"}


class AlgebraError(ValueError):
    pass


class LawViolated(AlgebraError):
    def __init__(self, law, witnesses):
        self.law = law
        self.witnesses = witnesses
        super().__init__(f"{law} fails at {witnesses}")


class ArityMismatch(AlgebraError):
    pass


class UnboundVariable(AlgebraError):
    pass


class Verdict(NamedTuple):
    """A truth value together with a witness for failures."""

    ok: bool
    witness: object = None

    def __bool__(self):
        return self.ok


class DLE:
    """A finite lattice with operation tables (immutable by convention)."""

    def __init__(self, carrier: FiniteDL, tables: dict, name: str | None = None):
        self.carrier = carrier
        self.tables = dict(tables)
        self.name = name

    @property
    def signature(self):
        return tuple(s for s in SYMBOLS if s in self.tables)

    def has(self, sym):
        return sym in self.tables

    def __getattr__(self, item):
        tables = self.__dict__.get("tables", {})
        if item in tables:
            return tables[item]
        raise AttributeError(item)

    def op(self, sym, *args):
        t = self.tables[sym]
        for a in args:
            t = t[a]
        return t

    def to_json(self):
        out = {"carrier": self.carrier.to_json(), "tables": {}}
        for s in self.signature:
            out["tables"][s] = self.tables[s]
        if self.name:
            out["name"] = self.name
        return out

    def key(self):
        return (self.carrier.up, tuple((s, json.dumps(self.tables[s])) for s in self.signature))

    def __eq__(self, other):
        return isinstance(other, DLE) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<DLE{label} size={self.carrier.size} ops={','.join(self.signature)}>"


def _check_shape(A: FiniteDL, tables):
    n = A.size
    for s, t in tables.items():
        if s not in SYMBOLS:
            raise ArityMismatch(f"unknown symbol {s!r}")
        if s in CONSTANTS:
            ok = isinstance(t, int) and 0 <= t < n
        elif s in UNARY:
            ok = isinstance(t, (list, tuple)) and len(t) == n and all(isinstance(x, int) and 0 <= x < n for x in t)
        else:
            ok = (isinstance(t, (list, tuple)) and len(t) == n
                  and all(isinstance(r, (list, tuple)) and len(r) == n
                          and all(isinstance(x, int) and 0 <= x < n for x in r) for r in t))
        if not ok:
            raise ArityMismatch(f"table for {s} has the wrong shape for {n} elements")


def _laws(A: FiniteDL, tables):
    """Yield (law, witness) for the first violation of each applicable law."""
    n = A.size
    J, M = A.join, A.meet
    pairs = [(x, y) for x in range(n) for y in range(x + 1, n)]
    bot, top = A.bottom, A.top
    # (law, symbol, slot, which lattice op on X, which lattice op on results, empty-X value, empty result)
    spec = [
        ("DL1", "tensor", 0, J, J, bot, bot),
        ("DL2", "tensor", 1, J, J, bot, bot),
        ("DL3", "lres", 1, M, M, top, top),
        ("DL4", "lres", 0, J, M, bot, top),
        ("DL5", "rres", 0, M, M, top, top),
        ("DL6", "rres", 1, J, M, bot, top),
        ("DLd1", "par", 0, M, M, top, top),
        ("DLd2", "par", 1, M, M, top, top),
        ("DLd3", "dlres", 1, J, J, bot, bot),
        ("DLd4", "dlres", 0, M, J, top, bot),
        ("DLd5", "drres", 0, J, J, bot, bot),
        ("DLd6", "drres", 1, M, J, top, bot),
    ]
    for law, sym, slot, xop, rop, empty_arg, empty_val in spec:
        if sym not in tables:
            continue
        t = tables[sym]
        if slot == 0:
            f = lambda x, a, t=t: t[x][a]
        else:
            f = lambda x, a, t=t: t[a][x]
        bad = next(((x, y, a) for x, y in pairs for a in range(n)
                    if f(xop(x, y), a) != rop(f(x, a), f(y, a))), None)
        if bad is None and A.bounded:
            bad = next((("empty", a) for a in range(n) if f(empty_arg, a) != empty_val), None)
        if bad is not None:
            yield law, bad
    if "dia" in tables:
        d = tables["dia"]
        bad = next(((x, y) for x, y in pairs if d[J(x, y)] != J(d[x], d[y])), None)
        if bad:
            yield "ML1", bad
        elif A.bounded and d[bot] != bot:
            yield "ML1", ("empty",)
    if "box" in tables:
        b = tables["box"]
        bad = next(((x, y) for x, y in pairs if b[M(x, y)] != M(b[x], b[y])), None)
        if bad:
            yield "ML2", bad
        elif A.bounded and b[top] != top:
            yield "ML2", ("empty",)


LAW_ORDER = ["DL1", "DL2", "DL3", "DL4", "DL5", "DL6", "ML1", "ML2",
             "DLd1", "DLd2", "DLd3", "DLd4", "DLd5", "DLd6"]


def law_violations(A: FiniteDL, tables) -> list:
    found = list(_laws(A, tables))
    found.sort(key=lambda lw: LAW_ORDER.index(lw[0]))
    return found


def validate_dle(carrier: FiniteDL, tables: dict | None = None, name=None) -> DLE:
    """Check shapes and distribution laws; raise on the first violated law."""
    if isinstance(carrier, DLE):
        carrier, tables, name = carrier.carrier, carrier.tables, carrier.name
    tables = {k: _freeze(v) for k, v in (tables or {}).items()}
    _check_shape(carrier, tables)
    bad = law_violations(carrier, tables)
    if bad:
        raise LawViolated(*bad[0])
    return DLE(carrier, tables, name)


def _freeze(t):
    if isinstance(t, (list, tuple)):
        return [_freeze(x) for x in t]
    return int(t)


def load_dle(obj, base_dir=None) -> DLE:
    if isinstance(obj, str):
        obj = json.loads(obj)
    carrier = obj["carrier"]
    if isinstance(carrier, str):
        import os
        path = carrier if base_dir is None else os.path.join(base_dir, carrier)
        with open(path) as fh:
            carrier = json.load(fh)
    A = load_lattice(carrier)
    return validate_dle(A, obj.get("tables", {}), obj.get("name"))


# evaluation

def eval_term(t: sx.Formula, A: DLE, v: dict) -> int:
    """The term function of ``t`` on ``A`` at the valuation ``v``."""
    L = A.carrier
    if isinstance(t, sx.Var):
        if t.name not in v:
            raise UnboundVariable(t.name)
        return v[t.name]
    if isinstance(t, sx.Top):
        return L.top
    if isinstance(t, sx.Bot):
        return L.bottom
    if isinstance(t, sx.And):
        return L.meet(eval_term(t.l, A, v), eval_term(t.r, A, v))
    if isinstance(t, sx.Or):
        return L.join(eval_term(t.l, A, v), eval_term(t.r, A, v))
    sym = NODE_SYMBOL[type(t)]
    if sym not in A.tables:
        raise sx.FragmentViolation(f"{A!r} has no table for {sym}")
    tab = A.tables[sym]
    if sym in CONSTANTS:
        return tab
    if sym in UNARY:
        return tab[eval_term(t.x, A, v)]
    return tab[eval_term(t.l, A, v)][eval_term(t.r, A, v)]


def term_function(t: sx.Formula, A: DLE, names=None):
    """Return (names, table) where table maps argument tuples to values."""
    names = sorted(sx.variables(t)) if names is None else list(names)
    out = {}
    for args in itertools.product(range(A.carrier.size), repeat=len(names)):
        out[args] = eval_term(t, A, dict(zip(names, args)))
    return names, out


def valuations(names, n):
    for args in itertools.product(range(n), repeat=len(names)):
        yield dict(zip(names, args))


def holds(A: DLE, e: sx.Inequation, max_vars: int | None = None) -> Verdict:
    """Exhaustive check over all valuations; the witness is a falsifying valuation."""
    names = e.variables()
    if max_vars is not None and len(names) > max_vars:
        raise AlgebraError(f"{len(names)} variables exceeds the cap of {max_vars}")
    L = A.carrier
    for v in valuations(names, L.size):
        a, b = eval_term(e.lhs, A, v), eval_term(e.rhs, A, v)
        if (a != b) if e.relation == "==" else not L.leq(a, b):
            return Verdict(False, v)
    return Verdict(True)


def holds_all(A: DLE, eqs, max_vars=None) -> Verdict:
    for e in eqs:
        r = holds(A, e, max_vars)
        if not r:
            return Verdict(False, (str(e), r.witness))
    return Verdict(True)


def check_residuated(A: DLE) -> Verdict:
    """a*b <= c iff b <= a -* c iff a <= c *- b, for all triples."""
    L = A.carrier
    t, lr, rr = A.tables["tensor"], A.tables["lres"], A.tables["rres"]
    for a in range(L.size):
        for b in range(L.size):
            for c in range(L.size):
                x = L.leq(t[a][b], c)
                if x != L.leq(b, lr[a][c]) or x != L.leq(a, rr[c][b]):
                    return Verdict(False, (a, b, c))
    return Verdict(True)


def check_dual_residuated(A: DLE) -> Verdict:
    """c <= a+b iff a -+ c <= b iff c +- b <= a, for all triples."""
    L = A.carrier
    p, lr, rr = A.tables["par"], A.tables["dlres"], A.tables["drres"]
    for a in range(L.size):
        for b in range(L.size):
            for c in range(L.size):
                x = L.leq(c, p[a][b])
                if x != L.leq(lr[a][c], b) or x != L.leq(rr[c][b], a):
                    return Verdict(False, (a, b, c))
    return Verdict(True)


def is_monotone(A: FiniteDL, f, arity, polarity=None) -> bool:
    """Check monotonicity of an n-ary map given as a callable; polarity -1 marks antitone slots."""
    polarity = polarity or (1,) * arity
    n = A.size
    for args in itertools.product(range(n), repeat=arity):
        for k in range(arity):
            for b in bits(A.up[args[k]]):
                other = args[:k] + (b,) + args[k + 1:]
                lo, hi = (f(*args), f(*other)) if polarity[k] > 0 else (f(*other), f(*args))
                if not A.leq(lo, hi):
                    return False
    return True


def residuals_of(A: FiniteDL, t):
    """Derive both residuals from a tensor table, or None if one is missing."""
    n = A.size
    lres = [[None] * n for _ in range(n)]
    rres = [[None] * n for _ in range(n)]
    for a in range(n):
        for c in range(n):
            ok = [b for b in range(n) if A.leq(t[a][b], c)]
            m = A.join_all(ok)
            if not A.leq(t[a][m], c):
                return None
            lres[a][c] = m
    for c in range(n):
        for b in range(n):
            ok = [a for a in range(n) if A.leq(t[a][b], c)]
            m = A.join_all(ok)
            if not A.leq(t[m][b], c):
                return None
            rres[c][b] = m
    return lres, rres


def dual_residuals_of(A: FiniteDL, p):
    n = A.size
    lres = [[None] * n for _ in range(n)]
    rres = [[None] * n for _ in range(n)]
    for a in range(n):
        for c in range(n):
            m = A.meet_all(b for b in range(n) if A.leq(c, p[a][b]))
            if not A.leq(c, p[a][m]):
                return None
            lres[a][c] = m
    for c in range(n):
        for b in range(n):
            m = A.meet_all(a for a in range(n) if A.leq(c, p[a][b]))
            if not A.leq(c, p[m][b]):
                return None
            rres[c][b] = m
    return lres, rres


def unit_of(A: FiniteDL, t):
    n = A.size
    for e in range(n):
        if all(t[e][x] == x and t[x][e] == x for x in range(n)):
            return e
    return None


def is_associative(n, t):
    return all(t[t[a][b]][c] == t[a][t[b][c]] for a in range(n) for b in range(n) for c in range(n))


def is_commutative(n, t):
    return all(t[a][b] == t[b][a] for a in range(n) for b in range(n))


def residuated_from_tensor(A: FiniteDL, t, name=None) -> DLE | None:
    """Complete a tensor table into a residuated DLE, if it has a unit and residuals."""
    e = unit_of(A, t)
    if e is None:
        return None
    res = residuals_of(A, t)
    if res is None:
        return None
    return DLE(A, {"I": e, "tensor": [list(r) for r in t], "lres": res[0], "rres": res[1]}, name)


def enumerate_residuated(A: FiniteDL, associative: bool = True, max_elements: int = 8,
                         sample: int | None = None, seed: int = 0):
    """Yield residuated DLE structures on ``A`` in a fixed order.

    A tensor preserving all joins is fixed by its values on pairs of
    join-irreducibles, and any monotone assignment there extends by joins.
    Each extension is kept when it has a two-sided unit (and, by default,
    is associative); residuals always exist in the finite case.  With
    ``sample`` set, a seeded random subset of that many structures is
    returned in enumeration order.
    """
    if A.size > max_elements:
        raise LatticeError(f"carrier has {A.size} elements, above the limit {max_elements}")
    out = list(_enum_residuated(A, associative))
    if sample is not None and sample < len(out):
        keep = sorted(random.Random(seed).sample(range(len(out)), sample))
        out = [out[i] for i in keep]
    return iter(out)


def _enum_residuated(A: FiniteDL, associative):
    n = A.size
    if n == 1:
        yield DLE(A, {"I": 0, "tensor": [[0]], "lres": [[0]], "rres": [[0]]})
        return
    Jr = A.join_irreducibles()
    cells = [(i, j) for i in range(len(Jr)) for j in range(len(Jr))]
    below = [[k for k, j in enumerate(Jr) if A.leq(j, x)] for x in range(n)]
    # cells are filled in order; a value must dominate values of smaller cells
    lower_cells = {c: [d for d in cells if d != c and A.leq(Jr[d[0]], Jr[c[0]]) and A.leq(Jr[d[1]], Jr[c[1]])]
                   for c in cells}
    g = {}

    def rec(k):
        if k == len(cells):
            t = [[A.join_all(g[(i, j)] for i in below[x] for j in below[y]) for y in range(n)]
                 for x in range(n)]
            if associative and not is_associative(n, t):
                return
            d = residuated_from_tensor(A, t)
            if d is not None:
                yield d
            return
        c = cells[k]
        floor = A.join_all(g[d] for d in lower_cells[c] if d in g)
        for val in range(n):
            if A.leq(floor, val):
                g[c] = val
                yield from rec(k + 1)
                del g[c]

    # a non-monotone assignment extends to the same tensor as a monotone one
    seen = set()
    for d in rec(0):
        key = json.dumps(d.tables["tensor"])
        if key not in seen:
            seen.add(key)
            yield d


# named examples

def bool2() -> DLE:
    """The two-element Boolean algebra with tensor = meet and I = top."""
    A = chain(2)
    return residuated_from_tensor(A, [[0, 0], [0, 1]], "bool2")


def two_chain_join() -> DLE:
    """The 2-chain with tensor = join and I = 0 (not residuated: 0 is not absorbing)."""
    return DLE(chain(2), {"I": 0, "tensor": [[0, 1], [1, 1]]}, "join2")


def lukasiewicz3() -> DLE:
    """Elements 0 < 1 < 2 standing for 0, 1/2, 1 with a*b = max(0, a+b-1)."""
    A = chain(3)
    t = [[max(0, a + b - 2) for b in range(3)] for a in range(3)]
    return residuated_from_tensor(A, t, "luk3")


def sugihara3() -> DLE:
    """Elements 0 < 1 < 2; 1 is the unit, 2*2 = 2 and 0 absorbs."""
    A = chain(3)
    t = [[0, 0, 0], [0, 1, 2], [0, 2, 2]]
    return residuated_from_tensor(A, t, "sugihara3")


def diamond_meet() -> DLE:
    """The four-element Boolean algebra with tensor = meet and I = top."""
    A = diamond()
    t = [[A.meet(a, b) for b in range(4)] for a in range(4)]
    return residuated_from_tensor(A, t, "diamond-meet")


def trivial() -> DLE:
    return DLE(chain(1), {"I": 0, "tensor": [[0]], "lres": [[0]], "rres": [[0]]}, "trivial")


def regression_suite(max_size: int = 4) -> list[DLE]:
    """The named algebras plus every residuated structure on carriers up to ``max_size``."""
    from .lattice import enumerate_dls
    out = [bool2(), chain2_meet(), lukasiewicz3(), diamond_meet()]
    for L in enumerate_dls(max_size):
        for k, d in enumerate(enumerate_residuated(L)):
            d.name = f"res{L.size}.{len(out)}"
            out.append(d)
    return out


def chain2_meet() -> DLE:
    d = bool2()
    d.name = "chain2"
    return d

