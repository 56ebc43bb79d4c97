"""Canonical extensions of finite lattices and their expansions.

For a finite lattice the canonical extension is the lattice of upsets of
its prime filters.  Everything is computed from the defining formulas,
even though on finite carriers the embedding is onto and the closed and
open elements are all of the extension.

An n-ary map is handled as a dict from argument tuples to values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import syntax as sx
from .algebra import (CONSTANTS, DLE, UNARY, Verdict, eval_term, holds, is_monotone,
                      term_function)
from .lattice import (DEFAULT_UPSET_CAP, FiniteDL, SizeLimitExceeded, Spectrum, bits, prime_filters,
                      upset_lattice)


class PropertyNotSatisfiedByF(ValueError):
    def __init__(self, prop, slot, witness):
        self.prop, self.slot, self.witness = prop, slot, witness
        super().__init__(f"the map itself is not {prop} in slot {slot}: {witness}")


@dataclass
class CanonicalExtension:
    base: FiniteDL
    spectrum: Spectrum
    carrier: FiniteDL
    embed: list
    closed: list
    open: list
    _inverse: dict = field(default_factory=dict, repr=False)

    def clopen(self):
        return sorted(set(self.closed) & set(self.open))

    def pull(self, x):
        """Inverse of the embedding on its image (None outside it)."""
        return self._inverse.get(x)


def canonical_extension(A: FiniteDL, cap: int = DEFAULT_UPSET_CAP) -> CanonicalExtension:
    spec = prime_filters(A)
    if (1 << len(spec)) > cap:
        raise SizeLimitExceeded(f"{len(spec)} prime filters exceed the cap")
    U = upset_lattice(spec.poset, cap)
    index = {m: i for i, m in enumerate(U.labels)}
    embed = []
    for a in range(A.size):
        m = 0
        for k, F in enumerate(spec.filters):
            if a in F:
                m |= 1 << k
        embed.append(index[m])
    image = sorted(set(embed))
    closed = _close(U, image, U.meet, U.top)
    opened = _close(U, image, U.join, U.bottom)
    inv = {x: a for a, x in enumerate(embed)}
    return CanonicalExtension(A, spec, U, embed, closed, opened, inv)


def _close(U, gens, op, unit):
    """All values of op over finite subsets of gens (the empty one gives unit)."""
    seen = set(gens) | {unit}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = op(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)


def as_map(f, A: FiniteDL, arity: int) -> dict:
    """Normalise a callable or table into a dict keyed by argument tuples."""
    if isinstance(f, dict):
        return f
    out = {}
    for args in itertools.product(range(A.size), repeat=arity):
        if callable(f):
            out[args] = f(*args)
        else:
            t = f
            for a in args:
                t = t[a]
            out[args] = t
    return out


def _interval_values(fm, ce, arity, d, u):
    """Embedded values of f over the elements a of A^n with d <= a <= u."""
    U = ce.carrier
    vals = []
    for args, val in fm.items():
        if all(U.leq(d[k], ce.embed[args[k]]) and U.leq(ce.embed[args[k]], u[k]) for k in range(arity)):
            vals.append(ce.embed[val])
    return vals


def _ext(f, ce, arity, upper):
    fm = as_map(f, ce.base, arity)
    U = ce.carrier
    approx = {}
    for d in itertools.product(ce.closed, repeat=arity):
        for u in itertools.product(ce.open, repeat=arity):
            if not all(U.leq(d[k], u[k]) for k in range(arity)):
                continue
            vals = _interval_values(fm, ce, arity, d, u)
            approx[(d, u)] = U.join_all(vals) if upper else U.meet_all(vals)
    out = {}
    for x in itertools.product(range(U.size), repeat=arity):
        vals = [v for (d, u), v in approx.items()
                if all(U.leq(d[k], x[k]) and U.leq(x[k], u[k]) for k in range(arity))]
        out[x] = U.meet_all(vals) if upper else U.join_all(vals)
    return out


def sigma_ext(f, ce: CanonicalExtension, arity: int) -> dict:
    """f^sigma(x) = join over closed d <= x <= open u of the meet of f[d, u]."""
    return _ext(f, ce, arity, upper=False)


def pi_ext(f, ce: CanonicalExtension, arity: int) -> dict:
    """f^pi(x) = meet over closed d <= x <= open u of the join of f[d, u]."""
    return _ext(f, ce, arity, upper=True)


def transport(f, ce: CanonicalExtension, arity: int) -> dict:
    """Move f along the embedding; defined on the image only."""
    fm = as_map(f, ce.base, arity)
    return {tuple(ce.embed[a] for a in args): ce.embed[v] for args, v in fm.items()}


@dataclass
class ExtensionReport:
    restricts: Verdict
    below: Verdict
    smooth: Verdict | None
    monotone: bool

    @property
    def ok(self):
        return bool(self.restricts) and bool(self.below) and (self.smooth is None or bool(self.smooth))

    def __bool__(self):
        return self.ok


def check_extension_props(f, ce: CanonicalExtension, arity: int) -> ExtensionReport:
    """Restriction, sigma <= pi, and equality on (K u O)^n for monotone maps."""
    A, U = ce.base, ce.carrier
    fm = as_map(f, A, arity)
    s, p = sigma_ext(fm, ce, arity), pi_ext(fm, ce, arity)
    restricts = Verdict(True)
    for args, v in fm.items():
        e = tuple(ce.embed[a] for a in args)
        if s[e] != ce.embed[v] or p[e] != ce.embed[v]:
            restricts = Verdict(False, args)
            break
    below = Verdict(True)
    for x in s:
        if not U.leq(s[x], p[x]):
            below = Verdict(False, x)
            break
    mono = arity == 0 or is_monotone(A, lambda *a: fm[a], arity)
    smooth = None
    if mono:
        smooth = Verdict(True)
        ko = sorted(set(ce.closed) | set(ce.open))
        for x in itertools.product(ko, repeat=arity):
            if s[x] != p[x]:
                smooth = Verdict(False, x)
                break
    return ExtensionReport(restricts, below, smooth, mono)


PROPERTIES = ("preserves-joins", "preserves-meets", "anti-joins", "anti-meets")


def _prop_ops(L, prop):
    """(operation applied to arguments, operation expected on results)."""
    return {"preserves-joins": (L.join, L.join), "preserves-meets": (L.meet, L.meet),
            "anti-joins": (L.join, L.meet), "anti-meets": (L.meet, L.join)}[prop]


def check_preservation(f, ce: CanonicalExtension, arity: int, slot: int, prop: str,
                       max_subsets: int = 1 << 16) -> Verdict:
    """If f has the binary property in ``slot``, check sigma_ext(f) has it for all nonempty sets."""
    if prop not in PROPERTIES:
        raise ValueError(f"unknown property {prop!r}")
    A, U = ce.base, ce.carrier
    fm = as_map(f, A, arity)
    arg_op, res_op = _prop_ops(A, prop)
    for args in itertools.product(range(A.size), repeat=arity):
        for b in range(A.size):
            other = args[:slot] + (b,) + args[slot + 1:]
            joint = args[:slot] + (arg_op(args[slot], b),) + args[slot + 1:]
            if fm[joint] != res_op(fm[args], fm[other]):
                raise PropertyNotSatisfiedByF(prop, slot, (args, b))
    s = sigma_ext(fm, ce, arity)
    arg_op, res_op = _prop_ops(U, prop)
    m = U.size
    if (1 << m) > max_subsets:
        raise SizeLimitExceeded(f"{m} elements give too many subsets")
    for sub in range(1, 1 << m):
        members = list(bits(sub))
        big = members[0]
        for x in members[1:]:
            big = arg_op(big, x)
        others = [range(m)] * arity
        others[slot] = [None]
        for args in itertools.product(*others):
            vals = [s[args[:slot] + (x,) + args[slot + 1:]] for x in members]
            acc = vals[0]
            for v in vals[1:]:
                acc = res_op(acc, v)
            if s[args[:slot] + (big,) + args[slot + 1:]] != acc:
                return Verdict(False, (members, args))
    return Verdict(True)


# how each operation interacts with lattice structure, slot by slot
SLOT_PROPERTIES = {
    "tensor": ("preserves-joins", "preserves-joins"),
    "lres": ("anti-joins", "preserves-meets"),
    "rres": ("preserves-meets", "anti-joins"),
    "par": ("preserves-meets", "preserves-meets"),
    "dlres": ("anti-meets", "preserves-joins"),
    "drres": ("preserves-joins", "anti-meets"),
    "dia": ("preserves-joins",),
    "box": ("preserves-meets",),
}


def extend_dle(A: DLE, ce: CanonicalExtension | None = None) -> DLE:
    """The canonical extension of a DLE: each table sigma-extended."""
    ce = ce or canonical_extension(A.carrier)
    U = ce.carrier
    tables = {}
    for sym in A.signature:
        t = A.tables[sym]
        if sym in CONSTANTS:
            tables[sym] = ce.embed[t]
        elif sym in UNARY:
            s = sigma_ext(t, ce, 1)
            tables[sym] = [s[(x,)] for x in range(U.size)]
        else:
            s = sigma_ext(t, ce, 2)
            tables[sym] = [[s[(x, y)] for y in range(U.size)] for x in range(U.size)]
    return DLE(U, tables, (A.name + "^sigma") if A.name else None)


def classify_term(t: sx.Formula, suite) -> list:
    """Compare (t^A)^sigma with t evaluated in the extended algebra, per algebra."""
    out = []
    names = sorted(sx.variables(t))
    for A in suite:
        ce = canonical_extension(A.carrier)
        _, tf = term_function(t, A, names)
        lhs = sigma_ext(tf, ce, len(names))
        ext = extend_dle(A, ce)
        U = ce.carrier
        le = ge = True
        for x, v in lhs.items():
            w = eval_term(t, ext, dict(zip(names, x)))
            le &= U.leq(v, w)
            ge &= U.leq(w, v)
        out.append("stable" if le and ge else "expanding" if le else "contracting" if ge else "none")
    return out


def canonicity_check(A: DLE, e: sx.Inequation) -> dict:
    """Check e in A and, when it holds, in the canonical extension of A."""
    base = holds(A, e)
    report = {"equation": str(e), "holds_in_A": base.ok, "witness_A": base.witness,
              "holds_in_ext": None, "witness_ext": None}
    if not base:
        report["status"] = "hypothesis false"
        return report
    ext = holds(extend_dle(A), e)
    report["holds_in_ext"] = ext.ok
    report["witness_ext"] = ext.witness
    report["status"] = "canonical-instance" if ext else "REFUTED"
    return report
