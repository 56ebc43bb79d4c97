"""Formula trees, a small text grammar, and axiom schemata.

Grammar (loosest binding first)::

    ineq     := formula ("<=" | "==" | "=") formula
    formula  := disj (RES formula)?          RES is one of -*  *-  -+  +-
    disj     := conj ("\\/" conj)*
    conj     := mult ("/\\" mult)*
    mult     := unary (("*" | "+") unary)*
    unary    := ("<>" | "[]") unary | atom
    atom     := NAME | "T" | "_|_" | "I" | "J" | "(" formula ")"

Residuals associate to the right and different residual symbols cannot be
chained without parentheses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

# fragment tags
LATTICE = "lattice"
BOUNDS = "bounds"
RL = "RL"
RLD = "RLd"
ML = "ML"


class FormulaError(ValueError):
    pass


class ParseError(FormulaError):
    """Raised as ``SyntaxError(position, expected)`` in the usual sense."""

    def __init__(self, position, expected, text=""):
        self.position = position
        self.expected = expected
        super().__init__(f"syntax error at position {position}: expected {expected}"
                         + (f" in {text!r}" if text else ""))


class UnknownVariable(FormulaError):
    pass


class FragmentViolation(FormulaError):
    pass


class MissingMetavariable(FormulaError):
    pass


class Formula:
    __slots__ = ()

    def children(self):
        return ()

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Var(Formula):
    name: str


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class UnitI(Formula):
    pass


@dataclass(frozen=True)
class UnitJ(Formula):
    pass


@dataclass(frozen=True)
class _Binary(Formula):
    l: Formula
    r: Formula

    def children(self):
        return (self.l, self.r)


class And(_Binary):
    pass


class Or(_Binary):
    pass


class Fuse(_Binary):
    """Multiplicative conjunction (tensor)."""


class LRes(_Binary):
    """``l -* r``: the largest x with ``l * x <= r``."""


class RRes(_Binary):
    """``l *- r``: the largest x with ``x * r <= l``."""


class Par(_Binary):
    """The dual tensor."""


class DLRes(_Binary):
    pass


class DRRes(_Binary):
    pass


@dataclass(frozen=True)
class _Unary(Formula):
    x: Formula

    def children(self):
        return (self.x,)


class Dia(_Unary):
    pass


class Box(_Unary):
    pass


@dataclass(frozen=True)
class Inequation:
    lhs: Formula
    rhs: Formula
    relation: str = "<="

    def __post_init__(self):
        if self.relation not in ("<=", "=="):
            raise FormulaError(f"unknown relation {self.relation!r}")

    def variables(self):
        return sorted(variables(self.lhs) | variables(self.rhs))

    def __str__(self):
        return f"{to_text(self.lhs)} {self.relation} {to_text(self.rhs)}"


BINARY_SYMBOL = {And: "/\\", Or: "\\/", Fuse: "*", Par: "+", LRes: "-*", RRes: "*-",
                 DLRes: "-+", DRRes: "+-"}
SYMBOL_BINARY = {v: k for k, v in BINARY_SYMBOL.items()}
FRAGMENT_OF = {Var: LATTICE, And: LATTICE, Or: LATTICE, Top: BOUNDS, Bot: BOUNDS,
               UnitI: RL, Fuse: RL, LRes: RL, RRes: RL,
               UnitJ: RLD, Par: RLD, DLRes: RLD, DRRes: RLD, Dia: ML, Box: ML}
RESIDUALS = (LRes, RRes, DLRes, DRRes)


def variables(phi: Formula) -> set:
    if isinstance(phi, Var):
        return {phi.name}
    out = set()
    for c in phi.children():
        out |= variables(c)
    return out


def fragments(phi: Formula) -> set:
    out = {FRAGMENT_OF[type(phi)]}
    for c in phi.children():
        out |= fragments(c)
    return out


def depth(phi: Formula) -> int:
    """Atoms have depth 0."""
    cs = phi.children()
    return 0 if not cs else 1 + max(depth(c) for c in cs)


def size(phi: Formula) -> int:
    return 1 + sum(size(c) for c in phi.children())


def check_fragment(phi, allowed: Iterable[str]):
    bad = fragments(phi) - set(allowed) - {LATTICE}
    if bad:
        raise FragmentViolation(f"{to_text(phi)} uses fragment(s) {sorted(bad)}")


def substitute(phi: Formula, assignment: dict) -> Formula:
    if isinstance(phi, Var):
        if phi.name not in assignment:
            raise MissingMetavariable(phi.name)
        return assignment[phi.name]
    if isinstance(phi, _Binary):
        return type(phi)(substitute(phi.l, assignment), substitute(phi.r, assignment))
    if isinstance(phi, _Unary):
        return type(phi)(substitute(phi.x, assignment))
    return phi


def random_formula(rng, names, depth: int, fragments_: Iterable[str] = (RL,)) -> Formula:
    """A random formula of depth at most ``depth`` drawn with ``rng`` (a random.Random)."""
    fragments_ = set(fragments_)
    atoms = [Var(n) for n in names] + [Top(), Bot()]
    binary = [And, Or]
    unary = []
    if RL in fragments_:
        atoms.append(UnitI())
        binary += [Fuse, LRes, RRes]
    if RLD in fragments_:
        atoms.append(UnitJ())
        binary += [Par, DLRes, DRRes]
    if ML in fragments_:
        unary += [Dia, Box]

    def go(d):
        if d == 0 or rng.random() < 0.25:
            return rng.choice(atoms)
        op = rng.choice(binary + unary)
        if op in unary:
            return op(go(d - 1))
        return op(go(d - 1), go(d - 1))

    return go(depth)


# printing

def _prec(phi):
    if isinstance(phi, RESIDUALS):
        return 1
    if isinstance(phi, Or):
        return 2
    if isinstance(phi, And):
        return 3
    if isinstance(phi, (Fuse, Par)):
        return 4
    if isinstance(phi, _Unary):
        return 5
    return 6


def to_text(phi: Formula) -> str:
    """Render with as few parentheses as the grammar allows."""
    if isinstance(phi, Var):
        return phi.name
    if isinstance(phi, Top):
        return "T"
    if isinstance(phi, Bot):
        return "_|_"
    if isinstance(phi, UnitI):
        return "I"
    if isinstance(phi, UnitJ):
        return "J"
    if isinstance(phi, _Unary):
        inner = to_text(phi.x)
        if _prec(phi.x) < 5:
            inner = f"({inner})"
        return ("<>" if isinstance(phi, Dia) else "[]") + inner
    p = _prec(phi)
    left, right = to_text(phi.l), to_text(phi.r)
    if p == 1:
        if _prec(phi.l) <= 1:
            left = f"({left})"
        if _prec(phi.r) < 1 or (_prec(phi.r) == 1 and type(phi.r) is not type(phi)):
            right = f"({right})"
    else:
        if _prec(phi.l) < p:
            left = f"({left})"
        if _prec(phi.r) <= p:
            right = f"({right})"
    return f"{left} {BINARY_SYMBOL[type(phi)]} {right}"


# alias following the operation name used in docs
print_formula = to_text


# parsing

_TOKEN = re.compile(r"\s*(?:(?P<op>_\|_|-\*|\*-|-\+|\+-|<>|\[\]|/\\|\\/|<=|==|=|\*|\+|\(|\))"
                    r"|(?P<name>[A-Za-z][A-Za-z0-9_']*))")


def tokenize(text: str):
    pos = 0
    out = []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(pos, "a token", text)
        start = m.start("op") if m.group("op") else m.start("name")
        out.append((m.group("op") or m.group("name"), start))
        pos = m.end()
    out.append(("<eof>", len(text)))
    return out


class _Parser:
    def __init__(self, text, declared=None, allowed=None):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.declared = declared
        self.allowed = allowed

    def peek(self):
        return self.toks[self.i][0]

    def pos(self):
        return self.toks[self.i][1]

    def take(self, expected=None):
        tok = self.peek()
        if expected is not None and tok != expected:
            raise ParseError(self.pos(), repr(expected), self.text)
        self.i += 1
        return tok

    def formula(self):
        left = self.disj()
        tok = self.peek()
        if tok in ("-*", "*-", "-+", "+-"):
            self.take()
            right = self.formula()
            if isinstance(right, RESIDUALS) and type(right) is not SYMBOL_BINARY[tok] \
                    and not self._parenthesised(right):
                raise ParseError(self.pos(), f"parentheses to mix {tok} with another residual", self.text)
            return SYMBOL_BINARY[tok](left, right)
        return left

    def _parenthesised(self, node):
        return id(node) in self.paren_ids

    def disj(self):
        left = self.conj()
        while self.peek() == "\\/":
            self.take()
            left = Or(left, self.conj())
        return left

    def conj(self):
        left = self.mult()
        while self.peek() == "/\\":
            self.take()
            left = And(left, self.mult())
        return left

    def mult(self):
        left = self.unary()
        while self.peek() in ("*", "+"):
            op = self.take()
            left = (Fuse if op == "*" else Par)(left, self.unary())
        return left

    def unary(self):
        tok = self.peek()
        if tok == "<>":
            self.take()
            return Dia(self.unary())
        if tok == "[]":
            self.take()
            return Box(self.unary())
        return self.atom()

    def atom(self):
        tok, pos = self.toks[self.i]
        if tok == "(":
            self.take()
            inner = self.formula()
            self.take(")")
            self.paren_ids.add(id(inner))
            return inner
        if tok == "T":
            self.take()
            return Top()
        if tok == "_|_":
            self.take()
            return Bot()
        if tok == "I":
            self.take()
            return UnitI()
        if tok == "J":
            self.take()
            return UnitJ()
        if tok[0].isalpha():
            self.take()
            if self.declared is not None and tok not in self.declared:
                raise UnknownVariable(tok)
            return Var(tok)
        raise ParseError(pos, "a formula", self.text)

    def run(self, inequation=False):
        self.paren_ids = set()
        lhs = self.formula()
        if inequation:
            rel = self.peek()
            if rel not in ("<=", "==", "="):
                raise ParseError(self.pos(), "'<=' or '=='", self.text)
            self.take()
            rhs = self.formula()
            self.take("<eof>")
            out = Inequation(lhs, rhs, "<=" if rel == "<=" else "==")
            if self.allowed is not None:
                check_fragment(lhs, self.allowed)
                check_fragment(rhs, self.allowed)
            return out
        self.take("<eof>")
        if self.allowed is not None:
            check_fragment(lhs, self.allowed)
        return lhs


def parse(text: str, declared: Iterable[str] | None = None, allowed: Iterable[str] | None = None) -> Formula:
    """Parse one formula.  ``declared`` restricts variable names, ``allowed`` fragments."""
    return _Parser(text, None if declared is None else set(declared),
                   None if allowed is None else set(allowed)).run()


def parse_inequation(text: str, declared=None, allowed=None) -> Inequation:
    return _Parser(text, None if declared is None else set(declared),
                   None if allowed is None else set(allowed)).run(inequation=True)


def parse_any(text: str):
    """Parse an inequation if the text has a relation symbol, else a formula."""
    toks = [t for t, _ in tokenize(text)]
    if any(t in ("<=", "==", "=") for t in toks):
        return parse_inequation(text)
    return parse(text)


def parse_lines(text: str) -> list:
    """One formula or inequation per line; blank lines and ``#`` comments are skipped."""
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse_any(line))
    return out


# axiom schemata

@dataclass(frozen=True)
class AxiomSchema:
    name: str
    members: tuple
    metavariables: tuple

    def fragments(self):
        out = set()
        for e in self.members:
            out |= fragments(e.lhs) | fragments(e.rhs)
        return out


def _schema(name, *texts):
    members = tuple(parse_inequation(t) for t in texts)
    mv = sorted(set().union(*(set(e.variables()) for e in members)))
    return AxiomSchema(name, members, tuple(mv))


def _build_schemas(fcd2_unit="I"):
    u = fcd2_unit
    rows = [
        ("DL1", "(b \\/ c) * a == b * a \\/ c * a"),
        ("DL2", "a * (b \\/ c) == a * b \\/ a * c"),
        ("DL3", "a -* b /\\ c == (a -* b) /\\ (a -* c)"),
        ("DL4", "b \\/ c -* a == (b -* a) /\\ (c -* a)"),
        ("DL5", "b /\\ c *- a == (b *- a) /\\ (c *- a)"),
        ("DL6", "a *- b \\/ c == (a *- b) /\\ (a *- c)"),
        ("ML1", "<>(a \\/ b) == <>a \\/ <>b"),
        ("ML2", "[](a /\\ b) == []a /\\ []b"),
        ("DLd1", "(b /\\ c) + a == (b + a) /\\ (c + a)"),
        ("DLd2", "a + (b /\\ c) == (a + b) /\\ (a + c)"),
        ("DLd3", "a -+ b \\/ c == (a -+ b) \\/ (a -+ c)"),
        ("DLd4", "b /\\ c -+ a == (b -+ a) \\/ (c -+ a)"),
        ("DLd5", "b \\/ c +- a == (b +- a) \\/ (c +- a)"),
        ("DLd6", "a +- b /\\ c == (a +- b) \\/ (a +- c)"),
        ("FC1", "a * I == a", "I * a == a"),
        ("FC2", "I <= a -* a", "I <= a *- a"),
        ("FC3", "a * (b -* c) <= a * b -* c"),
        ("FC4", "(c *- b) * a <= c *- a * b"),
        ("FC5", "(a *- b) * b <= a"),
        ("FC6", "b * (b -* a) <= a"),
        ("FCd1", "a + J == a", "J + a == a"),
        ("FCd2", f"{u} <= a -+ a", f"{u} <= a +- a"),
        ("FCd3", "a + (b -+ c) <= a + b -+ c"),
        ("FCd4", "(c +- b) + a <= c +- a + b"),
        ("FCd5", "(a +- b) + b <= a"),
        ("FCd6", "b + (b -+ a) <= a"),
        ("exchange", "a * b == b * a"),
        ("contraction", "a <= a * a"),
        ("left-weakening", "a <= I"),
        ("right-weakening", "J <= a"),
        ("weak-distribution", "a * (b + c) <= a * b + a"),
        ("weak-distribution-std", "a * (b + c) <= a * b + c"),
        ("FCd1-left", "a <= a + J"),
        ("FCd1-right", "a + J <= a"),
        ("dual-contraction", "a + a <= a"),
    ]
    return {r[0]: _schema(*r) for r in rows}


SCHEMAS = _build_schemas()
ALIASES = {"e": "exchange", "c": "contraction", "lw": "left-weakening", "rw": "right-weakening"}


def get_schema(name: str, fcd2_unit: str = "I") -> AxiomSchema:
    name = ALIASES.get(name, name)
    if fcd2_unit not in ("I", "J"):
        raise FormulaError("fcd2_unit must be 'I' or 'J'")
    table = SCHEMAS if fcd2_unit == "I" else _build_schemas(fcd2_unit)
    if name not in table:
        raise KeyError(f"unknown schema {name!r}")
    return table[name]


def instantiate(schema: AxiomSchema | str, assignment: dict | None = None, fcd2_unit="I") -> list[Inequation]:
    """Substitute formulas for metavariables; returns every member of the family.

    ``assignment`` maps metavariable names to formulas (or formula text).
    Without an assignment each metavariable is replaced by itself.
    """
    if isinstance(schema, str):
        schema = get_schema(schema, fcd2_unit)
    if assignment is None:
        assignment = {m: Var(m) for m in schema.metavariables}
    assignment = {k: parse(v) if isinstance(v, str) else v for k, v in assignment.items()}
    missing = [m for m in schema.metavariables if m not in assignment]
    if missing:
        raise MissingMetavariable(", ".join(missing))
    return [Inequation(substitute(e.lhs, assignment), substitute(e.rhs, assignment), e.relation)
            for e in schema.members]
