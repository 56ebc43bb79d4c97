"""Finite posets and finite distributive lattices.

Elements are the integers ``0..n-1``.  Subsets of a carrier are encoded as
int bitmasks (bit ``i`` set means element ``i`` is a member), and every
enumeration in this module is ordered by ascending mask value so that
outputs are reproducible.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

DEFAULT_UPSET_CAP = 1 << 20


class LatticeError(ValueError):
    """Base class for lattice diagnostics."""


class NotAPartialOrder(LatticeError):
    def __init__(self, law, witness):
        self.law = law
        self.witness = witness
        super().__init__(f"not a partial order: {law} fails at {witness}")


class NotALattice(LatticeError):
    def __init__(self, a, b, missing):
        self.a, self.b, self.missing = a, b, missing
        super().__init__(f"not a lattice: no {missing} for ({a}, {b})")


class NotDistributive(LatticeError):
    def __init__(self, a, b, c):
        self.a, self.b, self.c = a, b, c
        super().__init__(f"not distributive: a/\\(b\\/c) != (a/\\b)\\/(a/\\c) at ({a}, {b}, {c})")


class NotBounded(LatticeError):
    pass


class SizeLimitExceeded(LatticeError):
    pass


class NotDisjoint(LatticeError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"filter and ideal share element {witness}")


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(items: Iterable[int]) -> int:
    m = 0
    for i in items:
        m |= 1 << i
    return m


def _closure(n, pairs):
    up = [1 << i for i in range(n)]
    for i, j in pairs:
        up[i] |= 1 << j
    changed = True
    while changed:
        changed = False
        for i in range(n):
            acc = up[i]
            for j in bits(up[i]):
                acc |= up[j]
            if acc != up[i]:
                up[i] = acc
                changed = True
    return up


def _check_order(n, up):
    for i in range(n):
        if not up[i] >> i & 1:
            raise NotAPartialOrder("reflexivity", (i,))
    for i in range(n):
        for j in bits(up[i]):
            if j != i and up[j] >> i & 1:
                raise NotAPartialOrder("antisymmetry", (i, j))
    for i in range(n):
        for j in bits(up[i]):
            extra = up[j] & ~up[i]
            if extra:
                k = next(bits(extra))
                raise NotAPartialOrder("transitivity", (i, j, k))


def _up_from_pairs(n, pairs):
    up = [0] * n
    for i, j in pairs:
        if not (0 <= i < n and 0 <= j < n):
            raise LatticeError(f"pair ({i}, {j}) out of range for {n} elements")
        up[i] |= 1 << j
    return up


def _down_from_up(n, up):
    down = [0] * n
    for i in range(n):
        for j in bits(up[i]):
            down[j] |= 1 << i
    return down


class FinitePoset:
    """A finite partial order on ``0..size-1``.

    ``up[i]`` is the mask of elements above ``i`` and ``down[i]`` the mask of
    elements below it (both include ``i``).
    """

    def __init__(self, size: int, leq: Iterable[tuple[int, int]] = (), closed: bool = False):
        self.size = size
        pairs = list(leq)
        up = _closure(size, pairs) if not closed else _up_from_pairs(size, pairs)
        _check_order(size, up)
        self.up = tuple(up)
        self.down = tuple(_down_from_up(size, up))
        self.full = (1 << size) - 1
        self._upsets = None

    @classmethod
    def from_up(cls, up: Sequence[int]):
        p = cls.__new__(cls)
        p.size = len(up)
        _check_order(p.size, list(up))
        p.up = tuple(up)
        p.down = tuple(_down_from_up(p.size, up))
        p.full = (1 << p.size) - 1
        p._upsets = None
        return p

    @classmethod
    def discrete(cls, n):
        return cls(n)

    @classmethod
    def chain(cls, n):
        return cls(n, [(i, i + 1) for i in range(n - 1)])

    def leq(self, a, b) -> bool:
        return bool(self.up[a] >> b & 1)

    def pairs(self):
        return [(i, j) for i in range(self.size) for j in bits(self.up[i])]

    def dual(self) -> "FinitePoset":
        return FinitePoset.from_up(self.down)

    def is_discrete(self):
        return all(self.up[i] == 1 << i for i in range(self.size))

    def is_upset(self, m: int) -> bool:
        return all(self.up[i] & ~m == 0 for i in bits(m))

    def is_downset(self, m: int) -> bool:
        return all(self.down[i] & ~m == 0 for i in bits(m))

    def up_closure(self, m: int) -> int:
        acc = 0
        for i in bits(m):
            acc |= self.up[i]
        return acc

    def down_closure(self, m: int) -> int:
        acc = 0
        for i in bits(m):
            acc |= self.down[i]
        return acc

    def upsets(self) -> list[int]:
        """All upsets as masks, ascending."""
        if self._upsets is None:
            self._upsets = enumerate_upsets(self.up)
        return self._upsets

    def __eq__(self, other):
        return isinstance(other, FinitePoset) and self.up == other.up

    def __hash__(self):
        return hash(self.up)

    def __repr__(self):
        return f"FinitePoset(size={self.size}, leq={self.pairs()})"


def enumerate_upsets(up: Sequence[int], cap: int | None = None) -> list[int]:
    """Enumerate the upsets of the order given by ``up`` masks, ascending.

    Elements are decided from the top of a linear extension downwards, so an
    element may join the set only when everything above it already has.
    """
    n = len(up)
    order = sorted(range(n), key=lambda i: bin(up[i]).count("1"))
    out = []

    def rec(k, m):
        if cap is not None and len(out) > cap:
            raise SizeLimitExceeded(f"more than {cap} upsets")
        if k == n:
            out.append(m)
            return
        i = order[k]
        rec(k + 1, m)
        above = up[i] & ~(1 << i)
        if above & ~m == 0:
            rec(k + 1, m | 1 << i)

    rec(0, 0)
    out.sort()
    return out


@dataclass(frozen=True)
class FilterSet:
    """A set of lattice elements tagged as filter, ideal or prime-filter."""

    members: int
    kind: str = "filter"

    def __contains__(self, a):
        return bool(self.members >> a & 1)

    def elements(self):
        return list(bits(self.members))

    def __repr__(self):
        return f"FilterSet({self.kind}, {sorted(bits(self.members))})"


class FiniteDL:
    """A finite distributive lattice with cached meet and join tables.

    Build instances with :func:`validate_dl` (or the helpers
    :func:`chain`, :func:`boolean`, :func:`from_covers`); the constructor
    itself trusts its arguments.
    """

    def __init__(self, up, meet, join, bottom, top, bounded=True, labels=None):
        self.size = len(up)
        self.up = tuple(up)
        self.down = tuple(_down_from_up(self.size, up))
        self.meet_table = meet
        self.join_table = join
        self.bottom = bottom
        self.top = top
        self.bounded = bounded
        self.labels = labels
        self.full = (1 << self.size) - 1
        self._spectrum = None

    # order and operations
    def leq(self, a, b) -> bool:
        return bool(self.up[a] >> b & 1)

    def meet(self, a, b):
        return self.meet_table[a][b]

    def join(self, a, b):
        return self.join_table[a][b]

    def meet_all(self, xs: Iterable[int]):
        acc = self.top
        for x in xs:
            acc = self.meet_table[acc][x]
        return acc

    def join_all(self, xs: Iterable[int]):
        acc = self.bottom
        for x in xs:
            acc = self.join_table[acc][x]
        return acc

    def elements(self):
        return range(self.size)

    def pairs(self):
        return [(i, j) for i in range(self.size) for j in bits(self.up[i])]

    @property
    def poset(self) -> FinitePoset:
        return FinitePoset.from_up(self.up)

    # subsets
    def principal_filter(self, a) -> FilterSet:
        return FilterSet(self.up[a], "filter")

    def principal_ideal(self, a) -> FilterSet:
        return FilterSet(self.down[a], "ideal")

    def is_filter(self, m: int) -> bool:
        if m == 0:
            return not self.bounded
        for a in bits(m):
            if self.up[a] & ~m:
                return False
        for a in bits(m):
            for b in bits(m):
                if not m >> self.meet_table[a][b] & 1:
                    return False
        return True

    def is_ideal(self, m: int) -> bool:
        if m == 0:
            return not self.bounded
        for a in bits(m):
            if self.down[a] & ~m:
                return False
        for a in bits(m):
            for b in bits(m):
                if not m >> self.join_table[a][b] & 1:
                    return False
        return True

    def is_prime_filter(self, m: int) -> bool:
        if m == 0 or m == self.full or not self.is_filter(m):
            return False
        for a in range(self.size):
            for b in range(a + 1, self.size):
                if m >> self.join_table[a][b] & 1 and not (m >> a & 1 or m >> b & 1):
                    return False
        return True

    def join_irreducibles(self) -> list[int]:
        out = []
        for j in range(self.size):
            below = self.down[j] & ~(1 << j)
            if j == self.bottom:
                continue
            if self.join_all(bits(below)) != j:
                out.append(j)
        return out

    def is_boolean(self) -> bool:
        for a in range(self.size):
            if not any(self.meet_table[a][b] == self.bottom and self.join_table[a][b] == self.top
                       for b in range(self.size)):
                return False
        return True

    def to_json(self):
        return {"size": self.size, "leq": [list(p) for p in self.pairs()], "bounded": self.bounded}

    def __eq__(self, other):
        return isinstance(other, FiniteDL) and self.up == other.up and self.bounded == other.bounded

    def __hash__(self):
        return hash((self.up, self.bounded))

    def __repr__(self):
        return f"FiniteDL(size={self.size}, bottom={self.bottom}, top={self.top})"


def validate_dl(size: int, leq: Iterable[tuple[int, int]], bounded: bool = True,
                close: bool = False) -> FiniteDL:
    """Check a candidate order relation and return the lattice it defines.

    With ``close=True`` the reflexive-transitive closure of ``leq`` is used
    (handy for giving covering pairs); otherwise the relation is taken as
    given and must itself be a partial order.
    """
    if size < 1:
        raise LatticeError("a lattice needs at least one element")
    pairs = list(leq)
    up = _closure(size, pairs) if close else _up_from_pairs(size, pairs)
    _check_order(size, up)
    down = _down_from_up(size, up)
    meet = [[0] * size for _ in range(size)]
    join = [[0] * size for _ in range(size)]
    for a in range(size):
        for b in range(a, size):
            lower = down[a] & down[b]
            m = next((c for c in bits(lower) if lower & ~down[c] == 0), None)
            if m is None:
                raise NotALattice(a, b, "meet")
            upper = up[a] & up[b]
            j = next((c for c in bits(upper) if upper & ~up[c] == 0), None)
            if j is None:
                raise NotALattice(a, b, "join")
            meet[a][b] = meet[b][a] = m
            join[a][b] = join[b][a] = j
    for a in range(size):
        for b in range(size):
            for c in range(size):
                if meet[a][join[b][c]] != join[meet[a][b]][meet[a][c]]:
                    raise NotDistributive(a, b, c)
    bottom = next(i for i in range(size) if up[i] == (1 << size) - 1)
    top = next(i for i in range(size) if down[i] == (1 << size) - 1)
    return FiniteDL(up, meet, join, bottom, top, bounded)


def from_covers(size, covers, bounded=True) -> FiniteDL:
    return validate_dl(size, covers, bounded, close=True)


def chain(n: int) -> FiniteDL:
    return from_covers(n, [(i, i + 1) for i in range(n - 1)])


def boolean(k: int) -> FiniteDL:
    """The Boolean lattice of subsets of a k-set; element i is the subset with mask i."""
    n = 1 << k
    return validate_dl(n, [(i, j) for i in range(n) for j in range(n) if i & ~j == 0])


def diamond() -> FiniteDL:
    """Bottom 0, atoms 1 and 2, top 3."""
    return boolean(2)


def load_lattice(obj) -> FiniteDL:
    if isinstance(obj, str):
        obj = json.loads(obj)
    return validate_dl(int(obj["size"]), [tuple(p) for p in obj["leq"]], bool(obj.get("bounded", True)))


# prime filters and duality

@dataclass(frozen=True)
class Spectrum:
    """The prime filters of a lattice together with their inclusion order."""

    filters: tuple
    poset: FinitePoset

    def masks(self):
        return [f.members for f in self.filters]

    def index(self, members: int) -> int:
        return self.masks().index(members)

    def __len__(self):
        return len(self.filters)


def prime_filters(A: FiniteDL) -> Spectrum:
    """All prime filters of ``A`` ordered by inclusion, ascending by mask.

    Candidates are the upsets of ``A`` (which are enumerated with pruning);
    each candidate is kept when it is a nonempty proper filter and prime.
    """
    if A._spectrum is not None:
        return A._spectrum
    found = [m for m in enumerate_upsets(A.up) if A.is_prime_filter(m)]
    found.sort()
    leq = [(i, j) for i, a in enumerate(found) for j, b in enumerate(found) if a & ~b == 0]
    spec = Spectrum(tuple(FilterSet(m, "prime-filter") for m in found),
                    FinitePoset(len(found), leq, closed=True))
    A._spectrum = spec
    return spec


def upset_lattice(P: FinitePoset, cap: int = DEFAULT_UPSET_CAP) -> FiniteDL:
    """The lattice of upsets of ``P`` ordered by inclusion.

    Element ``i`` of the result is the ``i``-th upset in ascending mask
    order; ``labels[i]`` holds that mask.
    """
    if (1 << P.size) > cap:
        # the exact count may still be small, so only refuse when it is too
        ups = enumerate_upsets(P.up, cap)
    else:
        ups = P.upsets()
    index = {m: i for i, m in enumerate(ups)}
    n = len(ups)
    up = [0] * n
    for i, a in enumerate(ups):
        for j, b in enumerate(ups):
            if a & ~b == 0:
                up[i] |= 1 << j
    meet = [[index[a & b] for b in ups] for a in ups]
    join = [[index[a | b] for b in ups] for a in ups]
    return FiniteDL(up, meet, join, index[0], index[P.full], True, labels=tuple(ups))


def birkhoff_map(A: FiniteDL, spectrum: Spectrum | None = None, U: FiniteDL | None = None) -> list[int]:
    """The map ``a -> {F prime : a in F}`` as indices into the upset lattice."""
    spectrum = spectrum or prime_filters(A)
    U = U or upset_lattice(spectrum.poset)
    index = {m: i for i, m in enumerate(U.labels)}
    out = []
    for a in range(A.size):
        m = mask_of(k for k, f in enumerate(spectrum.filters) if a in f)
        out.append(index[m])
    return out


def is_isomorphism(A: FiniteDL, B: FiniteDL, f: Sequence[int]) -> bool:
    """True when ``f`` is a bijection with ``a <= b`` iff ``f(a) <= f(b)``."""
    if A.size != B.size or sorted(f) != list(range(B.size)):
        return False
    return all(A.leq(a, b) == B.leq(f[a], f[b]) for a in range(A.size) for b in range(A.size))


def find_isomorphism(A: FiniteDL, B: FiniteDL):
    """Brute-force search for an order isomorphism (small lattices only)."""
    if A.size != B.size:
        return None
    deg_a = [(bin(A.up[i]).count("1"), bin(A.down[i]).count("1")) for i in range(A.size)]
    deg_b = [(bin(B.up[i]).count("1"), bin(B.down[i]).count("1")) for i in range(B.size)]
    if sorted(deg_a) != sorted(deg_b):
        return None
    cands = [[j for j in range(B.size) if deg_b[j] == deg_a[i]] for i in range(A.size)]
    f = [None] * A.size
    used = set()

    def rec(i):
        if i == A.size:
            return True
        for j in cands[i]:
            if j in used:
                continue
            if all(A.leq(k, i) == B.leq(f[k], j) and A.leq(i, k) == B.leq(j, f[k]) for k in range(i)):
                f[i] = j
                used.add(j)
                if rec(i + 1):
                    return True
                used.discard(j)
        return False

    return list(f) if rec(0) else None


def separate(A: FiniteDL, F: FilterSet | int, I: FilterSet | int) -> FilterSet:
    """Return the first prime filter (ascending mask) containing F and avoiding I."""
    fm = F.members if isinstance(F, FilterSet) else F
    im = I.members if isinstance(I, FilterSet) else I
    if not A.is_filter(fm):
        raise LatticeError("first argument is not a filter")
    if not A.is_ideal(im):
        raise LatticeError("second argument is not an ideal")
    if fm & im:
        raise NotDisjoint(next(bits(fm & im)))
    for P in prime_filters(A).filters:
        if fm & ~P.members == 0 and P.members & im == 0:
            return P
    raise LatticeError("no prime filter separates these sets")


def enumerate_dls(max_size: int) -> list[FiniteDL]:
    """All distributive lattices with at most ``max_size`` elements, up to isomorphism.

    Elements are labelled along a linear extension (0 bottom, n-1 top), so
    only relations ``i < j`` between inner elements need guessing.
    """
    out = []
    for n in range(1, max_size + 1):
        if n <= 2:
            out.append(chain(n))
            continue
        inner = list(range(1, n - 1))
        slots = [(i, j) for i in inner for j in inner if i < j]
        found = []
        base = [(0, i) for i in range(n)] + [(i, n - 1) for i in range(n)] + [(i, i) for i in range(n)]
        for choice in itertools.product((False, True), repeat=len(slots)):
            rel = base + [p for p, c in zip(slots, choice) if c]
            try:
                L = validate_dl(n, set(rel))
            except LatticeError:
                continue
            if not any(find_isomorphism(L, M) is not None for M in found):
                found.append(L)
        out.extend(found)
    return out
