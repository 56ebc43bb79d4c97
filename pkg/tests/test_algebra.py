import itertools

import pytest
from hypothesis import given, settings, strategies as st

from substruct import syntax as sx
from substruct.algebra import (ArityMismatch, DLE, LawViolated, UnboundVariable, bool2, check_residuated,
                               diamond_meet, dual_residuals_of, enumerate_residuated, eval_term, holds,
                               is_associative, is_commutative, load_dle, lukasiewicz3, regression_suite,
                               residuated_from_tensor, sugihara3, term_function, two_chain_join, unit_of,
                               validate_dle)
from substruct.lattice import chain, diamond, enumerate_dls


def galois_residuated(L, t):
    """Literal check: for each a, c the set {b : a*b <= c} is a principal downset, and likewise on the left."""
    n = L.size
    for a, c in itertools.product(range(n), repeat=2):
        S = {b for b in range(n) if L.leq(t[a][b], c)}
        if not any(S == {b for b in range(n) if L.leq(b, m)} for m in range(n)):
            return False
        S = {x for x in range(n) if L.leq(t[x][a], c)}
        if not any(S == {x for x in range(n) if L.leq(x, m)} for m in range(n)):
            return False
    return True


def brute_residuated_monoids(L):
    n = L.size
    out = set()
    for flat in itertools.product(range(n), repeat=n * n):
        t = [list(flat[i * n:(i + 1) * n]) for i in range(n)]
        if unit_of(L, t) is None or not is_associative(n, t):
            continue
        if galois_residuated(L, t):
            out.add(flat)
    return out


@pytest.mark.parametrize("n", [1, 2, 3])
def test_enumeration_matches_brute_force_on_chains(n):
    L = chain(n)
    got = {tuple(itertools.chain.from_iterable(d.tensor)) for d in enumerate_residuated(L)}
    assert got == brute_residuated_monoids(L)


def test_three_chain_has_three_structures():
    # Goedel, Lukasiewicz and Sugihara
    tensors = sorted(d.tensor for d in enumerate_residuated(chain(3)))
    assert tensors == sorted([[[0, 0, 0], [0, 1, 1], [0, 1, 2]], lukasiewicz3().tensor, sugihara3().tensor])


def _iso_classes(L, dles):
    perms = [p for p in itertools.permutations(range(L.size))
             if all(L.leq(a, b) == L.leq(p[a], p[b]) for a in range(L.size) for b in range(L.size))]
    seen = set()
    for d in dles:
        t = d.tensor
        seen.add(min(tuple(p[t[p.index(a)][p.index(b)]] for a in range(L.size) for b in range(L.size))
                     for p in perms))
    return len(seen)


def test_four_element_count_up_to_isomorphism():
    # 20 residuated lattices with four elements
    total = sum(_iso_classes(L, enumerate_residuated(L)) for L in enumerate_dls(4) if L.size == 4)
    assert total == 20


def test_noncommutative_four_chain():
    t = [[0, 0, 0, 0], [0, 0, 0, 1], [0, 1, 2, 2], [0, 1, 2, 3]]
    assert is_associative(4, t) and not is_commutative(4, t)
    d = residuated_from_tensor(chain(4), t)
    assert d is not None and check_residuated(d)
    assert t in [x.tensor for x in enumerate_residuated(chain(4))]


def test_every_enumerated_structure_is_residuated_and_lawful():
    for d in regression_suite(4):
        assert check_residuated(d)
        validate_dle(d)


def test_named_tables():
    luk = lukasiewicz3()
    assert luk.I == 2
    assert luk.tensor == [[0, 0, 0], [0, 0, 1], [0, 1, 2]]
    assert luk.lres == [[2, 2, 2], [1, 2, 2], [0, 1, 2]]
    assert luk.rres == [[2, 1, 0], [2, 2, 1], [2, 2, 2]]
    assert sugihara3().I == 1
    assert bool2().tensor == [[0, 0], [0, 1]]


def test_named_facts():
    e = sx.parse_inequation
    assert holds(lukasiewicz3(), e("p * q == q * p"))
    assert not holds(lukasiewicz3(), e("p <= p * p"))
    assert holds(sugihara3(), e("p <= p * p"))
    assert not holds(sugihara3(), e("p * q <= p"))
    assert holds(diamond_meet(), e("p * q == p /\\ q"))


def test_holds_witness():
    r = holds(lukasiewicz3(), sx.parse_inequation("p <= p * p"))
    assert r.witness == {"p": 1}


def test_join_tensor_not_residuated():
    d = two_chain_join()
    with pytest.raises(LawViolated) as exc:
        validate_dle(d.carrier, {"tensor": d.tensor})
    assert exc.value.law == "DL1"


def test_law_violated_for_residual():
    L = chain(2)
    with pytest.raises(LawViolated) as exc:
        validate_dle(L, {"lres": [[0, 0], [0, 0]]})
    assert exc.value.law == "DL3"


def test_arity_mismatch():
    with pytest.raises(ArityMismatch):
        validate_dle(chain(2), {"tensor": [[0, 0]]})
    with pytest.raises(ArityMismatch):
        validate_dle(chain(2), {"frobnicate": 0})


def test_unbound_variable():
    with pytest.raises(UnboundVariable):
        eval_term(sx.parse("p * q"), bool2(), {"p": 1})


def test_missing_table_is_fragment_violation():
    with pytest.raises(sx.FragmentViolation):
        eval_term(sx.parse("p + q"), bool2(), {"p": 1, "q": 1})


def test_json_round_trip():
    for d in [bool2(), lukasiewicz3(), diamond_meet()]:
        assert load_dle(d.to_json()) == d


def test_term_function_shape():
    names, tab = term_function(sx.parse("p -* q"), lukasiewicz3())
    assert names == ["p", "q"] and len(tab) == 9
    assert tab[(2, 1)] == 1


def test_dual_residuals_of_join():
    L = diamond()
    p = [[L.join(a, b) for b in range(4)] for a in range(4)]
    dl, dr = dual_residuals_of(L, p)
    for a, b, c in itertools.product(range(4), repeat=3):
        assert L.leq(c, p[a][b]) == L.leq(dl[a][c], b) == L.leq(dr[c][b], a)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(regression_suite(3)), st.data())
def test_residuation_law_on_random_terms(A, data):
    # a*(a -* b) <= b and b <= a -* (a*b) hold in every residuated structure
    n = A.carrier.size
    v = {"p": data.draw(st.integers(0, n - 1)), "q": data.draw(st.integers(0, n - 1))}
    L = A.carrier
    assert L.leq(eval_term(sx.parse("p * (p -* q)"), A, v), v["q"])
    assert L.leq(v["q"], eval_term(sx.parse("p -* p * q"), A, v))
    assert L.leq(eval_term(sx.parse("(q *- p) * p"), A, v), v["q"])


def test_dle_repr_and_signature():
    d = lukasiewicz3()
    assert d.signature == ("I", "tensor", "lres", "rres")
    assert "luk3" in repr(d)
    assert isinstance(d, DLE)
