import itertools

import pytest

from substruct import syntax as sx
from substruct.algebra import (bool2, diamond_meet, lukasiewicz3, regression_suite, sugihara3,
                               two_chain_join)
from substruct.frames import check_rcc, transpose_comparison, triple_biconditional, validate_frame
from substruct.jt import (Inconsistent, NotResiduated, World, as_tensor_frame, canonical_frame,
                          compare_jt_canext, jt_extension, model_valuation, truth_lemma_check,
                          truth_lemma_table, verify_existence_lemmas)
from substruct.lattice import bits, is_isomorphism

SUITE = regression_suite(4)


def test_bool2_frame():
    cf = canonical_frame(bool2())
    assert cf.filters == (2,)
    assert cf.frame.gammaI == (0,)
    assert cf.frame.gammaTensor == (frozenset({(0, 0)}),)


def test_luk3_frame():
    cf = canonical_frame(lukasiewicz3())
    f = cf.frame
    assert cf.filters == (4, 6)
    assert f.worlds.leq(0, 1)
    assert f.gammaI == (0, 0)
    assert f.gammaTensor == (frozenset({(0, 0)}), frozenset({(0, 0), (0, 1), (1, 0)}))
    assert f.gammaLRes == (frozenset({(0, 0), (0, 1), (1, 1)}), frozenset({(0, 1)}))
    assert f.gammaRRes == (frozenset({(0, 0), (1, 0), (1, 1)}), frozenset({(1, 0)}))
    assert f.labels == ((2,), (1, 2))


def test_diamond_frame_is_discrete():
    cf = canonical_frame(diamond_meet())
    assert cf.filters == (10, 12)
    assert cf.frame.worlds.is_discrete()
    assert cf.frame.gammaTensor == (frozenset({(0, 0)}), frozenset({(1, 1)}))


def test_sugihara_unit_flag():
    assert canonical_frame(sugihara3()).frame.gammaI == (1, 0)


def test_luk3_jt_tables():
    jt = jt_extension(lukasiewicz3())
    assert jt.I == 2
    assert jt.tensor == [[0, 0, 0], [0, 0, 1], [0, 1, 2]]
    assert jt.lres == [[2, 2, 2], [1, 2, 2], [0, 1, 2]]
    assert jt.rres == [[2, 1, 0], [2, 2, 1], [2, 2, 2]]


def test_not_residuated():
    with pytest.raises(NotResiduated):
        canonical_frame(two_chain_join())


@pytest.mark.parametrize("A", SUITE, ids=lambda A: A.name)
def test_suite_algebra(A):
    cf = canonical_frame(A)
    assert verify_existence_lemmas(A)["ok"]
    assert compare_jt_canext(A)
    validate_frame(cf.frame)
    assert check_rcc(cf.frame.gammaTensor, cf.frame.worlds)
    # the canonical frame is exactly the frame rebuilt from its tensor
    assert transpose_comparison(cf.frame)
    assert as_tensor_frame(cf) == cf.frame
    assert triple_biconditional(cf.frame)


def brute_jt_tensor(A):
    """Complex algebra of the canonical frame, computed on world sets directly."""
    cf = canonical_frame(A)
    n = cf.frame.size
    worlds = range(n)
    up = lambda a: {w for w in worlds if cf.filters[w] >> a & 1}
    out = {}
    for a, b in itertools.product(range(A.carrier.size), repeat=2):
        out[(a, b)] = {w for w in worlds
                       if any(x in up(a) and y in up(b) for x, y in cf.frame.gammaTensor[w])}
    return out, up


@pytest.mark.parametrize("A", SUITE[:12], ids=lambda A: A.name)
def test_tensor_of_images_is_image_of_tensor(A):
    got, up = brute_jt_tensor(A)
    for (a, b), S in got.items():
        assert S == up(A.tensor[a][b])


def test_jt_carrier_isomorphic_to_base():
    for A in SUITE[:8]:
        jt = jt_extension(A)
        cf = canonical_frame(A)
        emb = [jt.carrier.labels.index(model_valuation(cf, {"x": a})["x"]) for a in range(A.carrier.size)]
        assert is_isomorphism(A.carrier, jt.carrier, emb)


def test_truth_lemma_world():
    A = lukasiewicz3()
    w = truth_lemma_check(A, ["p"], ["p * p"], {"p": 1})
    assert isinstance(w, World) and w.verified
    assert w.filter.elements() == [1, 2]


def test_truth_lemma_inconsistent():
    A = lukasiewicz3()
    r = truth_lemma_check(A, ["p * p"], ["p"], {"p": 1})
    assert isinstance(r, Inconsistent) and not r
    assert (r.meet, r.join) == (0, 1)


def test_truth_lemma_accepts_formulas():
    A = diamond_meet()
    w = truth_lemma_check(A, [sx.parse("p")], [sx.parse("q")], {"p": 1, "q": 2})
    assert w.verified and 1 in w.filter and 2 not in w.filter


@pytest.mark.parametrize("A", [bool2(), lukasiewicz3(), sugihara3(), diamond_meet()], ids=lambda A: A.name)
def test_truth_lemma_table(A):
    formulas = [sx.parse(t) for t in ["p", "p * q", "p -* q", "q *- p", "(p -* q) * p", "I /\\ p",
                                      "p -* (q * p) \\/ I"]]
    assert truth_lemma_table(A, formulas, ["p", "q"])


def test_model_valuation_picks_filters_containing_value():
    cf = canonical_frame(lukasiewicz3())
    assert model_valuation(cf, {"p": 1, "q": 2, "r": 0}) == {"p": 2, "q": 3, "r": 0}
    assert list(bits(3)) == [0, 1]
