import itertools

import pytest
from hypothesis import given, settings, strategies as st

from substruct import syntax as sx
from substruct.algebra import bool2, diamond_meet, holds, lukasiewicz3, regression_suite, sugihara3
from substruct.canext import (SLOT_PROPERTIES, PropertyNotSatisfiedByF, canonical_extension, canonicity_check,
                              check_extension_props, check_preservation, classify_term, extend_dle, pi_ext,
                              sigma_ext, transport)
from substruct.lattice import boolean, chain, diamond, enumerate_dls, is_isomorphism


def brute_closed(ce):
    """Meets of arbitrary subsets of the image, by definition."""
    U, img = ce.carrier, sorted(set(ce.embed))
    out = set()
    for r in range(len(img) + 1):
        for sub in itertools.combinations(img, r):
            out.add(U.meet_all(sub))
    return sorted(out)


def brute_open(ce):
    U, img = ce.carrier, sorted(set(ce.embed))
    out = set()
    for r in range(len(img) + 1):
        for sub in itertools.combinations(img, r):
            out.add(U.join_all(sub))
    return sorted(out)


@pytest.mark.parametrize("A", enumerate_dls(6), ids=lambda A: f"dl{A.size}-{hash(A.up) % 997}")
def test_extension_of_finite_lattice(A):
    ce = canonical_extension(A)
    # embedding is a lattice isomorphism onto the extension
    assert is_isomorphism(A, ce.carrier, ce.embed)
    assert ce.closed == brute_closed(ce) == list(range(ce.carrier.size))
    assert ce.open == brute_open(ce)
    assert ce.clopen() == ce.closed
    assert all(ce.pull(ce.embed[a]) == a for a in range(A.size))


def maps(n, arity):
    return st.lists(st.integers(0, n - 1), min_size=n ** arity, max_size=n ** arity).map(
        lambda vals: dict(zip(itertools.product(range(n), repeat=arity), vals)))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([chain(2), chain(3), diamond(), chain(4)]), st.integers(1, 2), st.data())
def test_sigma_and_pi_agree_with_transport(A, arity, data):
    # on a finite carrier every element is clopen, so both extensions restrict to f itself
    f = data.draw(maps(A.size, arity))
    ce = canonical_extension(A)
    t = transport(f, ce, arity)
    assert sigma_ext(f, ce, arity) == t == pi_ext(f, ce, arity)
    r = check_extension_props(f, ce, arity)
    assert r.restricts and r.below


def test_report_for_monotone_and_antitone():
    A = chain(3)
    ce = canonical_extension(A)
    r = check_extension_props(lambda a, b: A.meet(a, b), ce, 2)
    assert r.monotone and r.smooth and r.ok
    r = check_extension_props(lambda a: 2 - a, ce, 1)
    assert not r.monotone and r.smooth is None and r.ok


@pytest.mark.parametrize("A", [bool2(), lukasiewicz3(), sugihara3(), diamond_meet()], ids=lambda A: A.name)
def test_slot_properties_transfer(A):
    ce = canonical_extension(A.carrier)
    for sym in ("tensor", "lres", "rres"):
        for slot, prop in enumerate(SLOT_PROPERTIES[sym]):
            assert check_preservation(A.tables[sym], ce, 2, slot, prop)


def test_property_not_satisfied_by_map():
    A = chain(3)
    ce = canonical_extension(A)
    with pytest.raises(PropertyNotSatisfiedByF) as exc:
        check_preservation(lambda a, b: 2 - a, ce, 2, 0, "preserves-joins")
    assert exc.value.slot == 0


def test_unknown_property():
    with pytest.raises(ValueError):
        check_preservation(lambda a: a, canonical_extension(chain(2)), 1, 0, "preserves-everything")


def test_extend_dle_is_isomorphic_copy():
    for A in regression_suite(3):
        ext = extend_dle(A)
        ce = canonical_extension(A.carrier)
        for a, b in itertools.product(range(A.carrier.size), repeat=2):
            assert ext.tensor[ce.embed[a]][ce.embed[b]] == ce.embed[A.tensor[a][b]]
        assert ext.I == ce.embed[A.I]


def test_terms_are_stable_on_finite_algebras():
    suite = [bool2(), lukasiewicz3(), diamond_meet()]
    for text in ["p * q", "p -* q", "(p * q) *- (p \\/ q)", "p -* (q * p)"]:
        assert classify_term(sx.parse(text), suite) == ["stable"] * 3


def test_canonicity_statuses():
    e = sx.parse_inequation("p <= p * p")
    assert canonicity_check(lukasiewicz3(), e)["status"] == "hypothesis false"
    r = canonicity_check(sugihara3(), e)
    assert r["status"] == "canonical-instance" and r["holds_in_ext"]


def test_boolean_extension_size():
    ce = canonical_extension(boolean(3))
    assert ce.carrier.size == 8 and len(ce.spectrum) == 3


def test_extension_preserves_validity():
    e = sx.parse_inequation("p * q == q * p")
    for A in regression_suite(3):
        assert bool(holds(A, e)) == bool(holds(extend_dle(A), e))
