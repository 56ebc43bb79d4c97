import itertools

import pytest
from hypothesis import given, settings, strategies as st

from substruct.lattice import (FilterSet, FinitePoset, LatticeError, NotALattice, NotAPartialOrder,
                               NotDisjoint, NotDistributive, birkhoff_map, boolean, chain, diamond,
                               enumerate_dls, enumerate_upsets, find_isomorphism, from_covers,
                               is_isomorphism, load_lattice, prime_filters, separate, upset_lattice,
                               validate_dl)


def brute_prime_filters(A):
    """Literal definition over all subsets."""
    out = []
    for m in range(1, 1 << A.size):
        S = {a for a in range(A.size) if m >> a & 1}
        if len(S) == A.size:
            continue
        if any(b not in S for a in S for b in range(A.size) if A.leq(a, b)):
            continue
        if any(A.meet(a, b) not in S for a in S for b in S):
            continue
        if any(A.join(a, b) in S and a not in S and b not in S for a in range(A.size) for b in range(A.size)):
            continue
        out.append(m)
    return sorted(out)


def brute_upsets(P):
    return [m for m in range(1 << P.size)
            if all(not (m >> a & 1) or all(m >> b & 1 for b in range(P.size) if P.leq(a, b))
                   for a in range(P.size))]


def test_dl_counts_up_to_six():
    # numbers of distributive lattices with n elements: 1, 1, 1, 2, 3, 5
    counts = [0] * 7
    for A in enumerate_dls(6):
        counts[A.size] += 1
    assert counts[1:] == [1, 1, 1, 2, 3, 5]


def test_enumerated_dls_pairwise_nonisomorphic():
    dls = enumerate_dls(5)
    for A, B in itertools.combinations(dls, 2):
        assert find_isomorphism(A, B) is None


@pytest.mark.parametrize("A", enumerate_dls(6), ids=lambda A: f"dl{A.size}-{hash(A.up) % 997}")
def test_prime_filters_match_definition(A):
    assert prime_filters(A).masks() == brute_prime_filters(A)


def test_three_chain_primes():
    A = chain(3)
    assert [sorted(F.elements()) for F in prime_filters(A).filters] == [[2], [1, 2]]


def test_diamond_primes_are_atom_filters():
    A = diamond()
    assert [sorted(F.elements()) for F in prime_filters(A).filters] == [[1, 3], [2, 3]]
    assert prime_filters(A).poset.is_discrete()


def test_prime_filters_are_principal_on_join_irreducibles():
    for A in enumerate_dls(6):
        primes = set(prime_filters(A).masks())
        assert primes == {A.up[j] for j in A.join_irreducibles()}


def test_pentagon_not_distributive():
    # 0 < 1 < 2 < 4, 0 < 3 < 4
    with pytest.raises(NotDistributive) as exc:
        from_covers(5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])
    assert (exc.value.a, exc.value.b, exc.value.c) == (2, 1, 3)


def test_m3_not_distributive():
    with pytest.raises(NotDistributive):
        from_covers(5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])


def test_not_a_lattice():
    with pytest.raises(NotALattice):
        from_covers(3, [(0, 1), (0, 2)])  # two maximal elements, no join


def test_not_a_partial_order():
    with pytest.raises(NotAPartialOrder):
        validate_dl(2, [(0, 0), (1, 1), (0, 1), (1, 0)])


def test_birkhoff_round_trip_exhaustive():
    for A in enumerate_dls(6):
        U = upset_lattice(prime_filters(A).poset)
        assert is_isomorphism(A, U, birkhoff_map(A, U=U))


def test_separate_three_chain():
    A = chain(3)
    F = separate(A, A.principal_filter(2), A.principal_ideal(1))
    assert F.elements() == [2]


def test_separate_overlap_raises():
    A = chain(3)
    with pytest.raises(NotDisjoint):
        separate(A, A.principal_filter(1), A.principal_ideal(1))


def test_separate_requires_filter():
    A = chain(3)
    with pytest.raises(LatticeError):
        separate(A, 0b010, A.principal_ideal(0))


def test_separate_is_prime_filter_with_properties():
    A = boolean(3)
    for a in range(A.size):
        for b in range(A.size):
            if A.leq(a, b):
                continue
            F = separate(A, A.principal_filter(a), A.principal_ideal(b))
            assert A.is_prime_filter(F.members)
            assert a in F and b not in F


def test_filterset_contains():
    F = FilterSet(0b110, "filter")
    assert 1 in F and 0 not in F
    assert F.elements() == [1, 2]


def test_load_lattice_roundtrip():
    A = diamond()
    B = load_lattice(A.to_json())
    assert A == B


def test_boolean_is_boolean_chain_is_not():
    assert boolean(2).is_boolean()
    assert not chain(3).is_boolean()


posets = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=8).map(
        lambda rel: FinitePoset(n, [(a, b) for a, b in rel if a < b])))


@settings(max_examples=60, deadline=None)
@given(posets)
def test_upsets_match_brute_force(P):
    assert enumerate_upsets(P.up) == brute_upsets(P)


@settings(max_examples=40, deadline=None)
@given(posets)
def test_upset_lattice_primes_recover_points(P):
    # the prime filters of U(P) are the principal ones of the points, so there are |P| of them
    U = upset_lattice(P)
    assert len(prime_filters(U)) == P.size
    assert validate_dl(U.size, U.pairs()) is not None


def test_poset_dual_and_closures():
    P = FinitePoset.chain(3)
    assert P.dual().leq(2, 0)
    assert P.up_closure(0b010) == 0b110
    assert P.down_closure(0b010) == 0b011
    assert P.is_upset(0b110) and not P.is_upset(0b011)
