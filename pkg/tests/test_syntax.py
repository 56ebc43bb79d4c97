import random

import pytest
from hypothesis import given, settings, strategies as st

from substruct import syntax as sx
from substruct.syntax import (And, Box, Bot, Dia, DLRes, DRRes, Fuse, Inequation, LRes, Or, Par, RRes, Top,
                              UnitI, UnitJ, Var)


def formulas(max_leaves=12):
    atoms = st.sampled_from([Var("p"), Var("q"), Var("r"), Top(), Bot(), UnitI(), UnitJ()])
    binops = [And, Or, Fuse, LRes, RRes, Par, DLRes, DRRes]

    def extend(children):
        return st.one_of(
            st.builds(lambda op, a, b: op(a, b), st.sampled_from(binops), children, children),
            st.builds(lambda op, a: op(a), st.sampled_from([Dia, Box]), children))

    return st.recursive(atoms, extend, max_leaves=max_leaves)


@settings(max_examples=300, deadline=None)
@given(formulas())
def test_print_parse_round_trip(phi):
    assert sx.parse(sx.to_text(phi)) == phi


@settings(max_examples=100, deadline=None)
@given(formulas(), formulas())
def test_inequation_round_trip(a, b):
    e = Inequation(a, b, "<=")
    assert sx.parse_inequation(str(e)) == e


def test_precedence():
    assert sx.parse("p * q \\/ r") == Or(Fuse(Var("p"), Var("q")), Var("r"))
    assert sx.parse("p /\\ q \\/ r") == Or(And(Var("p"), Var("q")), Var("r"))
    assert sx.parse("p -* q * r") == LRes(Var("p"), Fuse(Var("q"), Var("r")))
    assert sx.parse("<>p * q") == Fuse(Dia(Var("p")), Var("q"))
    assert sx.parse("p + q /\\ r") == And(Par(Var("p"), Var("q")), Var("r"))


def test_residuals_associate_right():
    assert sx.parse("p -* q -* r") == LRes(Var("p"), LRes(Var("q"), Var("r")))


def test_mixed_residuals_need_parentheses():
    with pytest.raises(sx.ParseError):
        sx.parse("p -* q *- r")
    assert sx.parse("p -* (q *- r)") == LRes(Var("p"), RRes(Var("q"), Var("r")))


def test_constants_and_dual_symbols():
    assert sx.parse("T") == Top()
    assert sx.parse("_|_") == Bot()
    assert sx.parse("I * J") == Fuse(UnitI(), UnitJ())
    assert sx.parse("p -+ q") == DLRes(Var("p"), Var("q"))
    assert sx.parse("p +- q") == DRRes(Var("p"), Var("q"))
    assert sx.parse("[]p") == Box(Var("p"))


@pytest.mark.parametrize("text", ["", "p *", "(p", "p q", "p <= ", "* p", "p ) "])
def test_parse_errors(text):
    with pytest.raises(sx.ParseError):
        sx.parse_any(text) if "<=" in text else sx.parse(text)


def test_parse_error_position():
    with pytest.raises(sx.ParseError) as exc:
        sx.parse("p * ")
    assert exc.value.position == 4


def test_declared_variables():
    with pytest.raises(sx.UnknownVariable):
        sx.parse("p * s", declared=["p", "q"])


def test_fragment_restriction():
    with pytest.raises(sx.FragmentViolation):
        sx.parse("p + q", allowed=[sx.RL])
    sx.check_fragment(sx.parse("p * q"), [sx.RL])


def test_equals_alias():
    assert sx.parse_inequation("p = q").relation == "=="


def test_depth_size_variables():
    phi = sx.parse("p * (q -* r)")
    assert sx.depth(Var("p")) == 0
    assert sx.depth(phi) == 2
    assert sx.size(phi) == 5
    assert sx.variables(phi) == {"p", "q", "r"}
    assert sx.fragments(phi) == {sx.LATTICE, sx.RL}


def test_parse_lines_skips_comments():
    out = sx.parse_lines("# header\np <= q\n\nq * p == p * q  # trailing\n")
    assert [str(e) for e in out] == ["p <= q", "q * p == p * q"]


def test_schema_members():
    assert len(sx.instantiate("FC1")) == 2
    assert len(sx.instantiate("FC2")) == 2
    assert [str(e) for e in sx.instantiate("FC6")] == ["b * (b -* a) <= a"]
    assert sx.get_schema("e").name == "exchange"


def test_instantiate_with_assignment():
    (e,) = sx.instantiate("contraction", {"a": "p \\/ q"})
    assert str(e) == "p \\/ q <= (p \\/ q) * (p \\/ q)"


def test_missing_metavariable():
    with pytest.raises(sx.MissingMetavariable):
        sx.instantiate("FC3", {"a": "p"})


def test_fcd2_unit_switch():
    assert str(sx.instantiate("FCd2")[0]) == "I <= a -+ a"
    assert str(sx.instantiate("FCd2", fcd2_unit="J")[0]) == "J <= a -+ a"


def test_random_formula_respects_depth_and_fragment():
    rng = random.Random(0)
    for _ in range(200):
        phi = sx.random_formula(rng, ["p", "q"], 3)
        assert sx.depth(phi) <= 3
        assert sx.fragments(phi) <= {sx.LATTICE, sx.BOUNDS, sx.RL}


def test_substitute():
    phi = sx.substitute(sx.parse("a * b"), {"a": Var("p"), "b": UnitI()})
    assert phi == Fuse(Var("p"), UnitI())
