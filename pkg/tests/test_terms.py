import pytest
from hypothesis import given, strategies as st

from bitten.bitealg.terms import App, Const, Equation, Var, parse_law, parse_term, variables
from bitten.space import InputError

OPS2 = ["∨", "∧", "⊓", "⊔", "∪", "∩"]


@st.composite
def terms(draw, depth: int = 3):
    if depth == 0 or draw(st.integers(0, 3)) == 0:
        return draw(st.sampled_from([Var("x"), Var("y"), Var("z"), Const("⊥"), Const("1"), Const("⊤")]))
    kind = draw(st.integers(0, 2))
    if kind == 0:
        return App(draw(st.sampled_from(OPS2)), (draw(terms(depth - 1)), draw(terms(depth - 1))))
    if kind == 1:
        return App(draw(st.sampled_from(["ᶜ", "cl1", "cl2"])), (draw(terms(depth - 1)),))
    return App(draw(st.sampled_from(["∼", "𝔏", "⋄"])), (draw(terms(depth - 1)),))


@given(terms())
def test_render_parse_round_trip(t):
    assert parse_term(str(t)) == t


def test_ascii_aliases():
    assert parse_term(r"x \/ y") == parse_term("x ∨ y")
    assert parse_term("L x'") == App("𝔏", (App("ᶜ", (Var("x"),)),))
    assert parse_term("cl1(x) meet bot") == App("⊓", (App("cl1", (Var("x"),)), Const("⊥")))


def test_postfix_binds_tighter_than_prefix():
    assert parse_term("⋄xᶜ") == App("⋄", (App("ᶜ", (Var("x"),)),))


def test_mixed_chain_needs_parentheses():
    with pytest.raises(InputError):
        parse_term("x ∨ y ∧ z")
    assert parse_term("x ∨ y ∨ z") == App("∨", (App("∨", (Var("x"), Var("y"))), Var("z")))


def test_laws_split_premises_chains_and_xi():
    premises, conclusions = parse_law("x ∨ x = y -> cl2(xᶜ) = xᶜ, y = cl1(x) = x ∧ x")
    assert len(premises) == 1 and len(conclusions) == 3
    assert str(conclusions[2]) == "cl1(x) = x ∧ x"
    premises, _ = parse_law("ξ(x, y) -> x = x")
    assert [str(e) for e in premises] == ["cl1(x) = x", "cl2(xᶜ) = xᶜ", "cl1(y) = y", "cl2(yᶜ) = yᶜ"]
    _, (eq,) = parse_law("x ∨ y =ω* y ∨ x")
    assert eq.mode == "ω*"
    _, (eq,) = parse_law("x ∨ y =w y ∨ x")
    assert eq.mode == "ω"


def test_bad_input():
    for text in ("x ∨", "foo(x)", "x = y =ω", "(x"):
        with pytest.raises(InputError):
            parse_law(text)
    with pytest.raises(InputError):
        parse_law("x =ω y -> x = y")
    with pytest.raises(InputError):
        Equation(Var("x"), Var("y"), "≈")


def test_variables():
    assert variables(parse_term("cl1(x ∨ y) ∩ ⊤")) == {"x", "y"}
