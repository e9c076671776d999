"""Tests for the LTL surface syntax parser and negation normal form."""

import pytest
from hypothesis import given, strategies as st

from multirate.formulas import (
    FALSE,
    TRUE,
    Always,
    And,
    Eventually,
    Implies,
    Lit,
    Next,
    Not,
    Or,
    ParseError,
    Prop,
    Release,
    Until,
    parse_formula,
    prop_names,
    to_nnf,
)


class TestParser:
    def test_true_false(self):
        assert parse_formula("True") == TRUE
        assert parse_formula("False") == FALSE

    def test_proposition(self):
        assert parse_formula("safeYaw") == Prop("safeYaw")

    def test_flagship_formula(self):
        f = parse_formula("[] (~ stable -> (safeYaw U (reach /\\ stable)))")
        assert f == Always(
            Implies(Not(Prop("stable")), Until(Prop("safeYaw"), And(Prop("reach"), Prop("stable"))))
        )

    def test_until_right_associative(self):
        assert parse_formula("a U b U c") == Until(Prop("a"), Until(Prop("b"), Prop("c")))

    def test_implication_right_associative(self):
        assert parse_formula("a -> b -> c") == Implies(Prop("a"), Implies(Prop("b"), Prop("c")))

    def test_unary_binds_tightest(self):
        assert parse_formula("[] a -> b") == Implies(Always(Prop("a")), Prop("b"))
        assert parse_formula("~ a /\\ b") == And(Not(Prop("a")), Prop("b"))
        assert parse_formula("<> a U b") == Until(Eventually(Prop("a")), Prop("b"))

    def test_until_binds_tighter_than_and(self):
        assert parse_formula("a U b /\\ c") == And(Until(Prop("a"), Prop("b")), Prop("c"))

    def test_and_binds_tighter_than_or(self):
        assert parse_formula("a \\/ b /\\ c") == Or(Prop("a"), And(Prop("b"), Prop("c")))

    def test_or_binds_tighter_than_implies(self):
        assert parse_formula("a \\/ b -> c") == Implies(Or(Prop("a"), Prop("b")), Prop("c"))

    def test_next_operator(self):
        assert parse_formula("O a") == Next(Prop("a"))
        assert parse_formula("O O a") == Next(Next(Prop("a")))

    def test_nested_unaries(self):
        assert parse_formula("[] <> ~ a") == Always(Eventually(Not(Prop("a"))))

    def test_parentheses(self):
        assert parse_formula("(a U (b U c))") == parse_formula("a U b U c")
        assert parse_formula("(a -> b) -> c") == Implies(Implies(Prop("a"), Prop("b")), Prop("c"))

    def test_syntax_error_carries_position(self):
        with pytest.raises(ParseError) as e:
            parse_formula("a /\\ ")
        assert e.value.position == 5

    def test_unknown_token_rejected(self):
        with pytest.raises(ParseError):
            parse_formula("a & b")
        with pytest.raises(ParseError):
            parse_formula("a + b")

    def test_trailing_input_rejected(self):
        with pytest.raises(ParseError):
            parse_formula("a b")

    def test_unbalanced_parens_rejected(self):
        with pytest.raises(ParseError):
            parse_formula("(a U b")

    def test_empty_input_rejected(self):
        with pytest.raises(ParseError):
            parse_formula("")

    def test_prop_names_collected(self):
        f = parse_formula("[] (~ stable -> (safeYaw U (reach /\\ stable)))")
        assert prop_names(f) == {"stable", "safeYaw", "reach"}


# round-trip: str(formula) parses back to the same tree
_atoms = st.sampled_from([TRUE, FALSE, Prop("p"), Prop("q"), Prop("safeYaw")])
_formulas = st.recursive(
    _atoms,
    lambda kids: st.one_of(
        kids.map(Not),
        kids.map(Always),
        kids.map(Eventually),
        kids.map(Next),
        st.tuples(kids, kids).map(lambda t: And(*t)),
        st.tuples(kids, kids).map(lambda t: Or(*t)),
        st.tuples(kids, kids).map(lambda t: Implies(*t)),
        st.tuples(kids, kids).map(lambda t: Until(*t)),
    ),
    max_leaves=8,
)


class TestRoundTrip:
    @given(_formulas)
    def test_str_parses_back(self, f):
        assert parse_formula(str(f)) == f


class TestNNF:
    def test_literals(self):
        assert to_nnf(Prop("p")) == Lit("p")
        assert to_nnf(Not(Prop("p"))) == Lit("p", True)
        assert to_nnf(Not(Not(Prop("p")))) == Lit("p")

    def test_constants(self):
        assert to_nnf(Not(TRUE)) == FALSE
        assert to_nnf(Not(FALSE)) == TRUE

    def test_de_morgan(self):
        f = to_nnf(Not(And(Prop("p"), Prop("q"))))
        assert f == Or(Lit("p", True), Lit("q", True))

    def test_implication_unfolds(self):
        assert to_nnf(Implies(Prop("p"), Prop("q"))) == Or(Lit("p", True), Lit("q"))

    def test_always_becomes_release(self):
        assert to_nnf(Always(Prop("p"))) == Release(FALSE, Lit("p"))

    def test_negated_always_becomes_until(self):
        assert to_nnf(Not(Always(Prop("p")))) == Until(TRUE, Lit("p", True))

    def test_negated_until_becomes_release(self):
        f = to_nnf(Not(Until(Prop("p"), Prop("q"))))
        assert f == Release(Lit("p", True), Lit("q", True))

    def test_next_commutes_with_negation(self):
        assert to_nnf(Not(Next(Prop("p")))) == Next(Lit("p", True))
