import random

import pytest

from lao import formula as F
from lao.formula import FormulaError, fprint, parse

from conftest import random_ast


def test_precedence_implies_right_associative():
    assert parse("a -> b -> c") == F.Implies(
        F.Atom("a"), F.Implies(F.Atom("b"), F.Atom("c"))
    )


def test_precedence_not_binds_tighter_than_and():
    assert parse("!p & q") == F.And(F.Not(F.Atom("p")), F.Atom("q"))


def test_precedence_and_over_or_over_implies():
    f = parse("a | b & c -> d")
    assert f == F.Implies(F.Or(F.Atom("a"), F.And(F.Atom("b"), F.Atom("c"))), F.Atom("d"))


def test_iff_is_loosest():
    f = parse("a -> b <-> c")
    assert isinstance(f, F.Iff)


def test_diamond_and_next_sugar():
    assert parse("<> p") == F.AF(F.Atom("p"))
    assert parse("X p") == F.AX(F.Atom("p"))
    assert parse("AF p") == F.AF(F.Atom("p"))
    assert parse("AX p") == F.AX(F.Atom("p"))


def test_stit_until_disambiguation():
    assert parse("E[a] p") == F.Stit(F.SingleAgent("a"), F.Atom("p"))
    assert parse("E[p U q]") == F.EU(F.Atom("p"), F.Atom("q"))
    assert parse("E[{a,b}] p") == F.Stit(
        F.AgentGroup(frozenset(["a", "b"])), F.Atom("p")
    )


def test_holder_shapes():
    assert parse("C[a] p").holder == F.SingleAgent("a")
    assert parse("C[{a,b}] p").holder == F.AgentGroup(frozenset(["a", "b"]))
    assert parse("C[a:r] p").holder == F.ReaSingle("a", "r")
    assert parse("C[{a,b}:{r,q}] p").holder == F.ReaGroup(
        frozenset(["a", "b"]), frozenset(["r", "q"])
    )


def test_incharge_example_formula():
    f = parse("incharge(Ogas, monopolist, provide_gas) -> I[monopolist] provide_gas")
    assert isinstance(f, F.Implies)
    assert isinstance(f.left, F.InCharge)
    assert isinstance(f.right, F.Initiative)
    assert f.right.roles == frozenset(["monopolist"])


def test_cap_of_true_parses():
    f = parse("C[a] true")
    assert f == F.Cap(F.SingleAgent("a"), F.TrueF())


def test_print_examples():
    assert fprint(F.AF(F.Attempt(F.ReaSingle("t", "trader"), F.Atom("buy_gas")))) == (
        "<> H[t:trader] buy_gas"
    )
    assert fprint(F.And(F.Atom("p"), F.Atom("q"))) == "p & q"
    assert fprint(F.EU(F.Atom("p"), F.And(F.Atom("q"), F.Atom("r")))) == "E[p U (q & r)]"


def test_negation_in_desire_rejected_with_position():
    with pytest.raises(FormulaError) as e:
        parse("desire(O, !p)")
    assert e.value.col is not None
    assert "negation" in str(e.value)


def test_negation_in_incharge_rejected():
    with pytest.raises(FormulaError):
        parse("incharge(O, r, p & !q)")
    with pytest.raises(FormulaError):
        parse("incharge(O, r, p | q)")


def test_know_allows_literals_only():
    parse("know(O, p & !q)")
    with pytest.raises(FormulaError):
        parse("know(O, p | q)")
    with pytest.raises(FormulaError):
        parse("know(O, !!p)")


def test_bare_until_is_rejected_as_non_ctl():
    with pytest.raises(FormulaError) as e:
        parse("(p U q)")
    assert "CTL" in str(e.value)
    with pytest.raises(FormulaError):
        parse("p U q")


def test_unbalanced_paren_positioned():
    with pytest.raises(FormulaError) as e:
        parse("((p")
    assert e.value.pos is not None


def test_trailing_garbage_rejected():
    with pytest.raises(FormulaError):
        parse("AG F p")  # F alone is an atom, p dangles


def test_jc_restricted_to_agent_groups():
    with pytest.raises(FormulaError):
        parse("JC[a:r] p")


def test_empty_group_rejected():
    with pytest.raises(FormulaError):
        parse("C[{}] p")


def test_comments_and_whitespace():
    f = parse("p &  # a comment\n q")
    assert f == F.And(F.Atom("p"), F.Atom("q"))


def test_hyphenated_identifiers():
    assert parse("provide-gas") == F.Atom("provide-gas")


def test_roundtrip_fuzz_small():
    rng = random.Random(7)
    for _ in range(300):
        ast = random_ast(rng, depth=rng.randint(1, 5))
        assert parse(fprint(ast)) == ast


def test_and_chains_roundtrip_associativity():
    left = F.And(F.And(F.Atom("a"), F.Atom("b")), F.Atom("c"))
    right = F.And(F.Atom("a"), F.And(F.Atom("b"), F.Atom("c")))
    assert parse(fprint(left)) == left
    assert parse(fprint(right)) == right
    assert fprint(left) != fprint(right)
