import pytest

from demod import ParseError, load_builtin, print_node, print_prop
from demod.parsing import (
    parse_node, parse_proof, parse_prop, parse_sequent, parse_term,
    parse_theory, print_proof, print_sequent, print_theory,
)

from conftest import random_prop


THEORY_TEXT = """\
# comments are ignored
sort nat.
func 0 : nat.
func S : nat -> nat.
func plus : nat nat -> nat.
pred P : nat.

rule add0: (plus 0 y) ~> y.
rule addS: (plus (S x) y) ~> (S (plus x y)).
"""


class TestTerms:
    def test_round_trip(self, addition):
        sig = addition.signature
        for text in ["0", "(S 0)", "(plus (S 0) (plus 0 0))"]:
            assert print_node(parse_term(text, sig)) == text

    def test_variable_needs_sort(self, addition):
        with pytest.raises(ParseError):
            parse_term("x", addition.signature)
        t = parse_term("x:nat", addition.signature)
        assert t.sort == "nat"

    def test_sort_inferred_from_context(self, addition):
        t = parse_term("(S x)", addition.signature)
        assert t.args[0].sort == "nat"

    def test_arity_checked(self, addition):
        with pytest.raises(ParseError):
            parse_term("(S 0 0)", addition.signature)

    def test_error_location(self, addition):
        with pytest.raises(ParseError) as e:
            parse_term("(plus 0 @)", addition.signature)
        assert e.value.line == 1

    def test_inconsistent_variable_sorts(self, assoc):
        with pytest.raises(ParseError):
            parse_prop("(and (P x:elem) (P x:other))", assoc.signature)


class TestProps:
    @pytest.mark.parametrize("text", [
        "top", "bot", "P", "(P 0)",
        "(and (P 0) top)",
        "(imp (P 0) (or (P (S 0)) bot))",
        "(forall (x : nat) (P x))",
        "(exists (x : nat) (imp (P x) (P (S x))))",
    ])
    def test_round_trip(self, addition, text):
        sig = addition.signature
        # "P" is 1-ary here, so patch in a 0-ary predicate set when needed
        if text in ("P",):
            sig = load_builtin("empty").signature
        assert print_prop(parse_prop(text, sig)) == text

    def test_random_round_trip(self, rng, addition):
        sig = addition.signature
        for _ in range(100):
            p = random_prop(rng, sig, 3)
            assert parse_prop(print_prop(p), sig) == p

    def test_unknown_predicate(self, addition):
        with pytest.raises(ParseError):
            parse_prop("(R 0)", addition.signature)

    def test_node_disambiguation(self, addition):
        sig = addition.signature
        assert print_node(parse_node("(plus 0 0)", sig)) == "(plus 0 0)"
        assert print_node(parse_node("(P 0)", sig)) == "(P 0)"


class TestProofs:
    @pytest.mark.parametrize("text", [
        '(axiom "h")',
        '(top_i)',
        '(imp_i "h" (axiom "h"))',
        '(imp_e (axiom "f") (axiom "a"))',
        '(and_i (top_i) (top_i))',
        '(and_e2 (axiom "h"))',
        '(or_i1 (top_i))',
        '(or_e (axiom "d") "a" (axiom "a") "b" (axiom "b"))',
        '(forall_i (x : nat) (top_i))',
        '(forall_e (axiom "h") (S 0))',
        '(exists_i 0 (axiom "h"))',
        '(exists_e (axiom "h") (y : nat) "k" (axiom "k"))',
        '(bot_e (axiom "h"))',
        '(imp_i "h" (axiom "h") : (imp (P 0) (P 0)))',
    ])
    def test_round_trip(self, addition, text):
        sig = addition.signature
        p = parse_proof(text, sig)
        assert parse_proof(print_proof(p), sig) == p

    def test_unknown_tag(self, addition):
        with pytest.raises(ParseError):
            parse_proof('(frobnicate "h")', addition.signature)

    def test_missing_label(self, addition):
        with pytest.raises(ParseError):
            parse_proof('(imp_i (top_i))', addition.signature)


class TestSequents:
    def test_round_trip(self, addition):
        sig = addition.signature
        for text in ["|- (P 0)",
                     "h : (P 0) |- (P 0)",
                     "h : (P 0), g : top |- (and (P 0) top)"]:
            s = parse_sequent(text, sig)
            assert parse_sequent(print_sequent(s), sig) == s

    def test_duplicate_labels_rejected(self, addition):
        with pytest.raises(Exception):
            parse_sequent("h : top, h : top |- top", addition.signature)


class TestTheoryFiles:
    def test_parse(self):
        t = parse_theory(THEORY_TEXT, name="nats")
        assert set(t.signature.functions) == {"0", "S", "plus"}
        assert [r.name for r in t.system.rules] == ["add0", "addS"]

    def test_round_trip(self):
        t = parse_theory(THEORY_TEXT)
        t2 = parse_theory(print_theory(t))
        assert t2.signature == t.signature
        assert t2.system.rules == t.system.rules

    def test_assert_terminating(self):
        t = parse_theory(THEORY_TEXT + "assert terminating.\n")
        assert t.system.asserted_terminating

    def test_prop_rule(self):
        text = "sort i.\npred P.\npred Q.\nrule c: P ~> (imp P Q).\n"
        t = parse_theory(text)
        assert t.system.prop_rules

    def test_rule_with_unknown_symbol(self):
        with pytest.raises(ParseError):
            parse_theory("sort i.\nrule r: (f x) ~> x.\n")

    def test_variable_lhs_rejected(self):
        with pytest.raises(ParseError):
            parse_theory("sort i.\nfunc c : i.\nrule r: x:i ~> c.\n")

    def test_error_has_line(self):
        with pytest.raises(ParseError) as e:
            parse_theory("sort i.\nwat.\n")
        assert e.value.line == 2

    def test_builtin_print_parse(self):
        for name in ("addition", "assoc", "crabbe", "powerset"):
            t = load_builtin(name)
            t2 = parse_theory(print_theory(t))
            assert t2.system.rules == t.system.rules
