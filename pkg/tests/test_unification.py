import pytest

from demod import (
    App, Atom, SolutionStream, UnificationProblem, Var, alpha_eq,
    apply_subst, congruent, load_builtin, narrow_unify, print_node,
    unify_syntactic,
)
from demod.parsing import parse_term

from conftest import random_term


def v(name, sort="nat"):
    return Var(name, sort)


class TestSyntacticUnification:
    def test_mgu_found(self):
        a = App("plus", (v("x"), App("0")))
        b = App("plus", (App("S", (v("y"),)), App("0")))
        s = unify_syntactic(a, b)
        assert s == {v("x"): App("S", (v("y"),))}

    def test_occurs_check(self):
        a = v("x")
        b = App("S", (v("x"),))
        assert unify_syntactic(a, b) is None

    def test_symbol_clash(self):
        assert unify_syntactic(App("0"), App("S", (v("x"),))) is None

    def test_var_sort_clash(self):
        assert unify_syntactic(v("x", "nat"), v("y", "elem")) is None

    def test_atoms(self):
        a = Atom("P", (v("x"),))
        b = Atom("P", (App("0"),))
        assert unify_syntactic(a, b) == {v("x"): App("0")}
        assert unify_syntactic(a, Atom("Q", (v("x"),))) is None

    def test_term_vs_atom(self):
        assert unify_syntactic(App("0"), Atom("P")) is None

    def test_mgu_is_most_general(self, rng, addition):
        # any common instance factors through the mgu's unified term
        sig = addition.signature
        for _ in range(100):
            t = random_term(rng, sig, "nat", 3, (v("x"), v("y")))
            s = {v("x"): random_term(rng, sig, "nat", 2),
                 v("y"): random_term(rng, sig, "nat", 2)}
            ground = apply_subst(s, t)
            u = unify_syntactic(t, ground)
            assert u is not None
            assert apply_subst(u, t) == ground


class TestProblemConstruction:
    def test_atom_decomposition(self, addition):
        p = UnificationProblem.of(
            [(Atom("P", (v("x"),)), Atom("P", (App("0"),)))],
            addition.system)
        assert p.pairs == ((v("x"), App("0")),)

    def test_predicate_mismatch_unsolvable(self, assoc):
        p = UnificationProblem.of(
            [(Atom("P", (v("x", "elem"),)), Atom("Q", (v("x", "elem"),)))],
            assoc.system)
        assert p is None


class TestNarrowing:
    def test_assoc_witness(self, assoc):
        sig = assoc.signature
        l = parse_term("(plus a x:elem)", sig)
        r = parse_term("(plus (plus a b) c)", sig)
        assert unify_syntactic(l, r) is None
        stream = narrow_unify(
            UnificationProblem.of([(l, r)], assoc.system), depth=8)
        expected = parse_term("(plus b c)", sig)
        assert any(alpha_eq(s.get(Var("x", "elem")), expected)
                   for s in stream.solutions)

    def test_addition_inverse(self, addition):
        # plus(x, S(0)) ~ S(S(0)) has the solution x -> S(0)
        l = App("plus", (v("x"), App("S", (App("0"),))))
        r = App("S", (App("S", (App("0"),)),))
        stream = narrow_unify(
            UnificationProblem.of([(l, r)], addition.system), depth=6)
        assert {v("x"): App("S", (App("0"),))} in list(stream.solutions)

    def test_syntactic_solutions_included(self, addition):
        l = App("S", (v("x"),))
        r = App("S", (App("0"),))
        stream = narrow_unify(
            UnificationProblem.of([(l, r)], addition.system), depth=3)
        assert {v("x"): App("0")} in list(stream.solutions)

    def test_unsolvable_complete(self, addition):
        l = App("0")
        r = App("S", (App("0"),))
        stream = narrow_unify(
            UnificationProblem.of([(l, r)], addition.system), depth=4)
        assert stream.solutions == ()
        assert stream.complete

    def test_solutions_verified(self, addition, assoc, rng):
        # every emitted substitution joins the instantiated pair
        cases = []
        for theory in (addition, assoc):
            sort = sorted(theory.signature.sorts)[0]
            for _ in range(25):
                l = random_term(rng, theory.signature, sort, 3,
                                (Var("x", sort),))
                r = random_term(rng, theory.signature, sort, 3)
                cases.append((theory, l, r))
        emitted = 0
        for theory, l, r in cases:
            problem = UnificationProblem.of([(l, r)], theory.system)
            stream = narrow_unify(problem, depth=4, cap=8)
            for s in stream.solutions:
                emitted += 1
                assert congruent(theory.system, apply_subst(s, l),
                                 apply_subst(s, r))
        assert emitted > 0

    def test_cap_truncates(self, addition):
        # plus(x, y) ~ z has many solutions; the cap must flag truncation
        l = App("plus", (v("x"), v("y")))
        stream = narrow_unify(
            UnificationProblem.of([(l, v("z"))], addition.system),
            depth=6, cap=2)
        assert len(stream.solutions) <= 2
        assert not stream.complete

    def test_bad_bounds_rejected(self, addition):
        problem = UnificationProblem.of([(v("x"), v("y"))], addition.system)
        with pytest.raises(ValueError):
            narrow_unify(problem, depth=0)
