import pytest

from demod import (
    Atom, RewriteSystem, Sequent, Theory, check_proof, consistency_probe,
    find_cuts, load_builtin, search_proof, validate_theory,
)
from demod.parsing import parse_prop


def prove(theory, text, depth=6, **kw):
    return search_proof(theory, parse_prop(text, theory.signature),
                        depth=depth, **kw)


class TestSearch:
    @pytest.mark.parametrize("goal", [
        "(imp P P)",
        "(imp (and P Q) (and Q P))",
        "(imp P (imp Q P))",
        "(imp (imp P (imp Q P)) (imp (imp P Q) (imp P P)))",
        "(imp (or P Q) (or Q P))",
        "(imp bot P)",
        "top",
        "(imp (and P (imp P Q)) Q)",
    ])
    def test_tautologies_proved(self, empty, goal):
        out = prove(empty, goal)
        assert out.proved
        assert out.proof is not None

    @pytest.mark.parametrize("goal", [
        "P",
        "(or P (imp P Q))",
        "(imp (or P Q) P)",
        "bot",
    ])
    def test_non_theorems_fail(self, empty, goal):
        assert prove(empty, goal).status == "fail"

    def test_classical_only_goal_never_proved(self, empty):
        # provable classically, not intuitionistically; the bounded
        # search must report fail or an exceeded bound, never a proof
        out = prove(empty, "(imp (imp (imp P Q) Q) (or P (imp P Q)))")
        assert out.status in ("fail", "bound-exceeded")

    def test_proofs_are_kernel_checked_and_cut_free(self, empty):
        out = prove(empty, "(imp (and P Q) (and Q P))")
        goal = Sequent((), parse_prop("(imp (and P Q) (and Q P))",
                                      empty.signature))
        assert check_proof(empty, out.proof, goal).ok
        assert not find_cuts(empty, out.proof).cuts

    def test_modulo_rules_used(self, def_conj):
        assert prove(def_conj, "(imp (and A B) P)").proved
        assert prove(def_conj, "(imp P A)").proved

    def test_existential_witness_by_narrowing(self, assoc):
        out = prove(assoc, "(exists (x : elem) (imp (P (plus a x))"
                           " (P (plus (plus a b) c))))")
        assert out.proved
        assert out.proof.tag == "exists_i"

    def test_forall_goal(self, addition):
        out = prove(addition,
                    "(forall (x : nat) (imp (P x) (P (plus 0 x))))")
        assert out.proved

    def test_crabbe_q_unprovable_cut_free(self, crabbe):
        assert prove(crabbe, "Q", depth=10).status == "fail"

    def test_hypotheses_used(self, addition):
        sig = addition.signature
        goal = Sequent(
            (("h", parse_prop("(forall (x : nat) (P (S x)))", sig)),),
            parse_prop("(P (plus (S 0) 0))", sig))
        out = search_proof(addition, goal, depth=6)
        assert out.proved

    def test_bad_depth_rejected(self, empty):
        with pytest.raises(ValueError):
            prove(empty, "top", depth=0)


class TestDisjunctionProperty:
    # cut-free closed proofs of disjunctions must end with an or-intro
    @pytest.mark.parametrize("theory_name,goal", [
        ("empty", "(or top P)"),
        ("empty", "(or P top)"),
        ("empty", "(or (imp P P) Q)"),
        ("def-conj", "(or (imp (and A B) P) B)"),
        ("addition", "(or (imp (P 0) (P (plus 0 0))) (P 0))"),
    ])
    def test_ends_with_intro(self, theory_name, goal):
        theory = load_builtin(theory_name)
        out = prove(theory, goal)
        assert out.proved
        assert out.proof.tag in ("or_i1", "or_i2")


class TestProbe:
    def test_empty_consistent(self, empty):
        out = consistency_probe(empty, depth=10)
        assert out.status == "fail"

    def test_pf_collapse_consistent(self):
        out = consistency_probe(load_builtin("pf-collapse"), depth=10)
        assert out.status == "fail"

    def test_axiomatic_presentation_diverges(self):
        sig = load_builtin("pf-collapse").signature
        t = Theory("pf-axiom", sig, RewriteSystem([]))
        validate_theory(t)
        ax = parse_prop(
            "(forall (x : iota) (and (imp (P (f x)) (P x))"
            " (imp (P x) (P (f x)))))", sig)
        out = consistency_probe(t, depth=6, hypotheses=(ax,))
        assert out.status == "bound-exceeded"

    def test_inconsistent_hypotheses_found(self, empty):
        sig = empty.signature
        hyps = (parse_prop("P", sig), parse_prop("(imp P bot)", sig))
        out = consistency_probe(empty, depth=6, hypotheses=hyps)
        assert out.status == "proved"
