import pathlib

import pytest

from demod.cli import main

CORPUS = pathlib.Path(__file__).resolve().parent.parent / "corpus"


@pytest.fixture
def run(capsys):
    def go(*argv):
        code = main([str(CORPUS / a[7:]) if a.startswith("corpus/") else a
                     for a in argv])
        out = capsys.readouterr()
        return code, out.out, out.err
    return go


def verdict(out):
    lines = [line for line in out.strip().splitlines()]
    assert lines[-1].startswith("#verdict: "), out
    return lines[-1].split(": ", 1)[1]


class TestNormalize:
    def test_golden(self, run):
        code, out, _ = run("normalize", "builtin:assoc",
                           "(plus (plus a b) (plus (plus c d) e))")
        assert code == 0
        assert "(plus (plus (plus (plus a b) c) d) e)" in out
        assert verdict(out) == "ok"

    def test_fuel_exhausted(self, run):
        code, out, _ = run("normalize", "builtin:crabbe", "P", "--fuel", "50")
        assert code == 2
        assert verdict(out) == "fuel-exhausted"


class TestCongruent:
    def test_yes(self, run):
        code, out, _ = run("congruent", "builtin:crabbe", "P", "(imp P Q)")
        assert code == 0
        assert verdict(out) == "yes"
        assert "method: heuristic" in out

    def test_no(self, run):
        code, out, _ = run("congruent", "builtin:addition", "0", "(S 0)")
        assert code == 1
        assert verdict(out) == "no"


class TestUnify:
    def test_solution_found(self, run):
        code, out, _ = run("unify", "builtin:assoc",
                           "(plus a x:elem)", "(plus (plus a b) c)")
        assert code == 0
        assert "x -> (plus b c)" in out

    def test_unsolvable(self, run):
        code, out, _ = run("unify", "builtin:addition", "0", "(S 0)")
        assert code == 1
        assert verdict(out) == "no"


class TestCheckAndCuts:
    def test_check_corpus_proof(self, run):
        code, out, _ = run("check", "builtin:crabbe",
                           "corpus/crabbe_q.prf", "corpus/crabbe_q.goal")
        assert code == 0
        assert verdict(out) == "ok"

    def test_cuts_found(self, run):
        code, out, _ = run("cuts", "builtin:crabbe",
                           "corpus/crabbe_q.prf", "corpus/crabbe_q.goal")
        assert code == 0
        assert "cuts: 1" in out

    def test_eliminate_diverges_on_crabbe(self, run):
        code, out, _ = run("eliminate", "builtin:crabbe",
                           "corpus/crabbe_q.prf", "corpus/crabbe_q.goal")
        assert code == 2
        assert verdict(out) == "fuel-exhausted"

    def test_identity_no_cuts(self, run):
        code, out, _ = run("cuts", "builtin:empty",
                           "corpus/identity.prf", "corpus/identity.goal")
        assert code == 1
        assert "cuts: 0" in out

    def test_invalid_proof(self, run, tmp_path):
        bad = tmp_path / "bad.prf"
        bad.write_text('(axiom "nope")')
        code, out, _ = run("check", "builtin:empty",
                           str(bad), "corpus/identity.goal")
        assert code == 1
        assert verdict(out) == "invalid"


class TestProveAndProbe:
    def test_prove(self, run):
        code, out, _ = run("prove", "builtin:empty", "(imp P P)")
        assert code == 0
        assert verdict(out) == "proved"
        assert "(imp_i" in out

    def test_prove_fail(self, run):
        code, out, _ = run("prove", "builtin:empty", "P")
        assert code == 1
        assert verdict(out) == "fail"

    def test_probe_consistent(self, run):
        code, out, _ = run("probe", "builtin:empty", "--depth", "6")
        assert code == 0
        assert verdict(out) == "consistent-at-bound"

    def test_probe_inconsistent(self, run):
        code, out, _ = run("probe", "builtin:empty", "--depth", "6",
                           "--hyp", "P", "--hyp", "(imp P bot)")
        assert code == 1
        assert verdict(out) == "inconsistent"


class TestValidateAndSubformulae:
    def test_validate_file(self, run):
        code, out, _ = run("validate", "corpus/addition.thy")
        assert code == 0
        assert "termination: lpo" in out

    def test_validate_builtin_notes(self, run):
        code, out, _ = run("validate", "builtin:crabbe")
        assert code == 0
        assert "termination: unknown" in out
        assert "note:" in out

    def test_subformulae(self, run):
        code, out, _ = run("subformulae", "builtin:def-conj", "P")
        assert code == 0
        assert "status: closed" in out
        assert "classes: 3" in out


class TestErrors:
    def test_parse_error_exit_2(self, run):
        code, out, err = run("normalize", "builtin:addition", "(plus 0")
        assert code == 2
        assert "parse error" in err

    def test_unknown_builtin(self, run):
        code, out, err = run("validate", "builtin:nope")
        assert code == 2

    def test_missing_file(self, run):
        code, out, err = run("validate", "no_such_file.thy")
        assert code == 2
