"""Shared helpers: seeded random term and proposition generators, and a
terminal summary hook for the acceptance criteria lines."""

import random

import pytest

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_line("")
        terminalreporter.write_line("acceptance criteria:")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

from demod import (
    And, App, Atom, BOT, Exists, ForAll, Imp, Or, TOP, Var, load_builtin,
)


def random_term(rng, sig, sort, depth=3, vars_pool=()):
    """A random well-sorted term of the given sort."""
    ctors = [(fn, argsorts) for fn, (argsorts, res) in sig.functions.items()
             if res == sort]
    pool = [v for v in vars_pool if v.sort == sort]
    if depth <= 0:
        leaves = [(fn, a) for fn, a in ctors if not a]
        if pool and (not leaves or rng.random() < 0.5):
            return rng.choice(pool)
        if leaves:
            fn, _ = rng.choice(leaves)
            return App(fn)
        # no constants of this sort: fall back to a fresh variable
        return Var(f"v{rng.randrange(1000)}", sort)
    if pool and rng.random() < 0.25:
        return rng.choice(pool)
    if not ctors:
        return Var(f"v{rng.randrange(1000)}", sort)
    fn, argsorts = rng.choice(ctors)
    return App(fn, tuple(random_term(rng, sig, s, depth - 1, vars_pool)
                         for s in argsorts))


def random_atom(rng, sig, depth=2, vars_pool=()):
    pred = rng.choice(list(sig.predicates))
    return Atom(pred, tuple(random_term(rng, sig, s, depth, vars_pool)
                            for s in sig.predicates[pred]))


def random_prop(rng, sig, depth=3, vars_pool=(), quantifiers=True):
    if depth <= 0:
        return rng.choice([random_atom(rng, sig, 1, vars_pool), TOP, BOT])
    kind = rng.randrange(8 if quantifiers and sig.sorts else 6)
    if kind == 0:
        return random_atom(rng, sig, 2, vars_pool)
    if kind == 1:
        return rng.choice([TOP, BOT])
    sub = lambda: random_prop(rng, sig, depth - 1, vars_pool, quantifiers)
    if kind == 2:
        return And(sub(), sub())
    if kind == 3:
        return Or(sub(), sub())
    if kind in (4, 5):
        return Imp(sub(), sub())
    sort = rng.choice(sorted(sig.sorts))
    v = Var(f"q{rng.randrange(1000)}", sort)
    body = random_prop(rng, sig, depth - 1, tuple(vars_pool) + (v,),
                       quantifiers)
    return (ForAll if kind == 6 else Exists)(v, body)


@pytest.fixture
def rng():
    return random.Random(20260823)


@pytest.fixture
def addition():
    return load_builtin("addition")


@pytest.fixture
def assoc():
    return load_builtin("assoc")


@pytest.fixture
def crabbe():
    return load_builtin("crabbe")


@pytest.fixture
def empty():
    return load_builtin("empty")


@pytest.fixture
def def_conj():
    return load_builtin("def-conj")
