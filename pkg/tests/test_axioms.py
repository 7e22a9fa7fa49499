import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from justlog import (
    FALSUM,
    App,
    Atom,
    ByAxiom,
    Constant,
    ConstantSpec,
    AxiomTag,
    Falsum,
    Holds,
    Implies,
    Proof,
    Step,
    Sum,
    SystemId,
    Variable,
    check_proof,
    constant_for,
    cs_contains,
    format_cs_file,
    is_axiomatically_appropriate,
    is_tautology,
    j_instance,
    jd_instance,
    jplus_instance,
    jtop_instance,
    match_axiom,
    neg,
    noc_instance,
    parse_cs_file,
    parse_formula,
)
from justlog.axioms import modal_atoms
from conftest import brute_force_tautology, random_formula

P1, P2 = Atom(1), Atom(2)
s, t = Variable(1), Variable(0)


# ------------------------------------------------------------ tautology

def test_tautology_glue_shape():
    # (P->(Q->R)) -> (~R -> ~(Q&P)) instantiated with justified formulas
    p = parse_formula("x0:~P1->(x1:P1->x0.x1:_|_)")
    q = parse_formula("x1:P1")
    r = parse_formula("x0.x1:_|_")
    f = Implies(
        Implies(p, Implies(q, r)),
        Implies(neg(r), neg(Implies(Implies(q, Implies(p, FALSUM)), FALSUM))),
    )
    # ~(Q&P) written out: ((Q->(P->_|_))->_|_)->_|_
    assert is_tautology(f)


def test_single_modal_atom_is_not_tautology():
    assert not is_tautology(Holds(t, FALSUM))


def test_ex_falso():
    assert is_tautology(Implies(FALSUM, P1))


def test_modal_atoms_are_maximal():
    f = Implies(Holds(t, Implies(P1, P2)), P1)
    assert set(modal_atoms(f)) == {Holds(t, Implies(P1, P2)), P1}


def test_tautology_agrees_with_brute_force():
    rng = random.Random(7)
    checked = 0
    while checked < 1000:
        f = random_formula(rng, rng.randint(0, 5))
        if len(modal_atoms(f)) > 12:
            continue
        assert is_tautology(f) == brute_force_tautology(f)
        checked += 1


# --------------------------------------------------------- schema matching

def test_match_j():
    f = j_instance(s, t, Implies(P1, FALSUM), FALSUM)
    assert match_axiom(f, SystemId.JD) is AxiomTag.J
    # the conclusion term must be literally s.t of the premise terms
    wrong = Implies(
        Holds(s, Implies(P1, P2)),
        Implies(Holds(t, P1), Holds(App(t, s), P2)),
    )
    assert match_axiom(wrong, SystemId.JD) is None


def test_match_jd_only_in_jd():
    f = jd_instance(t)
    assert match_axiom(f, SystemId.JD) is AxiomTag.JD
    assert match_axiom(f, SystemId.JNOC) is None
    assert match_axiom(f, SystemId.JNOC_PLUS) is None


def test_match_noc():
    f = noc_instance(t, P1)
    assert match_axiom(f, SystemId.JNOC) is AxiomTag.NOC
    assert match_axiom(f, SystemId.JNOC_MINUS) is AxiomTag.NOC
    # noc instances are not tautologies, so jd lacking noc cannot accept them
    assert match_axiom(f, SystemId.JD) is None
    # different terms in the two conjuncts is not noc
    g = neg(
        Implies(
            Implies(Holds(t, P1), Implies(Holds(s, Implies(P1, FALSUM)), FALSUM)),
            FALSUM,
        )
    )
    assert match_axiom(g, SystemId.JNOC) is None


def test_match_jplus():
    f = jplus_instance(s, t, P1)
    assert match_axiom(f, SystemId.JD) is AxiomTag.JPLUS
    assert match_axiom(f, SystemId.JNOC_MINUS) is None


def test_match_jtop():
    f = jtop_instance(Sum(s, t))
    assert match_axiom(f, SystemId.JNOC_PLUS) is AxiomTag.JTOP
    assert match_axiom(f, SystemId.JNOC) is None


def test_match_cl():
    assert match_axiom(Implies(P1, P1), SystemId.JD) is AxiomTag.CL
    assert match_axiom(Holds(t, FALSUM), SystemId.JD) is None


def test_minus_language_excludes_sum_tautologies():
    f = Implies(Holds(Sum(s, t), P1), Holds(Sum(s, t), P1))
    assert match_axiom(f, SystemId.JNOC) is AxiomTag.CL
    assert match_axiom(f, SystemId.JNOC_MINUS) is None


def test_matched_axioms_are_accepted_axiom_steps():
    rng = random.Random(13)
    hits = 0
    for _ in range(3000):
        f = random_formula(rng, rng.randint(0, 4))
        for system in SystemId:
            tag = match_axiom(f, system)
            if tag is None:
                continue
            hits += 1
            p = Proof(system, ConstantSpec.empty(system), (Step(f, ByAxiom(tag)),))
            assert check_proof(p).accepted
    assert hits > 50


# ----------------------------------------------------- constant specification

def test_total_contains_axioms_only():
    cs = ConstantSpec.total(SystemId.JNOC)
    assert cs_contains(cs, Constant(0), Implies(FALSUM, P1))
    assert cs_contains(cs, Constant(7), noc_instance(t, P1))
    assert not cs_contains(cs, Constant(0), Holds(t, FALSUM))
    assert not cs_contains(cs, Constant(0), jd_instance(t))


def test_empty_contains_nothing():
    cs = ConstantSpec.empty(SystemId.JD)
    assert not cs_contains(cs, Constant(0), Implies(FALSUM, P1))


def test_finite_lookup_and_least_index():
    ax = Implies(FALSUM, P1)
    cs = ConstantSpec.finite(
        SystemId.JD, [(Constant(1), ax), (Constant(3), ax), (Constant(2), Implies(P1, P1))]
    )
    assert constant_for(cs, ax) == Constant(1)
    assert constant_for(cs, Implies(P1, P1)) == Constant(2)
    assert constant_for(cs, Implies(P2, P2)) is None
    assert constant_for(ConstantSpec.total(SystemId.JD), ax) == Constant(0)


def test_finite_rejects_non_axioms():
    with pytest.raises(ValueError):
        ConstantSpec.finite(SystemId.JD, [(Constant(0), Holds(t, P1))])
    # jd is not a schema of jnoc, so the pair is cross-system
    with pytest.raises(ValueError):
        ConstantSpec.finite(SystemId.JNOC, [(Constant(0), jd_instance(t))])
    # + is outside the jnoc-minus language
    with pytest.raises(ValueError):
        ConstantSpec.finite(SystemId.JNOC_MINUS, [(Constant(0), jplus_instance(s, t, P1))])


def test_axiomatically_appropriate():
    assert is_axiomatically_appropriate(ConstantSpec.total(SystemId.JD))
    assert not is_axiomatically_appropriate(ConstantSpec.empty(SystemId.JD))
    assert not is_axiomatically_appropriate(
        ConstantSpec.finite(SystemId.JD, [(Constant(0), Implies(FALSUM, P1))])
    )


def test_cs_file_round_trip():
    ax = Implies(FALSUM, P1)
    cs = ConstantSpec.finite(SystemId.JNOC, [(Constant(1), ax), (Constant(0), Implies(P1, P1))])
    again = parse_cs_file(format_cs_file(cs), SystemId.JNOC)
    assert again == cs
    assert parse_cs_file("mode total\n", SystemId.JD) == ConstantSpec.total(SystemId.JD)
    with pytest.raises(ValueError):
        parse_cs_file("mode sideways\n", SystemId.JD)
    with pytest.raises(ValueError):
        parse_cs_file("mode finite\nnot a pair\n", SystemId.JD)
