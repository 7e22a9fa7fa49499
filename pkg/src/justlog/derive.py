"""Constructive derivation builders.

Every function here emits a fully expanded linear proof that check_proof
accepts; there are no derived-rule references.  Propositional glue steps
are single tautology instances.
"""

from __future__ import annotations

from typing import Optional

from .axioms import (
    SCHEMAS,
    AxiomTag,
    ConstantSpec,
    SystemId,
    constant_for,
    is_axiomatically_appropriate,
    j_instance,
    jd_instance,
    jplus_instance,
    jtop_instance,
    noc_instance,
)
from .proof import ByAN, ByAxiom, ByMP, Proof, Step, check_proof
from .syntax import (
    FALSUM,
    App,
    Atom,
    Bang,
    Formula,
    Holds,
    Implies,
    Sum,
    Term,
    conj,
    neg,
    print_formula,
)


class DeriveError(Exception):
    """Precondition failure; ``code`` is a stable machine-readable string."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class _Builder:
    def __init__(self):
        self.steps: list[Step] = []

    def add(self, formula: Formula, why) -> int:
        self.steps.append(Step(formula, why))
        return len(self.steps)


def interconsistency_formula(s: Term, t: Term, a: Formula) -> Formula:
    """~(s:A & t:~A) in expanded form."""
    return neg(conj(Holds(s, a), Holds(t, neg(a))))


def _require_schemas(cs: ConstantSpec, *tags: AxiomTag) -> SystemId:
    system = cs.system
    if AxiomTag.JPLUS in tags and system is SystemId.JNOC_MINUS:
        raise DeriveError("plus-required", "this derivation needs the + operation")
    missing = [t for t in tags if t not in SCHEMAS[system]]
    if missing:
        raise DeriveError(
            "wrong-system",
            f"system {system.value} lacks schema(s) {', '.join(t.value for t in missing)}",
        )
    return system


def derive_interconsistency(
    s: Term, t: Term, a: Formula, cs: Optional[ConstantSpec] = None
) -> Proof:
    """Proof of ~(s:A & t:~A) from j and jd; works for any specification."""
    if cs is None:
        cs = ConstantSpec.empty(SystemId.JD)
    _require_schemas(cs, AxiomTag.J, AxiomTag.JD)
    goal = interconsistency_formula(s, t, a)
    b = _Builder()
    # t:(A->_|_) -> (s:A -> t.s:_|_)
    jx = b.add(j_instance(t, s, a, FALSUM), ByAxiom(AxiomTag.J))
    dx = b.add(jd_instance(App(t, s)), ByAxiom(AxiomTag.JD))
    glue = Implies(b.steps[jx - 1].formula, Implies(b.steps[dx - 1].formula, goal))
    gx = b.add(glue, ByAxiom(AxiomTag.CL))
    m1 = b.add(Implies(b.steps[dx - 1].formula, goal), ByMP(gx, jx))
    b.add(goal, ByMP(m1, dx))
    return Proof(cs.system, cs, tuple(b.steps))


def derive_noc_in_jd(t: Term, a: Formula, cs: Optional[ConstantSpec] = None) -> Proof:
    """Every no-conflict instance is derivable from jd, any specification."""
    return derive_interconsistency(t, t, a, cs)


def _interconsistency_steps(b: _Builder, s: Term, t: Term, a: Formula) -> int:
    """Append the j+/noc route to ~(s:A & t:~A); returns the conclusion index."""
    goal = interconsistency_formula(s, t, a)
    p1 = b.add(jplus_instance(s, t, a), ByAxiom(AxiomTag.JPLUS))
    p2 = b.add(jplus_instance(s, t, neg(a)), ByAxiom(AxiomTag.JPLUS))
    nx = b.add(noc_instance(Sum(s, t), a), ByAxiom(AxiomTag.NOC))
    glue = Implies(
        b.steps[p1 - 1].formula,
        Implies(b.steps[p2 - 1].formula, Implies(b.steps[nx - 1].formula, goal)),
    )
    gx = b.add(glue, ByAxiom(AxiomTag.CL))
    m1 = b.add(glue.consequent, ByMP(gx, p1))
    m2 = b.add(glue.consequent.consequent, ByMP(m1, p2))
    return b.add(goal, ByMP(m2, nx))


def derive_interconsistency_jnoc(
    s: Term, t: Term, a: Formula, cs: Optional[ConstantSpec] = None
) -> Proof:
    """Proof of ~(s:A & t:~A) from j+ and noc; works for any specification."""
    if cs is None:
        cs = ConstantSpec.empty(SystemId.JNOC)
    _require_schemas(cs, AxiomTag.JPLUS, AxiomTag.NOC)
    b = _Builder()
    _interconsistency_steps(b, s, t, a)
    return Proof(cs.system, cs, tuple(b.steps))


def derive_jd_in_jnoc(t: Term, p_atom: Atom, cs: ConstantSpec) -> Proof:
    """Proof of ~(t:_|_) in the no-conflict system.

    Needs constants justifying _|_->P and _|_->~P; a specification
    missing either pair cannot support the derivation.
    """
    if not isinstance(p_atom, Atom):
        raise TypeError("p_atom must be an atomic proposition")
    _require_schemas(cs, AxiomTag.J, AxiomTag.JPLUS, AxiomTag.NOC)
    ax1 = Implies(FALSUM, p_atom)
    ax2 = Implies(FALSUM, neg(p_atom))
    r = constant_for(cs, ax1)
    if r is None:
        raise DeriveError(
            "cs-missing-constant",
            f"no constant justifies {print_formula(ax1)}",
        )
    s = constant_for(cs, ax2)
    if s is None:
        raise DeriveError(
            "cs-missing-constant",
            f"no constant justifies {print_formula(ax2)}",
        )
    bot = Holds(t, FALSUM)
    rt, st = App(r, t), App(s, t)
    b = _Builder()
    a1 = b.add(Holds(r, ax1), ByAN(r, ax1, 0))
    a2 = b.add(Holds(s, ax2), ByAN(s, ax2, 0))
    j1 = b.add(j_instance(r, t, FALSUM, p_atom), ByAxiom(AxiomTag.J))
    j2 = b.add(j_instance(s, t, FALSUM, neg(p_atom)), ByAxiom(AxiomTag.J))
    m1 = b.add(Implies(bot, Holds(rt, p_atom)), ByMP(j1, a1))
    m2 = b.add(Implies(bot, Holds(st, neg(p_atom))), ByMP(j2, a2))
    ic = _interconsistency_steps(b, rt, st, p_atom)
    goal = jd_instance(t)
    glue = Implies(
        b.steps[m1 - 1].formula,
        Implies(b.steps[m2 - 1].formula, Implies(b.steps[ic - 1].formula, goal)),
    )
    gx = b.add(glue, ByAxiom(AxiomTag.CL))
    n1 = b.add(glue.consequent, ByMP(gx, m1))
    n2 = b.add(glue.consequent.consequent, ByMP(n1, m2))
    b.add(goal, ByMP(n2, ic))
    return Proof(cs.system, cs, tuple(b.steps))


def derive_jd_in_jnocplus(t: Term, cs: Optional[ConstantSpec] = None) -> Proof:
    """Proof of ~(t:_|_) from noc and the s:T schema, any specification."""
    if cs is None:
        cs = ConstantSpec.empty(SystemId.JNOC_PLUS)
    _require_schemas(cs, AxiomTag.NOC, AxiomTag.JTOP)
    goal = jd_instance(t)
    b = _Builder()
    nx = b.add(noc_instance(t, FALSUM), ByAxiom(AxiomTag.NOC))
    tx = b.add(jtop_instance(t), ByAxiom(AxiomTag.JTOP))
    glue = Implies(
        b.steps[nx - 1].formula, Implies(b.steps[tx - 1].formula, goal)
    )
    gx = b.add(glue, ByAxiom(AxiomTag.CL))
    m1 = b.add(glue.consequent, ByMP(gx, nx))
    b.add(goal, ByMP(m1, tx))
    return Proof(cs.system, cs, tuple(b.steps))


def internalize(p: Proof) -> tuple[Term, Proof]:
    """Lift an accepted proof of A to a proof of t:A for a concrete t.

    Works by induction on the steps: an axiom leaf becomes a level-0
    necessitation step for the least constant justifying it, an MP step
    becomes a j instance plus two MPs producing an application term, and
    a necessitation step is replayed one level higher.
    """
    verdict = check_proof(p)
    if not verdict.accepted:
        raise DeriveError(
            "not-accepted",
            f"input proof rejected at step {verdict.step}: {verdict.reason}",
        )
    if not is_axiomatically_appropriate(p.cs):
        raise DeriveError(
            "cs-not-appropriate",
            "internalization needs an axiomatically appropriate specification",
        )
    b = _Builder()
    info: list[tuple[Term, int]] = []  # per original step: (term, new index)
    for step in p.steps:
        match step.why:
            case ByAxiom(_):
                c = constant_for(p.cs, step.formula)
                idx = b.add(Holds(c, step.formula), ByAN(c, step.formula, 0))
                info.append((c, idx))
            case ByAN(c, a, n):
                tower: Term = c
                for _ in range(n + 1):
                    tower = Bang(tower)
                idx = b.add(
                    Holds(tower, step.formula), ByAN(c, a, n + 1)
                )
                info.append((tower, idx))
            case ByMP(i, j):
                s_term, si = info[i - 1]
                u_term, uj = info[j - 1]
                a_f = p.steps[j - 1].formula
                b_f = step.formula
                out = App(s_term, u_term)
                jx = b.add(j_instance(s_term, u_term, a_f, b_f), ByAxiom(AxiomTag.J))
                m1 = b.add(
                    Implies(Holds(u_term, a_f), Holds(out, b_f)), ByMP(jx, si)
                )
                m2 = b.add(Holds(out, b_f), ByMP(m1, uj))
                info.append((out, m2))
    term, _ = info[-1]
    return term, Proof(p.system, p.cs, tuple(b.steps))
