"""Shared random generators used across the test suite.

Everything takes an explicit random.Random so failures reproduce.
"""

from __future__ import annotations

import random

from justlog import (
    FALSUM,
    App,
    Atom,
    AxiomTag,
    Bang,
    ByAN,
    ByAxiom,
    ByMP,
    Constant,
    ConstantSpec,
    Falsum,
    Formula,
    Holds,
    Implies,
    ModelClass,
    Proof,
    Step,
    SubsetModel,
    Sum,
    SystemId,
    Term,
    Variable,
    an_conclusion,
    app_set,
    check_proof,
    check_well_formed,
    cs_contains,
    disj,
    j_instance,
    jd_instance,
    jplus_instance,
    jtop_instance,
    match_axiom,
    noc_instance,
    print_term,
    truth_set,
)


# ---------------------------------------------------- independent oracles

def brute_force_tautology(f: Formula) -> bool:
    """All-assignments evaluator over the modal atoms, written separately
    from the package's truth-table path."""
    import itertools

    atoms: list[Formula] = []

    def collect(g):
        if isinstance(g, Implies):
            collect(g.antecedent)
            collect(g.consequent)
        elif not isinstance(g, Falsum) and g not in atoms:
            atoms.append(g)

    collect(f)
    for bits in itertools.product([False, True], repeat=len(atoms)):
        env = dict(zip(atoms, bits))

        def ev(g):
            if isinstance(g, Falsum):
                return False
            if isinstance(g, Implies):
                return (not ev(g.antecedent)) or ev(g.consequent)
            return env[g]

        if not ev(f):
            return False
    return True


# ------------------------------------------------------- terms and formulas

def random_term(rng: random.Random, depth: int, allow_plus: bool = True) -> Term:
    if depth <= 0 or rng.random() < 0.35:
        if rng.random() < 0.5:
            return Constant(rng.randint(0, 3))
        return Variable(rng.randint(0, 3))
    kinds = ["app", "bang"] + (["sum"] if allow_plus else [])
    kind = rng.choice(kinds)
    if kind == "app":
        return App(random_term(rng, depth - 1, allow_plus), random_term(rng, depth - 1, allow_plus))
    if kind == "sum":
        return Sum(random_term(rng, depth - 1, allow_plus), random_term(rng, depth - 1, allow_plus))
    return Bang(random_term(rng, depth - 1, allow_plus))


def random_formula(rng: random.Random, depth: int, allow_plus: bool = True) -> Formula:
    if depth <= 0 or rng.random() < 0.3:
        return FALSUM if rng.random() < 0.2 else Atom(rng.randint(0, 3))
    if rng.random() < 0.6:
        return Implies(
            random_formula(rng, depth - 1, allow_plus),
            random_formula(rng, depth - 1, allow_plus),
        )
    return Holds(
        random_term(rng, depth - 1, allow_plus),
        random_formula(rng, depth - 1, allow_plus),
    )


# --------------------------------------------------------- formula surgery

def formula_positions(f: Formula):
    """All subformula positions as child-index paths, root first."""
    yield ()
    match f:
        case Implies(a, b):
            for p in formula_positions(a):
                yield (0,) + p
            for p in formula_positions(b):
                yield (1,) + p
        case Holds(_, body):
            for p in formula_positions(body):
                yield (0,) + p


def subformula_at(f: Formula, path) -> Formula:
    for i in path:
        match f:
            case Implies(a, b):
                f = a if i == 0 else b
            case Holds(_, body):
                f = body
    return f


def replace_at(f: Formula, path, new: Formula) -> Formula:
    if not path:
        return new
    match f:
        case Implies(a, b):
            if path[0] == 0:
                return Implies(replace_at(a, path[1:], new), b)
            return Implies(a, replace_at(b, path[1:], new))
        case Holds(t, body):
            return Holds(t, replace_at(body, path[1:], new))
    raise AssertionError("path into a leaf")


def formula_mutants(f: Formula):
    """Single-position mutations of f, none equal to f."""
    for path in formula_positions(f):
        sub = subformula_at(f, path)
        for new in (FALSUM, Atom(99), Implies(sub, FALSUM)):
            if new != sub:
                yield replace_at(f, path, new)
        if isinstance(sub, Holds):
            yield replace_at(f, path, Holds(Bang(sub.term), sub.body))


def proof_mutants(p: Proof):
    """Proofs differing from p in exactly one step's formula."""
    for k, step in enumerate(p.steps):
        for mutant in formula_mutants(step.formula):
            steps = list(p.steps)
            steps[k] = Step(mutant, step.why)
            yield Proof(p.system, p.cs, tuple(steps))


# ----------------------------------------------------------- random proofs

_CL_TEMPLATES = [
    lambda a, b: Implies(a, a),
    lambda a, b: Implies(FALSUM, a),
    lambda a, b: Implies(a, Implies(b, a)),
    lambda a, b: Implies(Implies(Implies(a, FALSUM), FALSUM), a),
    lambda a, b: Implies(a, disj(a, b)),
]


def random_axiom_instance(rng: random.Random, system: SystemId) -> Formula:
    allow_plus = system is not SystemId.JNOC_MINUS
    tags = [AxiomTag.J, AxiomTag.CL, AxiomTag.CL]
    if system is SystemId.JD:
        tags.append(AxiomTag.JD)
    else:
        tags.append(AxiomTag.NOC)
    if allow_plus:
        tags.append(AxiomTag.JPLUS)
    if system is SystemId.JNOC_PLUS:
        tags.append(AxiomTag.JTOP)
    tag = rng.choice(tags)
    t1 = random_term(rng, 1, allow_plus)
    t2 = random_term(rng, 1, allow_plus)
    a = random_formula(rng, 1, allow_plus)
    b = random_formula(rng, 1, allow_plus)
    if tag is AxiomTag.J:
        return j_instance(t1, t2, a, b)
    if tag is AxiomTag.JPLUS:
        return jplus_instance(t1, t2, a)
    if tag is AxiomTag.JD:
        return jd_instance(t1)
    if tag is AxiomTag.NOC:
        return noc_instance(t1, a)
    if tag is AxiomTag.JTOP:
        return jtop_instance(t1)
    return rng.choice(_CL_TEMPLATES)(a, b)


def random_accepted_proof(rng: random.Random, system: SystemId, size: int = 12) -> Proof:
    """Random proof closed under the generator's moves, always accepted."""
    allow_plus = system is not SystemId.JNOC_MINUS
    cs = ConstantSpec.total(system)
    steps: list[Step] = []

    def add_axiom() -> None:
        f = random_axiom_instance(rng, system)
        tag = match_axiom(f, system)
        assert tag is not None
        steps.append(Step(f, ByAxiom(tag)))

    add_axiom()
    while len(steps) < size:
        move = rng.random()
        if move < 0.35:
            add_axiom()
        elif move < 0.55:
            f = random_axiom_instance(rng, system)
            c = Constant(rng.randint(0, 2))
            n = rng.randint(0, 2)
            steps.append(Step(an_conclusion(c, f, n), ByAN(c, f, n)))
        elif move < 0.85:
            # weaken a proven formula: A, A->(C->A) by cl, then MP
            i = rng.randrange(len(steps)) + 1
            a = steps[i - 1].formula
            c = random_formula(rng, 2, allow_plus)
            taut = Implies(a, Implies(c, a))
            tag = match_axiom(taut, system)
            assert tag is not None
            steps.append(Step(taut, ByAxiom(tag)))
            steps.append(Step(Implies(c, a), ByMP(len(steps), i)))
        else:
            # detach where some proven implication has a proven antecedent
            proven = {s.formula: k + 1 for k, s in enumerate(steps)}
            options = [
                (k + 1, s.formula)
                for k, s in enumerate(steps)
                if isinstance(s.formula, Implies) and s.formula.antecedent in proven
            ]
            if not options:
                add_axiom()
                continue
            k, f = rng.choice(options)
            steps.append(Step(f.consequent, ByMP(k, proven[f.antecedent])))
    p = Proof(system, cs, tuple(steps))
    assert check_proof(p).accepted
    return p


# ------------------------------------------------------ random sound models

def _term_size(t: Term) -> int:
    match t:
        case App(l, r) | Sum(l, r):
            return 1 + _term_size(l) + _term_size(r)
        case Bang(inner):
            return 1 + _term_size(inner)
        case _:
            return 1


def _tower_axiom(g: Formula, c: Constant, levels: int):
    """Reverse of an_conclusion: the A with g == an_conclusion(c, A, levels)."""
    cur = g
    for k in range(levels, 0, -1):
        tower: Term = c
        for _ in range(k):
            tower = Bang(tower)
        if isinstance(cur, Holds) and cur.term == tower:
            cur = cur.body
        else:
            return None
    if isinstance(cur, Holds) and cur.term == c:
        return cur.body
    return None


def random_well_formed_model(
    rng: random.Random,
    phi,
    terms,
    cls: ModelClass,
    cs: ConstantSpec,
    system: SystemId,
    max_worlds: int = 2,
    max_attempts: int = 10000,
) -> SubsetModel:
    """Rejection-sample a model that passes check_well_formed.

    Tables are drawn uniformly; evidence is drawn inside the audited
    bounds term by term so that most draws already satisfy the sum,
    application and serial conditions.  Every candidate is re-audited
    before being returned.
    """
    phi = frozenset(phi)
    terms = frozenset(terms)
    pairs = [
        (g.antecedent, g)
        for g in phi
        if isinstance(g, Implies) and g.consequent == FALSUM
    ]
    order = sorted(terms, key=lambda t: (_term_size(t), print_term(t)))

    for _ in range(max_attempts):
        n = rng.randint(1, max_worlds)
        worlds = [f"w{i}" for i in range(n)]
        normal = frozenset(rng.sample(worlds, rng.randint(1, n)))
        nn = [w for w in worlds if w not in normal]
        val = {(w, f): 1 for w in nn for f in phi if rng.random() < 0.5}
        atoms = {
            (w, f): 1
            for w in normal
            for f in phi
            if isinstance(f, Atom) and rng.random() < 0.5
        }
        if cls is ModelClass.GENERAL:
            target = set(normal)
        elif cls is ModelClass.D_ARBITRARY:
            target = set(normal) | {w for w in nn if val.get((w, FALSUM), 0) == 0}
        else:
            target = set(normal) | {
                w
                for w in nn
                if all(
                    val.get((w, a), 0) == 0 or val.get((w, na), 0) == 0
                    for a, na in pairs
                )
            }
        if not target:
            continue

        evidence: dict = {}
        feasible = True
        for w in sorted(normal):
            for t in order:
                partial = SubsetModel(
                    worlds=frozenset(worlds),
                    normal=normal,
                    phi=phi,
                    terms=terms,
                    nonnormal_val=val,
                    normal_atoms=atoms,
                    evidence=evidence,
                )
                pool = set(worlds)
                if isinstance(t, Sum):
                    pool = set(
                        evidence.get((w, t.left), frozenset())
                        & evidence.get((w, t.right), frozenset())
                    )
                elif isinstance(t, App):
                    for f in app_set(partial, w, t.left, t.right):
                        pool &= truth_set(partial, f)
                elif isinstance(t, Constant):
                    for a in phi:
                        if cs_contains(cs, t, a):
                            pool &= truth_set(partial, a)
                elif isinstance(t, Bang):
                    base, depth = t, 0
                    while isinstance(base, Bang):
                        base, depth = base.inner, depth + 1
                    if isinstance(base, Constant):
                        for g in phi:
                            a = _tower_axiom(g, base, depth - 1)
                            if a is not None and cs_contains(cs, base, a):
                                pool &= truth_set(partial, g)
                in_target = sorted(pool & target)
                if not in_target:
                    feasible = False
                    break
                pick = {rng.choice(in_target)}
                pick |= {v for v in pool if rng.random() < 0.4}
                evidence[(w, t)] = frozenset(pick)
            if not feasible:
                break
        if not feasible:
            continue
        m = SubsetModel(
            worlds=frozenset(worlds),
            normal=normal,
            phi=phi,
            terms=terms,
            nonnormal_val=val,
            normal_atoms=atoms,
            evidence=evidence,
        )
        if check_well_formed(m, cls, cs, system).ok:
            return m
    raise AssertionError("could not sample a well-formed model")
