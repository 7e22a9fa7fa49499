"""System variants, axiom schema recognition and constant specifications.

Four systems share the application axiom ``j`` and classical logic ``cl``
(read as: every propositional tautology over the core connectives, with
justified formulas treated as opaque atoms):

    jd          jplus j jd        consistency as "no reason for falsum"
    jnoc        jplus j noc       consistency as "no conflicting reason"
    jnoc-minus  j noc             jnoc over the +-free term language
    jnoc-plus   jplus j noc jtop  jnoc plus the schema s:T

A constant specification lists which (constant, axiom) pairs the
necessitation rule may use.  Total mode pairs every constant with every
axiom of its system; finite mode lists pairs explicitly and the empty
specification is finite with no pairs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, Optional

from .syntax import (
    FALSUM,
    App,
    Constant,
    Falsum,
    Formula,
    Holds,
    Implies,
    Sum,
    Term,
    conj,
    disj,
    formula_has_sum,
    neg,
    parse_formula,
    print_formula,
    top,
)


class SystemId(Enum):
    JD = "jd"
    JNOC = "jnoc"
    JNOC_MINUS = "jnoc-minus"
    JNOC_PLUS = "jnoc-plus"


class AxiomTag(Enum):
    CL = "cl"
    JPLUS = "j+"
    J = "j"
    JD = "jd"
    NOC = "noc"
    JTOP = "jtop"


SCHEMAS: dict[SystemId, frozenset[AxiomTag]] = {
    SystemId.JD: frozenset({AxiomTag.CL, AxiomTag.JPLUS, AxiomTag.J, AxiomTag.JD}),
    SystemId.JNOC: frozenset({AxiomTag.CL, AxiomTag.JPLUS, AxiomTag.J, AxiomTag.NOC}),
    SystemId.JNOC_MINUS: frozenset({AxiomTag.CL, AxiomTag.J, AxiomTag.NOC}),
    SystemId.JNOC_PLUS: frozenset(
        {AxiomTag.CL, AxiomTag.JPLUS, AxiomTag.J, AxiomTag.NOC, AxiomTag.JTOP}
    ),
}


def allows_plus(system: SystemId) -> bool:
    return system is not SystemId.JNOC_MINUS


# ------------------------------------------------------ schema instances

def j_instance(s: Term, t: Term, a: Formula, b: Formula) -> Formula:
    """s:(A->B) -> (t:A -> s.t:B)"""
    return Implies(Holds(s, Implies(a, b)), Implies(Holds(t, a), Holds(App(s, t), b)))


def jplus_instance(s: Term, t: Term, a: Formula) -> Formula:
    """s:A | t:A -> (s+t):A, with | in expanded form."""
    return Implies(disj(Holds(s, a), Holds(t, a)), Holds(Sum(s, t), a))


def jd_instance(t: Term) -> Formula:
    """~(t:_|_), i.e. t:_|_ -> _|_"""
    return Implies(Holds(t, FALSUM), FALSUM)


def noc_instance(t: Term, a: Formula) -> Formula:
    """~(t:A & t:~A), with & and ~ in expanded form."""
    return neg(conj(Holds(t, a), Holds(t, neg(a))))


def jtop_instance(s: Term) -> Formula:
    """s:T"""
    return Holds(s, top())


# ------------------------------------------------------------- tautology

def modal_atoms(f: Formula) -> tuple[Formula, ...]:
    """Maximal Atom / justified subformulas, in first-occurrence order."""
    seen: set[Formula] = set()
    out: list[Formula] = []

    def walk(g: Formula) -> None:
        match g:
            case Implies(a, b):
                walk(a)
                walk(b)
            case Falsum():
                pass
            case _:
                if g not in seen:
                    seen.add(g)
                    out.append(g)

    walk(f)
    return tuple(out)


def is_tautology(f: Formula) -> bool:
    """True iff f holds under every assignment to its modal atoms.

    Falsum is fixed false and implication is classical; atoms and
    justified formulas are free.  Decided by truth table; formulas in
    this workbench are small, so the exponential cost is acceptable.
    """
    atoms = modal_atoms(f)
    index = {a: i for i, a in enumerate(atoms)}

    def truth(g: Formula, mask: int) -> bool:
        match g:
            case Falsum():
                return False
            case Implies(a, b):
                return (not truth(a, mask)) or truth(b, mask)
            case _:
                return bool((mask >> index[g]) & 1)

    return all(truth(f, mask) for mask in range(1 << len(atoms)))


# -------------------------------------------------------- schema matching

def _match_j(f: Formula) -> bool:
    match f:
        case Implies(
            Holds(s, Implies(a, b)),
            Implies(Holds(t, a2), Holds(App(s2, t2), b2)),
        ):
            return a2 == a and b2 == b and s2 == s and t2 == t
    return False


def _match_jplus(f: Formula) -> bool:
    match f:
        case Implies(
            Implies(Implies(Holds(s, a), Falsum()), Holds(t, a2)),
            Holds(Sum(s2, t2), a3),
        ):
            return a2 == a and a3 == a and s2 == s and t2 == t
    return False


def _match_jd(f: Formula) -> bool:
    match f:
        case Implies(Holds(_, Falsum()), Falsum()):
            return True
    return False


def _match_noc(f: Formula) -> bool:
    match f:
        case Implies(
            Implies(
                Implies(Holds(t, a), Implies(Holds(t2, Implies(a2, Falsum())), Falsum())),
                Falsum(),
            ),
            Falsum(),
        ):
            return t2 == t and a2 == a
    return False


def _match_jtop(f: Formula) -> bool:
    match f:
        case Holds(_, Implies(Falsum(), Falsum())):
            return True
    return False


@lru_cache(maxsize=65536)
def match_axiom(f: Formula, system: SystemId) -> Optional[AxiomTag]:
    """First matching schema of the system, in the order j, j+, jd, noc,
    jtop, cl; None when f is no axiom of the system."""
    if system is SystemId.JNOC_MINUS and formula_has_sum(f):
        return None
    tags = SCHEMAS[system]
    if AxiomTag.J in tags and _match_j(f):
        return AxiomTag.J
    if AxiomTag.JPLUS in tags and _match_jplus(f):
        return AxiomTag.JPLUS
    if AxiomTag.JD in tags and _match_jd(f):
        return AxiomTag.JD
    if AxiomTag.NOC in tags and _match_noc(f):
        return AxiomTag.NOC
    if AxiomTag.JTOP in tags and _match_jtop(f):
        return AxiomTag.JTOP
    if AxiomTag.CL in tags and is_tautology(f):
        return AxiomTag.CL
    return None


# ---------------------------------------------------- constant specification

@dataclass(frozen=True)
class ConstantSpec:
    """Which (constant, axiom) pairs the necessitation rule may cite.

    ``pairs`` is None in total mode.  Each specification is tied to one
    system; finite pairs citing formulas that are not axioms of that
    system are rejected at construction.
    """

    system: SystemId
    pairs: Optional[frozenset[tuple[int, Formula]]] = field(default=None)

    def __post_init__(self):
        if self.pairs is None:
            return
        object.__setattr__(self, "pairs", frozenset(self.pairs))
        for idx, a in self.pairs:
            if idx < 0:
                raise ValueError("constant index must be non-negative")
            if match_axiom(a, self.system) is None:
                raise ValueError(
                    f"{print_formula(a)} is not an axiom of {self.system.value}"
                )

    @classmethod
    def total(cls, system: SystemId) -> "ConstantSpec":
        return cls(system, None)

    @classmethod
    def finite(
        cls, system: SystemId, pairs: Iterable[tuple[Constant, Formula]]
    ) -> "ConstantSpec":
        return cls(system, frozenset((c.index, a) for c, a in pairs))

    @classmethod
    def empty(cls, system: SystemId) -> "ConstantSpec":
        return cls(system, frozenset())

    @property
    def is_total(self) -> bool:
        return self.pairs is None


def cs_contains(cs: ConstantSpec, c: Constant, a: Formula) -> bool:
    if cs.pairs is None:
        return match_axiom(a, cs.system) is not None
    return (c.index, a) in cs.pairs


def constant_for(cs: ConstantSpec, a: Formula) -> Optional[Constant]:
    """Least-index constant paired with the axiom a, None if there is none."""
    if cs.pairs is None:
        return Constant(0) if match_axiom(a, cs.system) is not None else None
    indices = [idx for idx, ax in cs.pairs if ax == a]
    return Constant(min(indices)) if indices else None


def is_axiomatically_appropriate(cs: ConstantSpec) -> bool:
    """True iff every axiom has a justifying constant.

    There are infinitely many axiom instances, so only total mode
    qualifies; any finite specification misses some axiom.
    """
    return cs.pairs is None


# ------------------------------------------------------------- file format

def parse_cs_file(text: str, system: SystemId) -> ConstantSpec:
    """Read a specification file: first line ``mode total|finite``, then
    one ``c<i> : <formula>`` pair per line in finite mode."""
    lines = [
        (n, ln.strip())
        for n, ln in enumerate(text.splitlines(), 1)
        if ln.strip() and not ln.strip().startswith("#")
    ]
    if not lines:
        raise ValueError("empty constant specification file")
    n, head = lines[0]
    parts = head.split()
    if len(parts) != 2 or parts[0] != "mode" or parts[1] not in ("total", "finite"):
        raise ValueError(f"line {n}: expected 'mode total' or 'mode finite'")
    if parts[1] == "total":
        if len(lines) > 1:
            raise ValueError(f"line {lines[1][0]}: unexpected content after 'mode total'")
        return ConstantSpec.total(system)
    pairs = []
    for n, ln in lines[1:]:
        m = re.match(r"^c(\d+)\s*:\s*(.+)$", ln)
        if m is None:
            raise ValueError(f"line {n}: expected 'c<i> : <formula>'")
        pairs.append((Constant(int(m.group(1))), parse_formula(m.group(2))))
    return ConstantSpec.finite(system, pairs)


def format_cs_file(cs: ConstantSpec) -> str:
    if cs.pairs is None:
        return "mode total\n"
    lines = ["mode finite"]
    for idx, a in sorted(cs.pairs, key=lambda p: (p[0], print_formula(p[1]))):
        lines.append(f"c{idx} : {print_formula(a)}")
    return "\n".join(lines) + "\n"
