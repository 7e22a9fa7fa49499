"""Finite subset models over a bounded formula/term universe.

A model carries worlds, a non-empty set of normal worlds, a
subformula-closed formula universe ``phi``, a subterm-closed term
universe ``terms``, free valuation tables for the non-normal worlds,
atom tables for the normal worlds, and an evidence function mapping
(world, term) to sets of worlds.

All semantic notions are relativized to the declared finite universe.
In particular the conflict-free world set used by the noc seriality
audit only inspects pairs A, A->_|_ that both lie in phi, which
over-approximates the unrelativized set.  That direction is safe for
countermodel claims: a model passing the relativized audit is a genuine
model of the phi-restricted semantics.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, Mapping, Optional

from .axioms import ConstantSpec, SystemId, cs_contains, noc_instance
from .syntax import (
    FALSUM,
    App,
    Atom,
    Bang,
    Constant,
    Falsum,
    Formula,
    Holds,
    Implies,
    Sum,
    Term,
    Variable,
    formula_terms,
    is_subformula_closed,
    is_subterm_closed,
    neg,
    parse_formula,
    parse_term,
    print_formula,
    print_term,
    subformula_closure,
    subterm_closure,
)


class ModelClass(Enum):
    GENERAL = "general"
    D_ARBITRARY = "d"
    NOC = "noc"


class UniverseError(ValueError):
    """A formula outside the model's declared universe was evaluated."""


# enumeration constructs huge numbers of models over one shared universe,
# so closure checks and sort orders are memoized on the frozenset itself
@lru_cache(maxsize=512)
def _universe_ok(phi: frozenset, terms: frozenset) -> bool:
    return is_subformula_closed(phi) and is_subterm_closed(terms)


@lru_cache(maxsize=512)
def _sorted_phi(phi: frozenset) -> tuple:
    return tuple(sorted(phi, key=print_formula))


@lru_cache(maxsize=512)
def _sorted_terms(terms: frozenset) -> tuple:
    return tuple(sorted(terms, key=print_term))


@lru_cache(maxsize=512)
def _neg_pairs(phi: frozenset) -> tuple:
    return tuple(
        (f.antecedent, f)
        for f in _sorted_phi(phi)
        if isinstance(f, Implies) and f.consequent == FALSUM
    )


@dataclass(frozen=True)
class Violation:
    condition: str  # "sum" | "app" | "serial" | "cs"
    world: str
    detail: str

    def __str__(self):
        return f"{self.condition} at {self.world}: {self.detail}"


@dataclass(frozen=True)
class WellFormedReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class SubsetModel:
    """Immutable finite subset model.

    ``nonnormal_val`` maps (non-normal world, formula in phi) to a bit;
    formulas without an explicit entry take the world's default bit
    (``nonnormal_default``, 0 when absent), which extends the valuation
    to the whole language.  ``normal_atoms`` defaults to 0 and
    ``evidence`` to the empty set.  Tables are canonicalized on
    construction: entries equal to their default are dropped, so models
    compare equal iff they are semantically identical tables.
    """

    worlds: frozenset[str]
    normal: frozenset[str]
    phi: frozenset[Formula]
    terms: frozenset[Term]
    nonnormal_val: Mapping[tuple[str, Formula], int] = field(default_factory=dict)
    nonnormal_default: Mapping[str, int] = field(default_factory=dict)
    normal_atoms: Mapping[tuple[str, Formula], int] = field(default_factory=dict)
    evidence: Mapping[tuple[str, Term], frozenset[str]] = field(default_factory=dict)

    def __post_init__(self):
        coerce = object.__setattr__
        coerce(self, "worlds", frozenset(self.worlds))
        coerce(self, "normal", frozenset(self.normal))
        coerce(self, "phi", frozenset(self.phi))
        coerce(self, "terms", frozenset(self.terms))
        if not self.normal:
            raise ValueError("the set of normal worlds must be non-empty")
        if not self.normal <= self.worlds:
            raise ValueError("normal worlds must be worlds")
        if not _universe_ok(self.phi, self.terms):
            if not is_subformula_closed(self.phi):
                raise ValueError("phi must be closed under subformulas")
            raise ValueError("terms must be closed under subterms")

        defaults = {}
        for w, bit in self.nonnormal_default.items():
            if w not in self.worlds or w in self.normal:
                raise ValueError(f"default bit for non-world or normal world {w!r}")
            if bit not in (0, 1):
                raise ValueError("valuation bits must be 0 or 1")
            if bit:
                defaults[w] = 1
        coerce(self, "nonnormal_default", defaults)

        val = {}
        for (w, f), bit in self.nonnormal_val.items():
            if w not in self.worlds or w in self.normal:
                raise ValueError(f"valuation entry for non-world or normal world {w!r}")
            if f not in self.phi:
                raise ValueError(f"valuation entry outside phi: {print_formula(f)}")
            if bit not in (0, 1):
                raise ValueError("valuation bits must be 0 or 1")
            if bit != defaults.get(w, 0):
                val[(w, f)] = bit
        coerce(self, "nonnormal_val", val)

        atoms = {}
        for (w, f), bit in self.normal_atoms.items():
            if w not in self.normal:
                raise ValueError(f"atom entry for non-normal world {w!r}")
            if not isinstance(f, Atom) or f not in self.phi:
                raise ValueError("atom entries must use atoms from phi")
            if bit not in (0, 1):
                raise ValueError("valuation bits must be 0 or 1")
            if bit:
                atoms[(w, f)] = 1
        coerce(self, "normal_atoms", atoms)

        ev = {}
        for (w, t), vs in self.evidence.items():
            if w not in self.worlds:
                raise ValueError(f"evidence entry for unknown world {w!r}")
            if t not in self.terms:
                raise ValueError(f"evidence entry outside terms: {print_term(t)}")
            vs = frozenset(vs)
            if not vs <= self.worlds:
                raise ValueError("evidence sets must contain worlds only")
            if vs:
                ev[(w, t)] = vs
        coerce(self, "evidence", ev)

    def evidence_at(self, w: str, t: Term) -> frozenset[str]:
        return self.evidence.get((w, t), frozenset())


# ------------------------------------------------------------- evaluation

def _nn_value(m: SubsetModel, w: str, f: Formula) -> int:
    return m.nonnormal_val.get((w, f), m.nonnormal_default.get(w, 0))


def _eval(m: SubsetModel, w: str, f: Formula, memo: dict) -> int:
    if w not in m.normal:
        return _nn_value(m, w, f)
    match f:
        case Falsum():
            return 0
        case Atom():
            return m.normal_atoms.get((w, f), 0)
        case Implies(a, b):
            return 1 if _eval(m, w, a, memo) == 0 or _eval(m, w, b, memo) == 1 else 0
        case Holds(t, body):
            return 1 if m.evidence_at(w, t) <= _truth_set(m, body, memo) else 0
    raise TypeError(f"not a formula: {f!r}")


def _truth_set(m: SubsetModel, f: Formula, memo: dict) -> frozenset[str]:
    cached = memo.get(f)
    if cached is None:
        cached = frozenset(w for w in m.worlds if _eval(m, w, f, memo) == 1)
        memo[f] = cached
    return cached


def _require_in_phi(m: SubsetModel, f: Formula) -> None:
    if f not in m.phi:
        raise UniverseError(
            f"formula outside the declared universe: {print_formula(f)}"
        )


def eval_formula(m: SubsetModel, w: str, f: Formula) -> int:
    """Truth value of f at w; f must lie in the model's universe."""
    _require_in_phi(m, f)
    if w not in m.worlds:
        raise ValueError(f"unknown world {w!r}")
    return _eval(m, w, f, {})


def truth_set(m: SubsetModel, f: Formula) -> frozenset[str]:
    """The worlds where f is true."""
    _require_in_phi(m, f)
    return _truth_set(m, f, {})


def holds_at_all_normal(m: SubsetModel, f: Formula) -> bool:
    _require_in_phi(m, f)
    memo: dict = {}
    return all(_eval(m, w, f, memo) == 1 for w in m.normal)


def project(gamma: Iterable[Formula], t: Term) -> frozenset[Formula]:
    """The bodies F of all members t:F of gamma."""
    return frozenset(f.body for f in gamma if isinstance(f, Holds) and f.term == t)


def _app_set(m: SubsetModel, w: str, s: Term, t: Term, memo: dict) -> frozenset[Formula]:
    es = m.evidence_at(w, s)
    et = m.evidence_at(w, t)
    out = set()
    for g in m.phi:
        if (
            isinstance(g, Implies)
            and g.consequent not in out
            and et <= _truth_set(m, g.antecedent, memo)
            and es <= _truth_set(m, g, memo)
        ):
            out.add(g.consequent)
    return frozenset(out)


def app_set(m: SubsetModel, w: str, s: Term, t: Term) -> frozenset[Formula]:
    """Formulas justifiable at w by applying s to t: all F with some H in
    phi such that H->F is in phi, evidence(w,s) lies in [H->F] and
    evidence(w,t) lies in [H]."""
    return _app_set(m, w, s, t, {})


# ----------------------------------------------------------- world classes

def worlds_not_bot(m: SubsetModel) -> frozenset[str]:
    """Worlds where falsum is false; includes every normal world."""
    return frozenset(
        w
        for w in m.worlds
        if w in m.normal or _nn_value(m, w, FALSUM) == 0
    )


def worlds_no_conflict(m: SubsetModel) -> frozenset[str]:
    """Worlds where no phi-pair A, A->_|_ is true together.

    Normal worlds always qualify; the check over non-normal worlds is
    relativized to pairs with both members in phi.
    """
    pairs = _neg_pairs(m.phi)
    memo: dict = {}
    out = set(m.normal)
    for w in m.worlds - m.normal:
        if all(
            _eval(m, w, a, memo) == 0 or _eval(m, w, na, memo) == 0
            for a, na in pairs
        ):
            out.add(w)
    return frozenset(out)


def _serial_target(m: SubsetModel, cls: ModelClass) -> frozenset[str]:
    if cls is ModelClass.GENERAL:
        return m.normal
    if cls is ModelClass.D_ARBITRARY:
        return worlds_not_bot(m)
    return worlds_no_conflict(m)


# ------------------------------------------------------------ well-formedness

def _tower_decomp(t: Term) -> Optional[tuple[Constant, int]]:
    n = 0
    while isinstance(t, Bang):
        n += 1
        t = t.inner
    if n >= 1 and isinstance(t, Constant):
        return t, n
    return None


def _an_peel(g: Formula, c: Constant, levels: int) -> Optional[Formula]:
    """The axiom A such that g is the necessitation conclusion for c at
    the given level, or None."""
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


def check_well_formed(
    m: SubsetModel, cls: ModelClass, cs: ConstantSpec, system: SystemId
) -> WellFormedReport:
    """Audit the evidence conditions at every normal world.

    Checks, per normal world: the sum condition for every sum term, the
    application condition for every application term, the class's serial
    condition for every term, and the specification condition for every
    constant and necessitation tower in the term universe.  Violations
    are data, not errors.
    """
    memo: dict = {}
    violations: list[Violation] = []
    target = _serial_target(m, cls)
    terms_sorted = _sorted_terms(m.terms)
    phi_sorted = _sorted_phi(m.phi)

    for w in sorted(m.normal):
        for t in terms_sorted:
            if isinstance(t, Sum):
                allowed = m.evidence_at(w, t.left) & m.evidence_at(w, t.right)
                if not m.evidence_at(w, t) <= allowed:
                    violations.append(Violation("sum", w, print_term(t)))
        for t in terms_sorted:
            if isinstance(t, App):
                allowed = set(m.worlds)
                for f in _app_set(m, w, t.left, t.right, memo):
                    allowed &= _truth_set(m, f, memo)
                if not m.evidence_at(w, t) <= allowed:
                    violations.append(Violation("app", w, print_term(t)))
        for t in terms_sorted:
            if not m.evidence_at(w, t) & target:
                violations.append(Violation("serial", w, print_term(t)))
        for t in terms_sorted:
            if isinstance(t, Constant):
                for a in phi_sorted:
                    if cs_contains(cs, t, a) and not m.evidence_at(w, t) <= _truth_set(
                        m, a, memo
                    ):
                        violations.append(
                            Violation("cs", w, f"{print_term(t)} : {print_formula(a)}")
                        )
            else:
                decomp = _tower_decomp(t)
                if decomp is None:
                    continue
                base, depth = decomp
                for g in phi_sorted:
                    a = _an_peel(g, base, depth - 1)
                    if (
                        a is not None
                        and cs_contains(cs, base, a)
                        and not m.evidence_at(w, t) <= _truth_set(m, g, memo)
                    ):
                        violations.append(
                            Violation("cs", w, f"{print_term(t)} : {print_formula(g)}")
                        )
    return WellFormedReport(tuple(violations))


# ----------------------------------------------------------- stock model

def build_jd_countermodel(
    extra_phi: Iterable[Formula] = (), extra_terms: Iterable[Term] = ()
) -> SubsetModel:
    """Two-world model whose normal world justifies falsum.

    One normal world omega and one non-normal world nu where exactly
    falsum is true; every term's evidence at omega is {nu}.  The model
    passes the no-conflict audit under the empty specification, yet
    t:_|_ holds at omega, so ~(t:_|_) fails there.  The default universe
    is the closure of {~(x0:_|_), ~(x0:P1 & x0:~P1)}; both universes can
    be extended by parameter.
    """
    t = Variable(0)
    seed = {neg(Holds(t, FALSUM)), noc_instance(t, Atom(1))} | set(extra_phi)
    phi = subformula_closure(seed)
    terms = subterm_closure(
        {u for f in phi for u in formula_terms(f)} | set(extra_terms)
    )
    return SubsetModel(
        worlds=frozenset({"omega", "nu"}),
        normal=frozenset({"omega"}),
        phi=phi,
        terms=terms,
        nonnormal_val={("nu", FALSUM): 1},
        nonnormal_default={"nu": 0},
        normal_atoms={},
        evidence={("omega", u): frozenset({"nu"}) for u in terms},
    )


# ------------------------------------------------------------- file format

_SECTION_KEYWORDS = {"worlds", "normal", "phi", "terms", "val", "default", "atoms", "E"}


def format_model(m: SubsetModel) -> str:
    lines = ["worlds " + " ".join(sorted(m.worlds))]
    lines.append("normal " + " ".join(sorted(m.normal)))
    lines.append("phi")
    for f in sorted(m.phi, key=print_formula):
        lines.append(print_formula(f))
    lines.append("terms")
    for t in sorted(m.terms, key=print_term):
        lines.append(print_term(t))
    for (w, f), bit in sorted(
        m.nonnormal_val.items(), key=lambda kv: (kv[0][0], print_formula(kv[0][1]))
    ):
        lines.append(f"val {w} {print_formula(f)} {bit}")
    for w, bit in sorted(m.nonnormal_default.items()):
        lines.append(f"default {w} {bit}")
    for (w, f), bit in sorted(
        m.normal_atoms.items(), key=lambda kv: (kv[0][0], print_formula(kv[0][1]))
    ):
        lines.append(f"atoms {w} {print_formula(f)} {bit}")
    for (w, t), vs in sorted(
        m.evidence.items(), key=lambda kv: (kv[0][0], print_term(kv[0][1]))
    ):
        lines.append(f"E {w} {print_term(t)} {{{','.join(sorted(vs))}}}")
    return "\n".join(lines) + "\n"


def parse_model_file(text: str) -> SubsetModel:
    worlds: list[str] = []
    normal: list[str] = []
    phi: list[Formula] = []
    terms: list[Term] = []
    val: dict[tuple[str, Formula], int] = {}
    default: dict[str, int] = {}
    atoms: dict[tuple[str, Formula], int] = {}
    evidence: dict[tuple[str, Term], frozenset[str]] = {}
    section = None

    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head = line.split()[0]
        if head not in _SECTION_KEYWORDS:
            if section == "phi":
                phi.append(parse_formula(line))
                continue
            if section == "terms":
                terms.append(parse_term(line))
                continue
            raise ValueError(f"line {n}: unexpected content {line!r}")
        section = None
        rest = line[len(head):].strip()
        if head == "worlds":
            worlds.extend(rest.split())
        elif head == "normal":
            normal.extend(rest.split())
        elif head == "phi":
            section = "phi"
        elif head == "terms":
            section = "terms"
        elif head == "val":
            w, f_text, bit = _split_entry(rest, n)
            val[(w, parse_formula(f_text))] = bit
        elif head == "default":
            parts = rest.split()
            if len(parts) != 2 or parts[1] not in ("0", "1"):
                raise ValueError(f"line {n}: expected 'default <world> <0|1>'")
            default[parts[0]] = int(parts[1])
        elif head == "atoms":
            w, f_text, bit = _split_entry(rest, n)
            atoms[(w, parse_formula(f_text))] = bit
        elif head == "E":
            m_ = re.match(r"^(\S+)\s+(.+?)\s*\{(.*)\}$", rest)
            if m_ is None:
                raise ValueError(f"line {n}: expected 'E <world> <term> {{w,...}}'")
            members = [p.strip() for p in m_.group(3).split(",") if p.strip()]
            evidence[(m_.group(1), parse_term(m_.group(2)))] = frozenset(members)
    return SubsetModel(
        worlds=frozenset(worlds),
        normal=frozenset(normal),
        phi=frozenset(phi),
        terms=frozenset(terms),
        nonnormal_val=val,
        nonnormal_default=default,
        normal_atoms=atoms,
        evidence=evidence,
    )


def _split_entry(rest: str, n: int) -> tuple[str, str, int]:
    parts = rest.split()
    if len(parts) < 3 or parts[-1] not in ("0", "1"):
        raise ValueError(f"line {n}: expected '<world> <formula> <0|1>'")
    return parts[0], " ".join(parts[1:-1]), int(parts[-1])
