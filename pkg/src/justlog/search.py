"""Bounded exhaustive enumeration of subset models and countermodel search.

Enumeration order is fixed and documented so that searches are
reproducible and the lexicographically first hit can be pinned in tests:

1. world count n ascending from 1 to max_worlds; worlds are named
   w0..w{n-1};
2. normal subsets by ascending bitmask (bit i set means wi is normal),
   skipping masks whose population exceeds max_normal;
3. the remaining table slots form one product, later slots varying
   fastest, in this slot order:
   - non-normal valuation bits, world-major (worlds ascending) and
     formula-minor (universe sorted by its printed form), bit order 0<1;
     defaults are fixed to 0;
   - normal atom bits, world-major and atom-minor, 0<1;
   - evidence sets, (normal world)-major and term-minor (terms sorted by
     printed form), subsets of the worlds by ascending bitmask; evidence
     at non-normal worlds stays empty.

Pruning (skipping the goal evaluation on models that fail the audit)
never changes which model is found, only speed; slow_find_countermodel
re-derives the same order with plain nested loops and no pruning, and
exists to guard that claim on small bounds.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .axioms import ConstantSpec, SystemId
from .model import (
    ModelClass,
    SubsetModel,
    check_well_formed,
    holds_at_all_normal,
    truth_set,
)
from .syntax import (
    Atom,
    Formula,
    Term,
    is_subformula_closed,
    is_subterm_closed,
    print_formula,
    print_term,
    subformulas,
)


@dataclass(frozen=True)
class SearchBounds:
    max_worlds: int
    max_normal: int
    phi: frozenset[Formula]
    terms: frozenset[Term]
    evidence_candidates: Optional[tuple[frozenset[str], ...]] = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "phi", frozenset(self.phi))
        object.__setattr__(self, "terms", frozenset(self.terms))
        if not self.max_worlds >= self.max_normal >= 1:
            raise ValueError("need max_worlds >= max_normal >= 1")
        if not is_subformula_closed(self.phi):
            raise ValueError("phi must be closed under subformulas")
        if not is_subterm_closed(self.terms):
            raise ValueError("terms must be closed under subterms")
        if self.evidence_candidates is not None:
            object.__setattr__(
                self,
                "evidence_candidates",
                tuple(frozenset(c) for c in self.evidence_candidates),
            )


def _sorted_universe(b: SearchBounds) -> tuple[list[Formula], list[Formula], list[Term]]:
    phi = sorted(b.phi, key=print_formula)
    atoms = [f for f in phi if isinstance(f, Atom)]
    terms = sorted(b.terms, key=print_term)
    return phi, atoms, terms


def _splits(n: int, max_normal: int) -> Iterator[tuple[str, ...]]:
    worlds = tuple(f"w{i}" for i in range(n))
    for mask in range(1, 1 << n):
        normal = tuple(worlds[i] for i in range(n) if mask >> i & 1)
        if len(normal) <= max_normal:
            yield normal


def _subsets(worlds: tuple[str, ...]) -> list[frozenset[str]]:
    return [
        frozenset(w for i, w in enumerate(worlds) if mask >> i & 1)
        for mask in range(1 << len(worlds))
    ]


def _evidence_options(
    b: SearchBounds, worlds: tuple[str, ...]
) -> list[frozenset[str]]:
    if b.evidence_candidates is None:
        return _subsets(worlds)
    pool = set(worlds)
    return [c for c in b.evidence_candidates if c <= pool]


def enumerate_models(b: SearchBounds) -> Iterator[SubsetModel]:
    """All models within the bounds, in the documented fixed order,
    without duplicates."""
    phi, atoms, terms = _sorted_universe(b)
    for n in range(1, b.max_worlds + 1):
        worlds = tuple(f"w{i}" for i in range(n))
        world_set = frozenset(worlds)
        for normal in _splits(n, b.max_normal):
            normal_set = frozenset(normal)
            nonnormal = [w for w in worlds if w not in normal_set]
            ev_options = _evidence_options(b, worlds)
            nn_slots = [(w, f) for w in nonnormal for f in phi]
            atom_slots = [(w, a) for w in normal for a in atoms]
            ev_slots = [(w, t) for w in normal for t in terms]
            choice_lists = (
                [(0, 1)] * len(nn_slots)
                + [(0, 1)] * len(atom_slots)
                + [ev_options] * len(ev_slots)
            )
            for combo in itertools.product(*choice_lists):
                k = 0
                val = {}
                for slot in nn_slots:
                    if combo[k]:
                        val[slot] = 1
                    k += 1
                atom_table = {}
                for slot in atom_slots:
                    if combo[k]:
                        atom_table[slot] = 1
                    k += 1
                evidence = {}
                for slot in ev_slots:
                    if combo[k]:
                        evidence[slot] = combo[k]
                    k += 1
                yield SubsetModel(
                    worlds=world_set,
                    normal=normal_set,
                    phi=b.phi,
                    terms=b.terms,
                    nonnormal_val=val,
                    normal_atoms=atom_table,
                    evidence=evidence,
                )


def count_models(b: SearchBounds) -> int:
    """Cardinality of the search space, computed in closed form."""
    phi, atoms, terms = _sorted_universe(b)
    total = 0
    for n in range(1, b.max_worlds + 1):
        worlds = tuple(f"w{i}" for i in range(n))
        n_ev = len(_evidence_options(b, worlds))
        for normal in _splits(n, b.max_normal):
            k = len(normal)
            total += (
                (2 ** len(phi)) ** (n - k)
                * (2 ** len(atoms)) ** k
                * n_ev ** (k * len(terms))
            )
    return total


def _check_formula_bounds(fs: Iterable[Formula], b: SearchBounds) -> None:
    for f in fs:
        if not subformulas(f) <= b.phi:
            raise ValueError(
                f"subformulas of {print_formula(f)} must lie within the bounds"
            )


def find_countermodel(
    f: Formula,
    cls: ModelClass,
    system: SystemId,
    cs: ConstantSpec,
    b: SearchBounds,
) -> Optional[SubsetModel]:
    """First enumerated model that passes the audit yet falsifies f at
    some normal world; None when the bounds contain none."""
    _check_formula_bounds([f], b)
    for m in enumerate_models(b):
        if not check_well_formed(m, cls, cs, system).ok:
            continue
        if not holds_at_all_normal(m, f):
            return m
    return None


def find_witness(
    goals: Iterable[Formula],
    cls: ModelClass,
    system: SystemId,
    cs: ConstantSpec,
    b: SearchBounds,
) -> Optional[SubsetModel]:
    """First well-formed model with a normal world satisfying every goal."""
    goals = tuple(goals)
    _check_formula_bounds(goals, b)
    for m in enumerate_models(b):
        if not check_well_formed(m, cls, cs, system).ok:
            continue
        satisfying = set(m.normal)
        for g in goals:
            satisfying &= truth_set(m, g)
        if satisfying:
            return m
    return None


def slow_find_countermodel(
    f: Formula,
    cls: ModelClass,
    system: SystemId,
    cs: ConstantSpec,
    b: SearchBounds,
) -> Optional[SubsetModel]:
    """Reference implementation of find_countermodel.

    Re-derives the enumeration with integer counters instead of the
    generator machinery and evaluates both the audit and the goal on
    every model, with no pruning.  Intended for tiny bounds only.
    """
    _check_formula_bounds([f], b)
    phi, atoms, terms = _sorted_universe(b)
    for n in range(1, b.max_worlds + 1):
        worlds = tuple(f"w{i}" for i in range(n))
        for mask in range(1, 1 << n):
            normal = tuple(worlds[i] for i in range(n) if mask >> i & 1)
            if len(normal) > b.max_normal:
                continue
            normal_set = frozenset(normal)
            nonnormal = [w for w in worlds if w not in normal_set]
            ev_options = _evidence_options(b, worlds)
            nn_slots = [(w, g) for w in nonnormal for g in phi]
            atom_slots = [(w, a) for w in normal for a in atoms]
            ev_slots = [(w, t) for w in normal for t in terms]
            n_bits = len(nn_slots) + len(atom_slots)
            n_ev = len(ev_slots)
            for bits in range(1 << n_bits):
                val = {
                    slot: 1
                    for i, slot in enumerate(nn_slots)
                    if bits >> (n_bits - 1 - i) & 1
                }
                atom_table = {
                    slot: 1
                    for i, slot in enumerate(atom_slots)
                    if bits >> (n_bits - 1 - len(nn_slots) - i) & 1
                }
                for ev_index in range(len(ev_options) ** n_ev):
                    evidence = {}
                    rem = ev_index
                    for i in range(n_ev - 1, -1, -1):
                        evidence[ev_slots[i]] = ev_options[rem % len(ev_options)]
                        rem //= len(ev_options)
                    m = SubsetModel(
                        worlds=frozenset(worlds),
                        normal=normal_set,
                        phi=b.phi,
                        terms=b.terms,
                        nonnormal_val=val,
                        normal_atoms=atom_table,
                        evidence=evidence,
                    )
                    report = check_well_formed(m, cls, cs, system)
                    satisfied = holds_at_all_normal(m, f)
                    if report.ok and not satisfied:
                        return m
    return None
