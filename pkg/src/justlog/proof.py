"""Proof objects and the Hilbert-style checker.

A proof is a numbered list of steps; each step is an axiom instance, a
modus ponens application citing two earlier steps, or a necessitation
instance citing a (constant, axiom) pair of the constant specification.
Necessitation at level n concludes the tower

    n=0   c:A
    n=1   !c:c:A
    n=2   !!c:!c:c:A   ...

Checking is per step and deterministic; a rejection carries the first
failing step index and one of the stable reason codes below.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from .axioms import (
    AxiomTag,
    ConstantSpec,
    SystemId,
    cs_contains,
    match_axiom,
    parse_cs_file,
)
from .syntax import (
    Bang,
    Constant,
    Formula,
    Holds,
    Implies,
    ParseError,
    formula_has_sum,
    parse_formula,
    print_formula,
)

REASON_BAD_AXIOM = "bad-axiom"
REASON_BAD_MP = "bad-mp-shape"
REASON_BAD_AN = "bad-an-pair"
REASON_FORWARD_REF = "forward-reference"
REASON_PLUS = "plus-in-minus-language"


@dataclass(frozen=True)
class ByAxiom:
    tag: AxiomTag


@dataclass(frozen=True)
class ByMP:
    major: int  # 1-based index of the step proving A->B
    minor: int  # 1-based index of the step proving A


@dataclass(frozen=True)
class ByAN:
    constant: Constant
    axiom: Formula
    level: int


Justification = Union[ByAxiom, ByMP, ByAN]


@dataclass(frozen=True)
class Step:
    formula: Formula
    why: Justification


@dataclass(frozen=True)
class Proof:
    system: SystemId
    cs: ConstantSpec
    steps: tuple[Step, ...]

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if not self.steps:
            raise ValueError("a proof must have at least one step")
        if self.cs.system is not self.system:
            raise ValueError("constant specification belongs to a different system")

    @property
    def conclusion(self) -> Formula:
        return self.steps[-1].formula


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    step: Optional[int] = None
    reason: Optional[str] = None

    @classmethod
    def ok(cls) -> "Verdict":
        return cls(True)

    @classmethod
    def rejected(cls, step: int, reason: str) -> "Verdict":
        return cls(False, step, reason)


def an_conclusion(c: Constant, a: Formula, n: int) -> Formula:
    """Necessitation conclusion at level n (n=0 is the bare c:A)."""
    if n < 0:
        raise ValueError("necessitation level must be non-negative")
    f: Formula = Holds(c, a)
    tower = c
    for _ in range(n):
        tower = Bang(tower)
        f = Holds(tower, f)
    return f


def check_proof(p: Proof) -> Verdict:
    """Accept iff every step is a correct axiom, MP or necessitation step.

    In the +-free system every formula occurring in the proof must avoid
    the sum operation.
    """
    minus = p.system is SystemId.JNOC_MINUS
    for k, step in enumerate(p.steps, 1):
        if minus:
            if formula_has_sum(step.formula):
                return Verdict.rejected(k, REASON_PLUS)
            if isinstance(step.why, ByAN) and formula_has_sum(step.why.axiom):
                return Verdict.rejected(k, REASON_PLUS)
        match step.why:
            case ByAxiom(tag):
                if match_axiom(step.formula, p.system) is not tag:
                    return Verdict.rejected(k, REASON_BAD_AXIOM)
            case ByMP(i, j):
                if not (1 <= i < k and 1 <= j < k):
                    return Verdict.rejected(k, REASON_FORWARD_REF)
                major = p.steps[i - 1].formula
                minor = p.steps[j - 1].formula
                if major != Implies(minor, step.formula):
                    return Verdict.rejected(k, REASON_BAD_MP)
            case ByAN(c, a, n):
                if n < 0 or not cs_contains(p.cs, c, a):
                    return Verdict.rejected(k, REASON_BAD_AN)
                if step.formula != an_conclusion(c, a, n):
                    return Verdict.rejected(k, REASON_BAD_AN)
    return Verdict.ok()


# ------------------------------------------------------------- file format

_SYSTEM_TOKENS = {s.value: s for s in SystemId}
_TAG_TOKENS = {t.value: t for t in AxiomTag}


def format_proof(p: Proof, cs_ref: Optional[str] = None) -> str:
    """Render a checkable proof file.

    ``cs_ref`` is the text of the ``cs`` header line; it defaults to
    ``total`` or ``empty`` and must be given explicitly (a file path) for
    a non-empty finite specification.
    """
    if cs_ref is None:
        if p.cs.is_total:
            cs_ref = "total"
        elif not p.cs.pairs:
            cs_ref = "empty"
        else:
            raise ValueError("a finite constant specification needs an explicit cs_ref")
    lines = [f"system {p.system.value}", f"cs {cs_ref}"]
    for k, step in enumerate(p.steps, 1):
        match step.why:
            case ByAxiom(tag):
                just = tag.value
            case ByMP(i, j):
                just = f"mp {i} {j}"
            case ByAN(c, a, n):
                just = f"an c{c.index} n={n} : {print_formula(a)}"
        lines.append(f"{k}. {print_formula(step.formula)}  [{just}]")
    return "\n".join(lines) + "\n"


def parse_proof_file(text: str, base_dir: Optional[Union[str, Path]] = None) -> Proof:
    """Read a proof file; ``cs <path>`` headers resolve relative to base_dir."""
    lines = [
        (n, ln.strip())
        for n, ln in enumerate(text.splitlines(), 1)
        if ln.strip() and not ln.strip().startswith("#")
    ]
    if len(lines) < 3:
        raise ValueError("a proof file needs two header lines and at least one step")

    n, ln = lines[0]
    parts = ln.split()
    if len(parts) != 2 or parts[0] != "system" or parts[1] not in _SYSTEM_TOKENS:
        raise ValueError(f"line {n}: expected 'system <jd|jnoc|jnoc-minus|jnoc-plus>'")
    system = _SYSTEM_TOKENS[parts[1]]

    n, ln = lines[1]
    parts = ln.split(None, 1)
    if len(parts) != 2 or parts[0] != "cs":
        raise ValueError(f"line {n}: expected 'cs <total|empty|file>'")
    ref = parts[1].strip()
    if ref == "total":
        cs = ConstantSpec.total(system)
    elif ref == "empty":
        cs = ConstantSpec.empty(system)
    else:
        path = Path(base_dir) / ref if base_dir is not None else Path(ref)
        cs = parse_cs_file(path.read_text(), system)

    steps = []
    for expected, (n, ln) in enumerate(lines[2:], 1):
        m = re.match(r"^(\d+)\.\s*(.*?)\s*\[([^\]]*)\]\s*$", ln)
        if m is None:
            raise ValueError(f"line {n}: expected '<k>. <formula>  [<justification>]'")
        if int(m.group(1)) != expected:
            raise ValueError(f"line {n}: steps must be numbered consecutively from 1")
        try:
            formula = parse_formula(m.group(2))
        except ParseError as e:
            raise ValueError(f"line {n}: {e}") from e
        steps.append(Step(formula, _parse_justification(m.group(3).strip(), n)))
    return Proof(system, cs, tuple(steps))


def _parse_justification(text: str, line_no: int) -> Justification:
    if text in _TAG_TOKENS:
        return ByAxiom(_TAG_TOKENS[text])
    m = re.match(r"^mp\s+(\d+)\s+(\d+)$", text)
    if m is not None:
        return ByMP(int(m.group(1)), int(m.group(2)))
    m = re.match(r"^an\s+c(\d+)\s+n=(\d+)\s*:\s*(.+)$", text)
    if m is not None:
        try:
            axiom = parse_formula(m.group(3))
        except ParseError as e:
            raise ValueError(f"line {line_no}: {e}") from e
        return ByAN(Constant(int(m.group(1))), axiom, int(m.group(2)))
    raise ValueError(f"line {line_no}: unknown justification {text!r}")
