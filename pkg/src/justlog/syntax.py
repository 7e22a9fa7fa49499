"""Abstract syntax, parser and printer for the explicit-evidence language.

Terms name reasons; formulas are built over implication and falsum, with
``t:F`` read as "F holds for reason t".

Surface syntax (ASCII):

    terms     t ::= c0, c1, ...   constants
                    x0, x1, ...   variables
                    t.t           application (left assoc)
                    t+t           sum (left assoc, binds looser than .)
                    !t            introspection (binds tightest)
    formulas  F ::= P0, P1, ...   atoms
                    _|_           falsum
                    F->F          implication (right assoc)
                    t:F           justified formula

``:`` binds tighter than ``->``, so ``t:P1->_|_`` is ``(t:P1)->_|_`` and
the body of ``:`` must be parenthesised when it is an implication.

``~A``, ``T``, ``A&B``, ``A|B`` and ``A<->B`` are sugar, expanded while
parsing:

    ~A     = A->_|_
    T      = _|_->_|_
    A&B    = (A->(B->_|_))->_|_
    A|B    = (A->_|_)->B
    A<->B  = (A->B)&(B->A)

``&``, ``|`` and ``<->`` share one precedence level between ``:`` and
``->`` and associate to the left.  The printer emits core syntax only
with minimal parentheses, so ``parse_formula(print_formula(f)) == f``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Union


class ParseError(ValueError):
    """Malformed input; carries the offset of the offending token."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


# ---------------------------------------------------------------- terms

def _cached_hash(node, *parts) -> int:
    # trees are compared and looked up constantly; recomputing a recursive
    # dataclass hash per lookup is quadratic, so memoize it per node
    h = node.__dict__.get("_h")
    if h is None:
        h = hash(parts)
        object.__setattr__(node, "_h", h)
    return h


@dataclass(frozen=True)
class Constant:
    index: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("constant index must be non-negative")

    def __str__(self):
        return print_term(self)

    def __hash__(self):
        return _cached_hash(self, 1, self.index)


@dataclass(frozen=True)
class Variable:
    index: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("variable index must be non-negative")

    def __str__(self):
        return print_term(self)

    def __hash__(self):
        return _cached_hash(self, 2, self.index)


@dataclass(frozen=True)
class App:
    left: "Term"
    right: "Term"

    def __str__(self):
        return print_term(self)

    def __hash__(self):
        return _cached_hash(self, 3, self.left, self.right)


@dataclass(frozen=True)
class Sum:
    left: "Term"
    right: "Term"

    def __str__(self):
        return print_term(self)

    def __hash__(self):
        return _cached_hash(self, 4, self.left, self.right)


@dataclass(frozen=True)
class Bang:
    inner: "Term"

    def __str__(self):
        return print_term(self)

    def __hash__(self):
        return _cached_hash(self, 5, self.inner)


Term = Union[Constant, Variable, App, Sum, Bang]


# ------------------------------------------------------------- formulas

@dataclass(frozen=True)
class Atom:
    index: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("atom index must be non-negative")

    def __str__(self):
        return print_formula(self)

    def __hash__(self):
        return _cached_hash(self, 6, self.index)


@dataclass(frozen=True)
class Falsum:
    def __str__(self):
        return print_formula(self)

    def __hash__(self):
        return 7


@dataclass(frozen=True)
class Implies:
    antecedent: "Formula"
    consequent: "Formula"

    def __str__(self):
        return print_formula(self)

    def __hash__(self):
        return _cached_hash(self, 8, self.antecedent, self.consequent)


@dataclass(frozen=True)
class Holds:
    term: Term
    body: "Formula"

    def __str__(self):
        return print_formula(self)

    def __hash__(self):
        return _cached_hash(self, 9, self.term, self.body)


Formula = Union[Atom, Falsum, Implies, Holds]

FALSUM = Falsum()


def neg(f: Formula) -> Formula:
    return Implies(f, FALSUM)


def top() -> Formula:
    return Implies(FALSUM, FALSUM)


def conj(a: Formula, b: Formula) -> Formula:
    return Implies(Implies(a, Implies(b, FALSUM)), FALSUM)


def disj(a: Formula, b: Formula) -> Formula:
    return Implies(Implies(a, FALSUM), b)


def iff(a: Formula, b: Formula) -> Formula:
    return conj(Implies(a, b), Implies(b, a))


# ------------------------------------------------------------- closures

def immediate_subformulas(f: Formula) -> tuple[Formula, ...]:
    match f:
        case Implies(a, b):
            return (a, b)
        case Holds(_, body):
            return (body,)
        case _:
            return ()


def immediate_subterms(t: Term) -> tuple[Term, ...]:
    match t:
        case App(l, r) | Sum(l, r):
            return (l, r)
        case Bang(inner):
            return (inner,)
        case _:
            return ()


def subformula_closure(seed: Iterable[Formula]) -> frozenset[Formula]:
    """Smallest superset of seed closed under immediate subformulas."""
    out: set[Formula] = set()
    stack = list(seed)
    while stack:
        f = stack.pop()
        if f not in out:
            out.add(f)
            stack.extend(immediate_subformulas(f))
    return frozenset(out)


def subterm_closure(seed: Iterable[Term]) -> frozenset[Term]:
    out: set[Term] = set()
    stack = list(seed)
    while stack:
        t = stack.pop()
        if t not in out:
            out.add(t)
            stack.extend(immediate_subterms(t))
    return frozenset(out)


def subformulas(f: Formula) -> frozenset[Formula]:
    return subformula_closure((f,))


def is_subformula_closed(phi: Iterable[Formula]) -> bool:
    s = set(phi)
    return all(g in s for f in s for g in immediate_subformulas(f))


def is_subterm_closed(terms: Iterable[Term]) -> bool:
    s = set(terms)
    return all(u in s for t in s for u in immediate_subterms(t))


def formula_terms(f: Formula) -> frozenset[Term]:
    """All terms occurring in f, closed under subterms."""
    tops: set[Term] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Holds):
            tops.add(g.term)
            stack.append(g.body)
        else:
            stack.extend(immediate_subformulas(g))
    return subterm_closure(tops)


def term_has_sum(t: Term) -> bool:
    match t:
        case Sum(_, _):
            return True
        case App(l, r):
            return term_has_sum(l) or term_has_sum(r)
        case Bang(inner):
            return term_has_sum(inner)
        case _:
            return False


def formula_has_sum(f: Formula) -> bool:
    match f:
        case Holds(t, body):
            return term_has_sum(t) or formula_has_sum(body)
        case Implies(a, b):
            return formula_has_sum(a) or formula_has_sum(b)
        case _:
            return False


# -------------------------------------------------------------- printer

@lru_cache(maxsize=None)
def print_term(t: Term) -> str:
    if isinstance(t, Sum):
        return print_term(t.left) + "+" + _print_app(t.right)
    return _print_app(t)


def _print_app(t: Term) -> str:
    if isinstance(t, Sum):
        return "(" + print_term(t) + ")"
    if isinstance(t, App):
        return _print_app(t.left) + "." + _print_base(t.right)
    return _print_base(t)


def _print_base(t: Term) -> str:
    match t:
        case Constant(i):
            return f"c{i}"
        case Variable(i):
            return f"x{i}"
        case Bang(inner):
            return "!" + _print_base(inner)
        case _:
            return "(" + print_term(t) + ")"


@lru_cache(maxsize=None)
def print_formula(f: Formula) -> str:
    if isinstance(f, Implies):
        return _print_unary(f.antecedent) + "->" + print_formula(f.consequent)
    return _print_unary(f)


def _print_unary(f: Formula) -> str:
    match f:
        case Atom(i):
            return f"P{i}"
        case Falsum():
            return "_|_"
        case Holds(t, body):
            return print_term(t) + ":" + _print_unary(body)
        case _:
            return "(" + print_formula(f) + ")"


# --------------------------------------------------------------- parser

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<falsum>_\|_)
      | (?P<iff><->)
      | (?P<arrow>->)
      | (?P<atom>P\d+)
      | (?P<const>c\d+)
      | (?P<var>x\d+)
      | (?P<top>T)
      | (?P<not>~) | (?P<and>&) | (?P<or>\|) | (?P<colon>:)
      | (?P<dot>\.) | (?P<plus>\+) | (?P<bang>!)
      | (?P<lparen>\() | (?P<rparen>\))
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, allow_plus: bool):
        self.tokens = _tokenize(text)
        self.i = 0
        self.allow_plus = allow_plus

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, what: str) -> tuple[str, str, int]:
        tok = self.peek()
        if tok[0] != kind:
            raise ParseError(f"expected {what}", tok[2])
        return self.take()

    def at_end(self) -> bool:
        return self.peek()[0] == "eof"

    # terms

    def term(self) -> Term:
        t = self.appterm()
        while self.peek()[0] == "plus":
            _, _, pos = self.take()
            if not self.allow_plus:
                raise ParseError("the '+' operation is not available in this language", pos)
            t = Sum(t, self.appterm())
        return t

    def appterm(self) -> Term:
        t = self.baseterm()
        while self.peek()[0] == "dot":
            self.take()
            t = App(t, self.baseterm())
        return t

    def baseterm(self) -> Term:
        bangs = 0
        while self.peek()[0] == "bang":
            self.take()
            bangs += 1
        kind, text, pos = self.peek()
        if kind == "const":
            self.take()
            t: Term = Constant(int(text[1:]))
        elif kind == "var":
            self.take()
            t = Variable(int(text[1:]))
        elif kind == "lparen":
            self.take()
            t = self.term()
            self.expect("rparen", "')'")
        else:
            raise ParseError("expected a term", pos)
        for _ in range(bangs):
            t = Bang(t)
        return t

    # formulas

    def formula(self) -> Formula:
        a = self.junct()
        if self.peek()[0] == "arrow":
            self.take()
            return Implies(a, self.formula())
        return a

    def junct(self) -> Formula:
        f = self.unary()
        while self.peek()[0] in ("and", "or", "iff"):
            kind, _, _ = self.take()
            g = self.unary()
            if kind == "and":
                f = conj(f, g)
            elif kind == "or":
                f = disj(f, g)
            else:
                f = iff(f, g)
        return f

    def unary(self) -> Formula:
        kind, text, pos = self.peek()
        if kind == "not":
            self.take()
            return neg(self.unary())
        if kind == "atom":
            self.take()
            return Atom(int(text[1:]))
        if kind == "falsum":
            self.take()
            return FALSUM
        if kind == "top":
            self.take()
            return top()
        if kind in ("const", "var", "bang"):
            t = self.term()
            self.expect("colon", "':'")
            return Holds(t, self.unary())
        if kind == "lparen":
            # either a parenthesised justification term or a formula group
            save = self.i
            try:
                t = self.term()
                self.expect("colon", "':'")
                return Holds(t, self.unary())
            except ParseError:
                self.i = save
            self.take()
            f = self.formula()
            self.expect("rparen", "')'")
            return f
        raise ParseError("expected a formula", pos)


def parse_formula(text: str, allow_plus: bool = True) -> Formula:
    p = _Parser(text, allow_plus)
    f = p.formula()
    if not p.at_end():
        raise ParseError("unexpected trailing input", p.peek()[2])
    return f


def parse_term(text: str, allow_plus: bool = True) -> Term:
    p = _Parser(text, allow_plus)
    t = p.term()
    if not p.at_end():
        raise ParseError("unexpected trailing input", p.peek()[2])
    return t
