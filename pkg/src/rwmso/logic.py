"""MSO1 formulas over {E, L1..Lt}: AST, concrete syntax, and rewrites.

Grammar (whitespace-insensitive)::

    formula  := quant | disj
    quant    := ("Ex"|"Ax") objvar "." formula | ("EX"|"AX") setvar "." formula
    disj     := conj ("|" conj)*
    conj     := unary ("&" unary)*
    unary    := "!" unary | "(" formula ")" | atom
    atom     := objvar "=" objvar | setvar "=" setvar
              | "adj(" objvar "," objvar ")" | "label" INT "(" objvar ")"
              | setvar "(" objvar ")"

Object variables start lowercase, set variables uppercase.  ``Ex``,
``Ax``, ``EX``, ``AX``, ``adj`` and ``label<digits>`` are reserved.
Bound variables are alpha-renamed at parse time so that every binder
introduces a globally fresh name, disjoint from all free variables.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import RwmsoError


class Formula:
    """Base class for formula AST nodes."""

    __slots__ = ()

    def __str__(self):
        return pretty_print(self)


@dataclass(frozen=True)
class Equal(Formula):
    left: str
    right: str


@dataclass(frozen=True)
class SetEqual(Formula):
    left: str
    right: str


@dataclass(frozen=True)
class Adj(Formula):
    left: str
    right: str


@dataclass(frozen=True)
class Label(Formula):
    index: int
    var: str


@dataclass(frozen=True)
class In(Formula):
    set_var: str
    var: str


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class ExistsObj(Formula):
    var: str
    sub: Formula


@dataclass(frozen=True)
class ForallObj(Formula):
    var: str
    sub: Formula


@dataclass(frozen=True)
class ExistsSet(Formula):
    set_var: str
    sub: Formula


@dataclass(frozen=True)
class ForallSet(Formula):
    set_var: str
    sub: Formula


ATOM_TYPES = (Equal, SetEqual, Adj, Label, In)
_QUANT = {ExistsObj: "Ex", ForallObj: "Ax", ExistsSet: "EX", ForallSet: "AX"}


def is_atomic(phi: Formula) -> bool:
    return isinstance(phi, ATOM_TYPES)


@dataclass(frozen=True)
class VariableList:
    objects: tuple[str, ...]
    sets: tuple[str, ...]


class FormulaSyntaxError(RwmsoError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


_KEYWORDS = {"Ex", "Ax", "EX", "AX", "adj", "label"}
_TOKEN_RE = re.compile(r"\s*([A-Za-z][A-Za-z0-9_]*|[()=.,&|!])")
_LABEL_RE = re.compile(r"label(\d+)$")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            rest = text[pos:]
            offset = pos + len(rest) - len(rest.lstrip())
            if offset >= len(text):
                break
            raise FormulaSyntaxError(f"unexpected character {text[offset]!r}", offset)
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, int]], text_len: int, t: int):
        self.tokens = tokens
        self.text_len = text_len
        self.t = t
        self.i = 0

    def _peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def _pos(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else self.text_len

    def _error(self, message: str):
        raise FormulaSyntaxError(message, self._pos())

    def _expect(self, tok: str):
        if self._peek() != tok:
            self._error(f"expected {tok!r}")
        self.i += 1

    def _ident(self, kind: str) -> str:
        tok = self._peek()
        if tok is None or not tok[0].isalpha() or tok in _KEYWORDS or _LABEL_RE.match(tok):
            self._error(f"expected {kind}")
        if kind == "object variable" and not tok[0].islower():
            self._error(f"expected {kind}")
        if kind == "set variable" and not tok[0].isupper():
            self._error(f"expected {kind}")
        self.i += 1
        return tok

    def parse(self) -> Formula:
        phi = self.formula()
        if self.i < len(self.tokens):
            self._error(f"unexpected token {self._peek()!r}")
        return phi

    def formula(self) -> Formula:
        tok = self._peek()
        if tok in ("Ex", "Ax"):
            self.i += 1
            var = self._ident("object variable")
            self._expect(".")
            body = self.formula()
            return ExistsObj(var, body) if tok == "Ex" else ForallObj(var, body)
        if tok in ("EX", "AX"):
            self.i += 1
            var = self._ident("set variable")
            self._expect(".")
            body = self.formula()
            return ExistsSet(var, body) if tok == "EX" else ForallSet(var, body)
        return self.disj()

    def disj(self) -> Formula:
        phi = self.conj()
        while self._peek() == "|":
            self.i += 1
            phi = Or(phi, self.conj())
        return phi

    def conj(self) -> Formula:
        phi = self.unary()
        while self._peek() == "&":
            self.i += 1
            phi = And(phi, self.unary())
        return phi

    def unary(self) -> Formula:
        tok = self._peek()
        if tok == "!":
            self.i += 1
            return Not(self.unary())
        if tok == "(":
            self.i += 1
            phi = self.formula()
            self._expect(")")
            return phi
        return self.atom()

    def atom(self) -> Formula:
        tok = self._peek()
        if tok is None:
            self._error("expected atom")
        if tok == "adj":
            self.i += 1
            self._expect("(")
            a = self._ident("object variable")
            self._expect(",")
            b = self._ident("object variable")
            self._expect(")")
            return Adj(a, b)
        m = _LABEL_RE.match(tok)
        if m:
            index = int(m.group(1))
            if not 1 <= index <= self.t:
                self._error(f"label index {index} outside 1..{self.t}")
            self.i += 1
            self._expect("(")
            a = self._ident("object variable")
            self._expect(")")
            return Label(index, a)
        if tok[0].islower():
            a = self._ident("object variable")
            self._expect("=")
            b = self._ident("object variable")
            return Equal(a, b)
        if tok[0].isupper():
            a = self._ident("set variable")
            nxt = self._peek()
            if nxt == "=":
                self.i += 1
                b = self._ident("set variable")
                return SetEqual(a, b)
            self._expect("(")
            b = self._ident("object variable")
            self._expect(")")
            return In(a, b)
        self._error(f"unexpected token {tok!r}")


def parse_formula(text: str, t: int = 1) -> Formula:
    """Parse the concrete syntax; bound variables are made unique."""
    if t < 0:
        raise RwmsoError("label width must be nonnegative")
    tokens = _tokenize(text)
    phi = _Parser(tokens, len(text), t).parse()
    return _alpha_rename(phi)


def _alpha_rename(phi: Formula) -> Formula:
    fv = free_variables(phi)
    claimed = set(fv.objects) | set(fv.sets)

    def fresh(name: str) -> str:
        if name not in claimed:
            return name
        k = 2
        while f"{name}{k}" in claimed:
            k += 1
        return f"{name}{k}"

    def walk(psi: Formula, env: dict[str, str]) -> Formula:
        if isinstance(psi, Equal):
            return Equal(env.get(psi.left, psi.left), env.get(psi.right, psi.right))
        if isinstance(psi, SetEqual):
            return SetEqual(env.get(psi.left, psi.left), env.get(psi.right, psi.right))
        if isinstance(psi, Adj):
            return Adj(env.get(psi.left, psi.left), env.get(psi.right, psi.right))
        if isinstance(psi, Label):
            return Label(psi.index, env.get(psi.var, psi.var))
        if isinstance(psi, In):
            return In(env.get(psi.set_var, psi.set_var), env.get(psi.var, psi.var))
        if isinstance(psi, Not):
            return Not(walk(psi.sub, env))
        if isinstance(psi, (And, Or)):
            return type(psi)(walk(psi.left, env), walk(psi.right, env))
        if isinstance(psi, (ExistsObj, ForallObj)):
            new = fresh(psi.var)
            claimed.add(new)
            return type(psi)(new, walk(psi.sub, {**env, psi.var: new}))
        if isinstance(psi, (ExistsSet, ForallSet)):
            new = fresh(psi.set_var)
            claimed.add(new)
            return type(psi)(new, walk(psi.sub, {**env, psi.set_var: new}))
        raise RwmsoError(f"unknown formula node {psi!r}")

    return walk(phi, {})


def pretty_print(phi: Formula) -> str:
    """Concrete syntax; ``parse_formula(pretty_print(phi)) == phi``."""
    if isinstance(phi, Equal) or isinstance(phi, SetEqual):
        return f"{phi.left} = {phi.right}"
    if isinstance(phi, Adj):
        return f"adj({phi.left}, {phi.right})"
    if isinstance(phi, Label):
        return f"label{phi.index}({phi.var})"
    if isinstance(phi, In):
        return f"{phi.set_var}({phi.var})"
    if isinstance(phi, Not):
        sub = pretty_print(phi.sub)
        return f"!{sub}" if is_atomic(phi.sub) or isinstance(phi.sub, Not) else f"!({sub})"
    if isinstance(phi, (And, Or)):
        # quantifiers bind to the end of the formula, so as operands
        # they need their own parentheses
        def operand(sub: Formula) -> str:
            s = pretty_print(sub)
            return f"({s})" if isinstance(
                sub, (ExistsObj, ForallObj, ExistsSet, ForallSet)) else s
        sep = "&" if isinstance(phi, And) else "|"
        return f"({operand(phi.left)} {sep} {operand(phi.right)})"
    if isinstance(phi, (ExistsObj, ForallObj)):
        return f"{_QUANT[type(phi)]} {phi.var}. {pretty_print(phi.sub)}"
    if isinstance(phi, (ExistsSet, ForallSet)):
        return f"{_QUANT[type(phi)]} {phi.set_var}. {pretty_print(phi.sub)}"
    raise RwmsoError(f"unknown formula node {phi!r}")


def quantifier_rank(phi: Formula) -> int:
    if is_atomic(phi):
        return 0
    if isinstance(phi, Not):
        return quantifier_rank(phi.sub)
    if isinstance(phi, (And, Or)):
        return max(quantifier_rank(phi.left), quantifier_rank(phi.right))
    return quantifier_rank(phi.sub) + 1


def to_nnf(phi: Formula) -> Formula:
    """Push negations to the atoms; preserves quantifier rank."""
    if is_atomic(phi):
        return phi
    if isinstance(phi, (And, Or)):
        return type(phi)(to_nnf(phi.left), to_nnf(phi.right))
    if isinstance(phi, (ExistsObj, ForallObj)):
        return type(phi)(phi.var, to_nnf(phi.sub))
    if isinstance(phi, (ExistsSet, ForallSet)):
        return type(phi)(phi.set_var, to_nnf(phi.sub))
    sub = phi.sub
    if is_atomic(sub):
        return phi
    if isinstance(sub, Not):
        return to_nnf(sub.sub)
    if isinstance(sub, And):
        return Or(to_nnf(Not(sub.left)), to_nnf(Not(sub.right)))
    if isinstance(sub, Or):
        return And(to_nnf(Not(sub.left)), to_nnf(Not(sub.right)))
    if isinstance(sub, ExistsObj):
        return ForallObj(sub.var, to_nnf(Not(sub.sub)))
    if isinstance(sub, ForallObj):
        return ExistsObj(sub.var, to_nnf(Not(sub.sub)))
    if isinstance(sub, ExistsSet):
        return ForallSet(sub.set_var, to_nnf(Not(sub.sub)))
    if isinstance(sub, ForallSet):
        return ExistsSet(sub.set_var, to_nnf(Not(sub.sub)))
    raise RwmsoError(f"unknown formula node {sub!r}")


def is_nnf(phi: Formula) -> bool:
    if isinstance(phi, Not):
        return is_atomic(phi.sub)
    if is_atomic(phi):
        return True
    if isinstance(phi, (And, Or)):
        return is_nnf(phi.left) and is_nnf(phi.right)
    return is_nnf(phi.sub)


def free_variables(phi: Formula) -> VariableList:
    """Free variables ordered by first occurrence."""
    objects: dict[str, None] = {}
    sets: dict[str, None] = {}

    def walk(psi: Formula, bound: frozenset[str]):
        if isinstance(psi, (Equal, Adj)):
            for v in (psi.left, psi.right):
                if v not in bound:
                    objects.setdefault(v)
        elif isinstance(psi, SetEqual):
            for v in (psi.left, psi.right):
                if v not in bound:
                    sets.setdefault(v)
        elif isinstance(psi, Label):
            if psi.var not in bound:
                objects.setdefault(psi.var)
        elif isinstance(psi, In):
            if psi.set_var not in bound:
                sets.setdefault(psi.set_var)
            if psi.var not in bound:
                objects.setdefault(psi.var)
        elif isinstance(psi, Not):
            walk(psi.sub, bound)
        elif isinstance(psi, (And, Or)):
            walk(psi.left, bound)
            walk(psi.right, bound)
        elif isinstance(psi, (ExistsObj, ForallObj)):
            walk(psi.sub, bound | {psi.var})
        elif isinstance(psi, (ExistsSet, ForallSet)):
            walk(psi.sub, bound | {psi.set_var})
        else:
            raise RwmsoError(f"unknown formula node {psi!r}")

    walk(phi, frozenset())
    return VariableList(tuple(objects), tuple(sets))


def is_sentence(phi: Formula) -> bool:
    fv = free_variables(phi)
    return not fv.objects and not fv.sets
