"""Terms and equations over the bitten signature, with a small parser.

Syntax (Unicode with ASCII aliases)::

    binary   ∨ \\/ vee   ∧ /\\ wedge   ⊓ meet   ⊔ join   ∪ cup   ∩ cap
    postfix  ᶜ '
    prefix   ∼ ~   𝔏 L   ⋄ D        cl1(...)  cl2(...)
    consts   ⊥ bot   1 one   ⊤ top
    equality =   =ω  =w   =ω*  =w*

Postfix complement binds tightest, then the symbolic prefixes; binary
operators share one precedence level and a chain must repeat a single
operator (``x ∨ y ∨ z`` is fine, ``x ∨ y ∧ z`` needs parentheses).
A law is ``premises -> conclusions`` with comma-separated equations;
``ξ(x, y)`` abbreviates ``cl1(x) = x, cl2(xᶜ) = xᶜ`` for each argument, and
a chain ``a = b = c`` splits into ``a = b, b = c``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

from ..space import InputError

SIGNATURE: dict[str, int] = {
    "∨": 2, "∧": 2, "⊓": 2, "⊔": 2, "∪": 2, "∩": 2,
    "ᶜ": 1, "cl1": 1, "cl2": 1, "∼": 1, "𝔏": 1, "⋄": 1,
    "⊥": 0, "1": 0, "⊤": 0,
}
BINARY = ("∨", "∧", "⊓", "⊔", "∪", "∩")
PREFIX = ("∼", "𝔏", "⋄")
FUNCTIONS = ("cl1", "cl2")
CONSTANTS = ("⊥", "1", "⊤")
MODES = ("=", "ω", "ω*")

ALIASES = {
    "\\/": "∨", "vee": "∨", "/\\": "∧", "wedge": "∧", "meet": "⊓", "join": "⊔",
    "cup": "∪", "cap": "∩", "'": "ᶜ", "~": "∼", "L": "𝔏", "D": "⋄",
    "bot": "⊥", "one": "1", "top": "⊤", "xi": "ξ",
}


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class App:
    op: str
    args: tuple["Term", ...]

    def __str__(self) -> str:
        if self.op == "ᶜ":
            a = self.args[0]
            inner = str(a) if isinstance(a, (Var, Const)) or (isinstance(a, App) and a.op in FUNCTIONS) \
                else f"({a})"
            return inner + "ᶜ"
        if self.op in FUNCTIONS:
            return f"{self.op}({self.args[0]})"
        if self.op in PREFIX:
            a = self.args[0]
            inner = f"({a})" if isinstance(a, App) and a.op in BINARY else str(a)
            return self.op + inner
        left, right = (f"({a})" if isinstance(a, App) and a.op in BINARY else str(a) for a in self.args)
        return f"{left} {self.op} {right}"


Term = Union[Var, Const, App]


def variables(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset([t.name])
    if isinstance(t, Const):
        return frozenset()
    out: frozenset[str] = frozenset()
    for a in t.args:
        out |= variables(a)
    return out


def subterms(t: Term) -> Iterator[Term]:
    """Post-order traversal, so arguments come before the terms using them."""
    if isinstance(t, App):
        for a in t.args:
            yield from subterms(a)
    yield t


def operations(t: Term) -> set[str]:
    return {s.op for s in subterms(t) if isinstance(s, App)} | \
        {s.name for s in subterms(t) if isinstance(s, Const)}


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term
    mode: str = "="

    def __post_init__(self):
        if self.mode not in MODES:
            raise InputError(f"unknown equality mode {self.mode!r}")

    @property
    def variables(self) -> frozenset[str]:
        return variables(self.lhs) | variables(self.rhs)

    def __str__(self) -> str:
        sym = "=" if self.mode == "=" else f"={self.mode}"
        return f"{self.lhs} {sym} {self.rhs}"


# -- tokenizer ------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<arrow>->|→|⟶)"
    r"|(?P<eq>=(?:ω\*|w\*|ω|w)?|≝(?:ω\*|ω))"
    r"|(?P<word>[A-Za-z][A-Za-z0-9]*)"
    r"|(?P<sym>\\/|/\\|[∨∧⊓⊔∪∩ᶜ'∼~𝔏⋄⊥⊤ξ(),1])"
    r")"
)


def _tokens(text: str) -> list[tuple[str, str]]:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise InputError(f"cannot parse {text[pos:]!r}")
        pos = m.end()
        kind = m.lastgroup
        val = m.group(kind)
        if kind == "eq":
            mode = val.lstrip("=≝").replace("w", "ω") or "="
            out.append(("eq", mode))
        elif kind == "arrow":
            out.append(("arrow", val))
        else:
            val = ALIASES.get(val, val)
            if kind == "word" and val not in FUNCTIONS and val not in ALIASES.values():
                if not re.fullmatch(r"[a-z][0-9]*", val):
                    raise InputError(f"unknown symbol {val!r}")
                out.append(("var", val))
            else:
                out.append(("sym", val))
    return out


class _Parser:
    def __init__(self, tokens: list[tuple[str, str]]):
        self.toks = tokens
        self.i = 0

    def peek(self) -> tuple[str, str] | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, kind: str | None = None, val: str | None = None) -> tuple[str, str]:
        t = self.peek()
        if t is None or (kind and t[0] != kind) or (val and t[1] != val):
            raise InputError(f"expected {val or kind}, found {t[1] if t else 'end of input'}")
        self.i += 1
        return t

    def expr(self) -> Term:
        left = self.unary()
        op = None
        while (t := self.peek()) and t[0] == "sym" and t[1] in BINARY:
            if op is not None and t[1] != op:
                raise InputError(f"mixed operators {op} and {t[1]} need parentheses")
            op = t[1]
            self.i += 1
            left = App(op, (left, self.unary()))
        return left

    def unary(self) -> Term:
        t = self.peek()
        if t and t[0] == "sym" and t[1] in PREFIX:
            self.i += 1
            return App(t[1], (self.unary(),))
        return self.postfix()

    def postfix(self) -> Term:
        out = self.primary()
        while (t := self.peek()) and t == ("sym", "ᶜ"):
            self.i += 1
            out = App("ᶜ", (out,))
        return out

    def primary(self) -> Term:
        t = self.take()
        if t[0] == "var":
            return Var(t[1])
        if t[1] in CONSTANTS:
            return Const(t[1])
        if t[1] in FUNCTIONS:
            self.take("sym", "(")
            arg = self.expr()
            self.take("sym", ")")
            return App(t[1], (arg,))
        if t[1] == "(":
            inner = self.expr()
            self.take("sym", ")")
            return inner
        raise InputError(f"unexpected {t[1]!r}")

    def xi(self) -> list[Equation]:
        self.take("sym", "ξ")
        names = []
        if self.peek() == ("sym", "("):
            self.i += 1
            names.append(self.take("var")[1])
            while self.peek() == ("sym", ","):
                self.i += 1
                names.append(self.take("var")[1])
            self.take("sym", ")")
        else:
            names.append(self.take("var")[1])
        return [eq for n in names for eq in xi_equations(Var(n))]

    def clause(self) -> list[Equation]:
        if self.peek() == ("sym", "ξ"):
            return self.xi()
        terms = [self.expr()]
        modes = []
        while (t := self.peek()) and t[0] == "eq":
            self.i += 1
            modes.append(t[1])
            terms.append(self.expr())
        if not modes:
            raise InputError("expected an equation")
        return [Equation(terms[k], terms[k + 1], modes[k]) for k in range(len(modes))]

    def clauses(self) -> list[Equation]:
        out = self.clause()
        while self.peek() == ("sym", ","):
            self.i += 1
            out.extend(self.clause())
        return out


def xi_equations(t: Term) -> list[Equation]:
    """``cl1 t = t`` and ``cl2(tᶜ) = tᶜ``: t is C1-closed and C2-open."""
    comp = App("ᶜ", (t,))
    return [Equation(App("cl1", (t,)), t), Equation(App("cl2", (comp,)), comp)]


def parse_term(text: str) -> Term:
    p = _Parser(_tokens(text))
    t = p.expr()
    if p.peek() is not None:
        raise InputError(f"trailing input after term: {p.peek()[1]!r}")
    return t


def parse_law(text: str) -> tuple[tuple[Equation, ...], tuple[Equation, ...]]:
    """Split ``premises -> conclusions`` into two tuples of equations."""
    p = _Parser(_tokens(text))
    first = p.clauses()
    if p.peek() is not None and p.peek()[0] == "arrow":
        p.i += 1
        second = p.clauses()
        premises, conclusions = first, second
    else:
        premises, conclusions = [], first
    if p.peek() is not None:
        raise InputError(f"trailing input in law: {p.peek()[1]!r}")
    for eq in premises:
        if eq.mode != "=":
            raise InputError("premises use plain equality")
    return tuple(premises), tuple(conclusions)
