"""Text syntax for polynomials and states, and the parsers that invert it.

Polynomials: integers, rationals ``p/q``, variables ``x1..xn`` (aliases
``x, y, z`` when n <= 3), ``+ - * ^`` and parentheses.

States use letters ``b1, c1, B1, g1`` for b^1, c_1, beta_1, gamma^1, a
derivative prefix ``D<k> `` (so ``D1 g1`` is the z-derivative of gamma^1),
``^`` for repeated even letters and ``h`` for hbar, e.g.
``-c1*c2 + h*b1``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .field_algebra import DimensionMismatch, Generator, Kind, StatePolynomial

_LETTER_NAME = {Kind.B: "b", Kind.C: "c", Kind.BETA: "B", Kind.GAMMA: "g"}
_NAME_KIND = {v: k for k, v in _LETTER_NAME.items()}
ALIASES = ("x", "y", "z")


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.text = text
        self.pos = pos
        where = f" at position {pos}" if text else ""
        super().__init__(f"{message}{where}" + (f": {text!r}" if text else ""))


# -- rendering -------------------------------------------------------------


def _fmt_coeff(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def render_letter(g: Generator) -> str:
    name = f"{_LETTER_NAME[g.kind]}{g.index}"
    return f"D{g.deriv} {name}" if g.deriv else name


def _render_word(word) -> list[str]:
    # even letters commute with everything, so printing them first is sign-free
    word = [g for g in word if not g.odd] + [g for g in word if g.odd]
    factors = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        s = render_letter(word[i])
        factors.append(s if j - i == 1 else f"{s}^{j - i}")
        i = j
    return factors


def _join_terms(parts: list[tuple[Fraction, list[str]]]) -> str:
    if not parts:
        return "0"
    out = []
    for k, (v, factors) in enumerate(parts):
        mag = abs(v)
        if factors:
            body = "*".join(factors if mag == 1 else [_fmt_coeff(mag)] + factors)
        else:
            body = _fmt_coeff(mag)
        if k == 0:
            out.append(("-" if v < 0 else "") + body)
        else:
            out.append((" - " if v < 0 else " + ") + body)
    return "".join(out)


def render_state(s: StatePolynomial) -> str:
    parts = []
    for m in s.terms():
        factors = []
        if m.hbar:
            factors.append("h" if m.hbar == 1 else f"h^{m.hbar}")
        factors.extend(_render_word(m.word))
        parts.append((m.coeff, factors))
    return _join_terms(parts)


def render_poly(p, names=None) -> str:
    names = names or [f"x{i}" for i in range(1, p.n + 1)]
    parts = []
    for e, v in sorted(p.terms.items(), key=lambda kv: (-sum(kv[0]), tuple(-x for x in kv[0]))):
        factors = []
        for name, k in zip(names, e):
            if k == 1:
                factors.append(name)
            elif k > 1:
                factors.append(f"{name}^{k}")
        parts.append((v, factors))
    return _join_terms(parts)


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(D\d+\s+[A-Za-z]\w*|[A-Za-z]\w*)|(\S))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        if m.group(1) is not None:
            tokens.append(("num", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        else:
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    """Recursive descent over + - * / ^ and parentheses.

    ``atom`` resolves names to ring elements; ``one`` builds constants.
    """

    def __init__(self, text, atom, const):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.atom = atom
        self.const = const

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def parse(self):
        if self.peek()[0] == "end":
            self.error("empty expression")
        v = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return v

    def expr(self):
        sign = 1
        if self.peek()[:2] in (("op", "-"), ("op", "+")):
            sign = -1 if self.take()[1] == "-" else 1
        v = self.term()
        if sign < 0:
            v = -v
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            v = v + rhs if op == "+" else v - rhs
        return v

    def term(self):
        v = self.factor()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op = self.take()
            if op[1] == "*":
                v = v * self.factor()
            else:
                tok = self.peek()
                if tok[0] != "num":
                    self.error("only division by integer literals is supported")
                self.take()
                if tok[1] == 0:
                    self.error("division by zero", tok)
                v = v * Fraction(1, tok[1])
        return v

    def factor(self):
        base = self.unary()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.peek()
            if tok[0] != "num":
                self.error("exponent must be a non-negative integer", tok)
            self.take()
            return base ** tok[1]
        return base

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return -self.unary()
        return self.primary()

    def primary(self):
        tok = self.take()
        kind, val, pos = tok
        if kind == "num":
            return self.const(val)
        if kind == "name":
            return self.atom(val, tok, self)
        if tok[:2] == ("op", "("):
            v = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.error("expected ')'")
            self.take()
            return v
        self.error(f"unexpected {val!r}" if val is not None else "unexpected end of input", tok)


def variable_names(n: int) -> dict[str, int]:
    names = {f"x{i}": i for i in range(1, n + 1)}
    if n <= 3:
        names.update({a: i + 1 for i, a in enumerate(ALIASES[:n])})
    return names


def parse_poly(text: str, n: int):
    from .poly import Poly

    names = variable_names(n)

    def atom(name, tok, parser):
        if name not in names:
            parser.error(f"unknown variable {name!r}", tok)
        return Poly.var(n, names[name])

    return _Parser(text, atom, lambda v: Poly.constant(n, v)).parse()


_STATE_NAME = re.compile(r"(?:D(\d+)\s+)?([bcBg])(\d+)$")


def parse_state(text: str, n: int) -> StatePolynomial:
    """Inverse of :func:`render_state`; ``h`` denotes hbar."""

    def atom(name, tok, parser):
        if name == "h":
            return StatePolynomial.constant(n, 1, hbar=1)
        m = _STATE_NAME.match(name)
        if not m:
            parser.error(f"unknown letter {name!r}", tok)
        deriv = int(m.group(1) or 0)
        idx = int(m.group(3))
        if not 1 <= idx <= n:
            parser.error(f"index {idx} outside dimension {n}", tok)
        return StatePolynomial.letter(n, Generator(_NAME_KIND[m.group(2)], idx, deriv))

    try:
        return _Parser(text, atom, lambda v: StatePolynomial.constant(n, v)).parse()
    except DimensionMismatch as exc:
        raise ParseError(str(exc)) from None
