"""Text syntax for series, Laurent polynomials and Weierstrass models.

Grammar (whitespace is ignored)::

    expr     := ['+'|'-'] term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := atom ['^' exponent]
    atom     := INT ['/' INT] | 't' | NAME | '(' expr ')' | 'O' '(' 't' ['^' exponent] ')'
    exponent := ['-'] INT | '(' ['-'] INT ['/' INT] ')'

``t`` is the uniformizer and may carry rational exponents; other names are
polynomial variables with integer (possibly negative) exponents.  The printer
:func:`format_series` produces text that parses back to an identical series.
"""

from __future__ import annotations

import re
from fractions import Fraction

from tropell.errors import ParseError
from tropell.puiseux import INF, PuiseuxSeries

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")

# A parsed expression: {((var, power), ...) sorted by var: PuiseuxSeries}
Poly = dict


class _Parser:
    def __init__(self, text, allowed=None):
        self.text = text
        self.allowed = allowed
        self.tokens = []
        for m in _TOKEN.finditer(text):
            if m.group(0).strip() == "":
                continue
            kind = "int" if m.group(1) else "name" if m.group(2) else "op"
            self.tokens.append((kind, m.group(m.lastindex), m.start(m.lastindex)))
        self.i = 0

    def error(self, message):
        pos = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)
        raise ParseError(message, self.text, pos)

    def peek(self, value=None):
        if self.i >= len(self.tokens):
            return None
        tok = self.tokens[self.i]
        if value is not None and tok[1] != value:
            return None
        return tok

    def take(self, value=None):
        tok = self.peek(value)
        if tok is None:
            self.error(f"expected {value!r}" if value else "unexpected end of input")
        self.i += 1
        return tok

    def parse(self):
        if not self.tokens:
            self.error("empty expression")
        result = self.expr()
        if self.i != len(self.tokens):
            self.error(f"unexpected {self.tokens[self.i][1]!r}")
        return result

    def expr(self):
        sign = 1
        if self.peek("+"):
            self.take()
        elif self.peek("-"):
            self.take()
            sign = -1
        acc = _scale(self.term(), sign)
        while self.peek("+") or self.peek("-"):
            op = self.take()[1]
            acc = _add(acc, _scale(self.term(), 1 if op == "+" else -1))
        return acc

    def term(self):
        acc = self.factor()
        while self.peek("*"):
            self.take()
            acc = _mul(acc, self.factor())
        return acc

    def integer(self):
        tok = self.peek()
        if tok is None or tok[0] != "int":
            self.error("expected an integer")
        self.i += 1
        return int(tok[1])

    def exponent(self, rational):
        if self.peek("("):
            self.take()
            neg = bool(self.peek("-")) and self.take()
            num = self.integer()
            den = 1
            if self.peek("/"):
                self.take()
                den = self.integer()
                if den == 0:
                    self.error("zero denominator")
            self.take(")")
            value = Fraction(-num if neg else num, den)
        else:
            neg = bool(self.peek("-")) and self.take()
            value = Fraction(-self.integer() if neg else self.integer())
        if not rational and value.denominator != 1:
            self.error("variable exponents must be integers")
        return value

    def factor(self):
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of input")
        kind, value, _ = tok
        if kind == "int":
            self.i += 1
            num = int(value)
            den = 1
            if self.peek("/"):
                self.take()
                den = self.integer()
                if den == 0:
                    self.error("zero denominator")
            base = {(): PuiseuxSeries.constant(Fraction(num, den))}
            return self._power(base, lambda: self.exponent(False), integral_only=True)
        if kind == "name" and value == "t":
            self.i += 1
            e = self.exponent(True) if self.peek("^") and self.take() else Fraction(1)
            return {(): PuiseuxSeries.monomial(1, e)}
        if kind == "name" and value == "O":
            self.i += 1
            self.take("(")
            if not (self.peek("t")):
                self.error("expected 't' inside O(...)")
            self.take()
            e = self.exponent(True) if self.peek("^") and self.take() else Fraction(1)
            self.take(")")
            return {(): PuiseuxSeries.big_o(e)}
        if kind == "name":
            if self.allowed is not None and value not in self.allowed:
                self.error(f"unknown variable {value!r}")
            self.i += 1
            e = self.exponent(False) if self.peek("^") and self.take() else Fraction(1)
            if e == 0:
                return {(): PuiseuxSeries.one()}
            return {((value, int(e)),): PuiseuxSeries.one()}
        if value == "(":
            self.i += 1
            inner = self.expr()
            self.take(")")
            return self._power(inner, lambda: self.exponent(False), integral_only=True)
        self.error(f"unexpected {value!r}")

    def _power(self, base, read_exponent, integral_only):
        if not self.peek("^"):
            return base
        self.take()
        e = read_exponent()
        if e < 0:
            self.error("negative powers are only allowed on t and variables")
        result = {(): PuiseuxSeries.one()}
        for _ in range(int(e)):
            result = _mul(result, base)
        return result


def _scale(p, sign):
    if sign == 1:
        return p
    return {k: -v for k, v in p.items()}


def _add(p, q):
    out = dict(p)
    for k, v in q.items():
        out[k] = out[k] + v if k in out else v
    return out


def _merge_monomials(m1, m2):
    powers = dict(m1)
    for name, e in m2:
        powers[name] = powers.get(name, 0) + e
    return tuple(sorted((n, e) for n, e in powers.items() if e != 0))


def _mul(p, q):
    out = {}
    for k1, v1 in p.items():
        for k2, v2 in q.items():
            k = _merge_monomials(k1, k2)
            prod = v1 * v2
            out[k] = out[k] + prod if k in out else prod
    return out


def parse_expression(text, allowed=None) -> Poly:
    """Parse ``text`` into ``{monomial: PuiseuxSeries}`` (zero terms dropped)."""
    poly = _Parser(text, allowed).parse()
    return {k: v for k, v in poly.items() if not v.is_zero()}


def parse_series(text) -> PuiseuxSeries:
    poly = _Parser(text, allowed=()).parse()
    return poly.get((), PuiseuxSeries.zero())


def parse_model(text):
    """Parse ``[a1,a2,a3,a4,a6]`` into five series."""
    stripped = text.strip()
    if not (stripped.startswith("[") and stripped.endswith("]")):
        raise ParseError("model literal must be enclosed in [...]", text, 0)
    body_start = text.index("[") + 1
    parts, depth, start = [], 0, body_start
    for i in range(body_start, text.rindex("]")):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append((start, text[start:i]))
            start = i + 1
    parts.append((start, text[start:text.rindex("]")]))
    if len(parts) != 5:
        raise ParseError(f"expected 5 coefficients, got {len(parts)}", text, body_start)
    coeffs = []
    for offset, chunk in parts:
        try:
            coeffs.append(parse_series(chunk))
        except ParseError as exc:
            raise ParseError(str(exc).rsplit(" at position", 1)[0], text,
                             offset + exc.position) from None
    return coeffs


# -- printing -----------------------------------------------------------------


def format_exponent(e: Fraction) -> str:
    if e.denominator == 1:
        return str(e.numerator)
    return f"({e})"


def _monomial(e: Fraction) -> str:
    if e == 1:
        return "t"
    return f"t^{format_exponent(e)}"


def _term(c: Fraction, e: Fraction) -> str:
    if e == 0:
        return str(c)
    m = _monomial(e)
    if c == 1:
        return m
    if c == -1:
        return "-" + m
    return f"{c}*{m}"


def join_terms(pieces) -> str:
    out = ""
    for piece in pieces:
        if not out:
            out = piece
        elif piece.startswith("-"):
            out += " - " + piece[1:]
        else:
            out += " + " + piece
    return out


def format_series(s: PuiseuxSeries) -> str:
    pieces = [_term(c, e) for e, c in s.items()]
    if s.precision != INF:
        pieces.append(f"O({_monomial(s.precision)})")
    return join_terms(pieces) if pieces else "0"
