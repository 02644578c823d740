"""Recursive-descent parser and canonical printer for the formula language.

    formula   := header ";" prefactor { "*" prefactor } [ "*" sum ]
    header    := "PRIME" INT "n+1"
    prefactor := "FACT(" linform ")" [ "^" SINT ] | "SGN(" linform ")"
    sum       := "SUM" "{" [ var { "," var } ] "}" ":" factor { "*" factor }
    var       := IDENT [ ":" INT ]          -- range 0..INT*n, default 0..n
    factor    := "C(" linform "," linform ")" [ "^" INT ]
               | "SGN(" linform ")" | "FACT(" linform ")" [ "^" SINT ]
    linform   := term { ("+"|"-") term } ;  term := [ INT "*" ] ( "n" | IDENT ) | INT

FACT inside a sum and the optional variable range are conservative
extensions used by bundled non-phi4 formulas.
"""
from __future__ import annotations

import re

from .ast import Binomial, ClosedForm, Fact, FormulaError, LinForm, Sign

_TOKEN = re.compile(r"\s*(?:(PRIME|SUM|FACT|SGN|C)\b|([A-Za-z_][A-Za-z_0-9]*)|(\d+)|([{}();,:^*+-]))")


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens: list[tuple[str, str, int]] = []
        self._lex()
        self.i = 0

    def _lex(self):
        pos = 0
        while pos < len(self.text):
            m = _TOKEN.match(self.text, pos)
            if not m:
                if self.text[pos:].strip():
                    raise FormulaError(f"lex error at offset {pos}: {self.text[pos:pos+12]!r}")
                break
            kw, ident, num, punct = m.groups()
            if kw:
                self.tokens.append(("kw", kw, m.start()))
            elif ident:
                self.tokens.append(("ident", ident, m.start()))
            elif num:
                self.tokens.append(("num", num, m.start()))
            elif punct:
                self.tokens.append(("punct", punct, m.start()))
            pos = m.end()

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("eof", "", len(self.text))

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, kind, value=None):
        k, v, at = self.next()
        if k != kind or (value is not None and v != value):
            want = value or kind
            raise FormulaError(f"expected {want!r} at offset {at}, found {v!r}")
        return v

    def error(self, msg):
        _, v, at = self.peek()
        raise FormulaError(f"{msg} at offset {at} (near {v!r})")


def parse_formula(text: str) -> ClosedForm:
    lx = _Lexer(text)
    lx.expect("kw", "PRIME")
    v_mult = int(lx.expect("num"))
    if lx.expect("ident") != "n":
        lx.error("expected n in header")
    lx.expect("punct", "+")
    if lx.expect("num") != "1":
        lx.error("header must end n+1")
    lx.expect("punct", ";")

    prefactors: list[Fact | Sign] = []
    variables: list[tuple[str, int]] = []
    factors: list[Binomial | Sign | Fact] = []

    prefactors.append(_parse_prefactor(lx))
    while lx.peek()[:2] == ("punct", "*"):
        lx.next()
        if lx.peek()[:2] == ("kw", "SUM"):
            lx.next()
            variables, factors = _parse_sum(lx)
            break
        prefactors.append(_parse_prefactor(lx))
    if lx.peek()[0] != "eof":
        lx.error("trailing input")
    return ClosedForm(v_mult, tuple(prefactors), tuple(variables), tuple(factors))


def _parse_prefactor(lx: _Lexer) -> Fact | Sign:
    k, v, _ = lx.peek()
    if (k, v) == ("kw", "FACT"):
        lx.next()
        lx.expect("punct", "(")
        arg = _parse_linform(lx)
        lx.expect("punct", ")")
        return Fact(arg, _parse_exponent(lx))
    if (k, v) == ("kw", "SGN"):
        lx.next()
        lx.expect("punct", "(")
        arg = _parse_linform(lx)
        lx.expect("punct", ")")
        return Sign(arg)
    lx.error("expected FACT or SGN prefactor")


def _parse_sum(lx: _Lexer):
    lx.expect("punct", "{")
    variables: list[tuple[str, int]] = []
    if lx.peek()[:2] != ("punct", "}"):
        while True:
            name = lx.expect("ident")
            mult = 1
            if lx.peek()[:2] == ("punct", ":"):
                lx.next()
                mult = int(lx.expect("num"))
            variables.append((name, mult))
            if lx.peek()[:2] == ("punct", ","):
                lx.next()
                continue
            break
    lx.expect("punct", "}")
    lx.expect("punct", ":")
    factors = [_parse_factor(lx)]
    while lx.peek()[:2] == ("punct", "*"):
        lx.next()
        factors.append(_parse_factor(lx))
    return variables, factors


def _parse_factor(lx: _Lexer):
    k, v, _ = lx.peek()
    if (k, v) == ("kw", "C"):
        lx.next()
        lx.expect("punct", "(")
        top = _parse_linform(lx)
        lx.expect("punct", ",")
        bottom = _parse_linform(lx)
        lx.expect("punct", ")")
        exp = _parse_exponent(lx)
        if exp < 1:
            lx.error("binomial exponent must be positive")
        return Binomial(top, bottom, exp)
    if (k, v) == ("kw", "SGN"):
        lx.next()
        lx.expect("punct", "(")
        arg = _parse_linform(lx)
        lx.expect("punct", ")")
        return Sign(arg)
    if (k, v) == ("kw", "FACT"):
        lx.next()
        lx.expect("punct", "(")
        arg = _parse_linform(lx)
        lx.expect("punct", ")")
        return Fact(arg, _parse_exponent(lx))
    lx.error("expected C, SGN, or FACT factor")


def _parse_exponent(lx: _Lexer) -> int:
    if lx.peek()[:2] == ("punct", "^"):
        lx.next()
        sign = 1
        if lx.peek()[:2] == ("punct", "-"):
            lx.next()
            sign = -1
        return sign * int(lx.expect("num"))
    return 1


def _parse_linform(lx: _Lexer) -> LinForm:
    total = LinForm()
    sign = 1
    first = True
    while True:
        k, v, _ = lx.peek()
        if (k, v) == ("punct", "-"):
            lx.next()
            sign = -sign if not first else -1
        elif (k, v) == ("punct", "+"):
            if first:
                lx.error("linform cannot start with +")
            lx.next()
        elif not first:
            break
        total = total + _parse_term(lx).scale(sign)
        sign = 1
        first = False
        if lx.peek()[:2] not in (("punct", "+"), ("punct", "-")):
            break
    return total


def _parse_term(lx: _Lexer) -> LinForm:
    k, v, _ = lx.peek()
    if k == "num":
        lx.next()
        coeff = int(v)
        if lx.peek()[:2] == ("punct", "*"):
            lx.next()
            k2, v2, _ = lx.next()
            if k2 != "ident":
                lx.error("expected symbol after coefficient")
            return LinForm.n(coeff) if v2 == "n" else LinForm.var(v2, coeff)
        return LinForm.const_form(coeff)
    if k == "ident":
        lx.next()
        return LinForm.n(1) if v == "n" else LinForm.var(v, 1)
    lx.error("expected term")


def print_formula(f: ClosedForm) -> str:
    """Canonical text; parse(print_formula(f)) reproduces f."""
    parts = [str(t) for t in f.prefactors]
    head = f"PRIME {f.v_mult}n+1; " + " * ".join(parts)
    if f.variables or f.factors:
        vars_txt = ",".join(name if mult == 1 else f"{name}:{mult}" for name, mult in f.variables)
        body = " * ".join(str(t) for t in f.factors)
        head += f" * SUM{{{vars_txt}}}: {body}"
    return head
