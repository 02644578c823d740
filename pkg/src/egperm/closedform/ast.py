"""AST for the formula language."""
from __future__ import annotations

from dataclasses import dataclass, field


class FormulaError(ValueError):
    pass


@dataclass(frozen=True)
class LinForm:
    """Integer linear form  n_coeff*n + sum(coeff*var) + const."""
    n_coeff: int = 0
    var_coeffs: tuple[tuple[str, int], ...] = ()
    const: int = 0

    @staticmethod
    def of(n_coeff: int = 0, const: int = 0, **vars_: int) -> "LinForm":
        vc = tuple(sorted((v, c) for v, c in vars_.items() if c != 0))
        return LinForm(n_coeff, vc, const)

    @staticmethod
    def var(name: str, coeff: int = 1) -> "LinForm":
        return LinForm(0, ((name, coeff),) if coeff else (), 0)

    @staticmethod
    def n(coeff: int = 1) -> "LinForm":
        return LinForm(coeff, (), 0)

    @staticmethod
    def const_form(c: int) -> "LinForm":
        return LinForm(0, (), c)

    def __add__(self, other: "LinForm") -> "LinForm":
        coeffs = dict(self.var_coeffs)
        for v, c in other.var_coeffs:
            coeffs[v] = coeffs.get(v, 0) + c
        vc = tuple(sorted((v, c) for v, c in coeffs.items() if c != 0))
        return LinForm(self.n_coeff + other.n_coeff, vc, self.const + other.const)

    def __sub__(self, other: "LinForm") -> "LinForm":
        return self + other.scale(-1)

    def scale(self, k: int) -> "LinForm":
        vc = tuple((v, c * k) for v, c in self.var_coeffs if c * k != 0)
        return LinForm(self.n_coeff * k, vc, self.const * k)

    def is_zero(self) -> bool:
        return self.n_coeff == 0 and not self.var_coeffs and self.const == 0

    def variables(self) -> set[str]:
        return {v for v, _ in self.var_coeffs}

    def evaluate(self, n: int, env: dict[str, int]) -> int:
        return self.n_coeff * n + self.const + sum(c * env[v] for v, c in self.var_coeffs)

    def mod2(self) -> "LinForm":
        """Reduce all coefficients mod 2 (exponents of -1)."""
        vc = tuple(sorted((v, c % 2) for v, c in self.var_coeffs if c % 2))
        return LinForm(self.n_coeff % 2, vc, self.const % 2)

    def __str__(self) -> str:
        parts = []
        def term(coeff, sym):
            if coeff == 0:
                return
            sign = "-" if coeff < 0 else "+"
            mag = abs(coeff)
            body = sym if mag == 1 else f"{mag}*{sym}"
            parts.append((sign, body))
        term(self.n_coeff, "n")
        for v, c in self.var_coeffs:
            term(c, v)
        if self.const != 0 or not parts:
            sign = "-" if self.const < 0 else "+"
            parts.append((sign, str(abs(self.const))))
        out = ""
        for i, (sign, body) in enumerate(parts):
            if i == 0:
                out = ("-" if sign == "-" else "") + body
            else:
                out += sign + body
        return out


@dataclass(frozen=True)
class Binomial:
    top: LinForm
    bottom: LinForm
    exponent: int = 1

    def __str__(self) -> str:
        body = f"C({self.top},{self.bottom})"
        return body if self.exponent == 1 else f"{body}^{self.exponent}"


@dataclass(frozen=True)
class Sign:
    """(-1) raised to a linear form."""
    exponent_form: LinForm

    def __str__(self) -> str:
        return f"SGN({self.exponent_form})"


@dataclass(frozen=True)
class Fact:
    """A factorial of a linear form, to an integer (possibly negative) power."""
    argument: LinForm
    exponent: int = 1

    def __str__(self) -> str:
        body = f"FACT({self.argument})"
        return body if self.exponent == 1 else f"{body}^{self.exponent}"


@dataclass(frozen=True)
class ClosedForm:
    """prefactors * sum over variables (each 0..range_mult*n) of factors, mod v_mult*n+1."""
    v_mult: int
    prefactors: tuple[Fact | Sign, ...]
    variables: tuple[tuple[str, int], ...]  # (name, range multiplier)
    factors: tuple[Binomial | Sign | Fact, ...]

    def __post_init__(self):
        bound = {v for v, _ in self.variables}
        used: set[str] = set()
        for f in self.prefactors:
            arg = f.argument if isinstance(f, Fact) else f.exponent_form
            if arg.variables():
                raise FormulaError("prefactors must not reference bound variables")
        for f in self.factors:
            if isinstance(f, Binomial):
                used |= f.top.variables() | f.bottom.variables()
            elif isinstance(f, Sign):
                used |= f.exponent_form.variables()
            else:
                used |= f.argument.variables()
        if used - bound:
            raise FormulaError(f"unbound variables {sorted(used - bound)}")
        if bound - used:
            raise FormulaError(f"unused bound variables {sorted(bound - used)}")
