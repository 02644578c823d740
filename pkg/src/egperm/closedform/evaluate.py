"""Modular evaluation of closed forms.

Factorials come from a table of size p (capped at 10**6); binomials use the
convention C(a,b) = 0 outside 0 <= b <= a.  The nested sum runs as compiled
loops with zero-skipping, so out-of-range binomials prune whole subtrees.
"""
from __future__ import annotations

from .ast import Binomial, ClosedForm, Fact, FormulaError, LinForm, Sign
from ..graphcore import is_prime

MAX_PRIME = 10 ** 6


def eval_formula(f: ClosedForm, p: int) -> int:
    """Residue of the formula at an eligible prime p = v_mult*n + 1."""
    if not is_prime(p):
        raise FormulaError(f"{p} is not prime")
    if p > MAX_PRIME:
        raise FormulaError(f"prime {p} exceeds the factorial-table cap {MAX_PRIME}")
    if (p - 1) % f.v_mult != 0 or p <= f.v_mult:
        raise FormulaError(f"prime {p} is not of the form {f.v_mult}n+1")
    n = (p - 1) // f.v_mult

    fact = [1] * p
    for i in range(1, p):
        fact[i] = fact[i - 1] * i % p
    inv_fact = [1] * p
    inv_fact[p - 1] = pow(fact[p - 1], p - 2, p)
    for i in range(p - 2, -1, -1):
        inv_fact[i] = inv_fact[i + 1] * (i + 1) % p

    def binom(a: int, b: int) -> int:
        if b < 0 or b > a or a < 0:
            return 0
        if a < p:
            return fact[a] * inv_fact[b] % p * inv_fact[a - b] % p
        # Lucas for large tops (defensive; bundled formulas stay below p)
        out = 1
        while a or b:
            ad, bd = a % p, b % p
            if bd > ad:
                return 0
            out = out * fact[ad] % p * inv_fact[bd] % p * inv_fact[ad - bd] % p
            a //= p
            b //= p
        return out

    def fact_power(x: int, e: int) -> int:
        if x < 0:
            return 0  # gamma pole: the term vanishes (also for 1/(negative)!)
        if e >= 0:
            if x >= p:
                return 0
            return pow(fact[x], e, p)
        if x >= p:
            raise FormulaError("factorial inverse at argument >= p is undefined mod p")
        return pow(inv_fact[x], -e, p)

    prefactor = 1
    for t in f.prefactors:
        if isinstance(t, Fact):
            prefactor = prefactor * fact_power(t.argument.evaluate(n, {}), t.exponent) % p
        else:
            prefactor = prefactor * (-1) ** (t.exponent_form.evaluate(n, {}) % 2) % p
    if not f.variables and not f.factors:
        return prefactor % p
    if prefactor == 0:
        return 0

    names = [name for name, _ in f.variables]
    index = {name: i for i, name in enumerate(names)}
    ranges = [mult * n for _, mult in f.variables]

    def compile_linform(lf: LinForm):
        base = lf.n_coeff * n + lf.const
        terms = tuple((index[v], c) for v, c in lf.var_coeffs)
        return base, terms

    def depth_of(terms) -> int:
        return max((i for i, _ in terms), default=-1)

    # factors evaluated at the innermost level where all their variables are bound
    by_depth: list[list] = [[] for _ in range(len(names) + 1)]
    for t in f.factors:
        if isinstance(t, Binomial):
            top = compile_linform(t.top)
            bot = compile_linform(t.bottom)
            d = max(depth_of(top[1]), depth_of(bot[1]))
            by_depth[d + 1].append(("C", top, bot, t.exponent))
        elif isinstance(t, Sign):
            arg = compile_linform(t.exponent_form)
            by_depth[depth_of(arg[1]) + 1].append(("S", arg))
        else:
            arg = compile_linform(t.argument)
            by_depth[depth_of(arg[1]) + 1].append(("F", arg, t.exponent))

    env = [0] * len(names)

    def eval_compiled(cl) -> int:
        base, terms = cl
        return base + sum(c * env[i] for i, c in terms)

    def level_product(d: int) -> int:
        prod = 1
        for item in by_depth[d]:
            if item[0] == "C":
                b = binom(eval_compiled(item[1]), eval_compiled(item[2]))
                prod = prod * (b if item[3] == 1 else pow(b, item[3], p)) % p
            elif item[0] == "S":
                if eval_compiled(item[1]) % 2:
                    prod = (p - prod) % p
            else:
                prod = prod * fact_power(eval_compiled(item[1]), item[2]) % p
            if prod == 0:
                return 0
        return prod

    def loop(d: int, acc: int) -> int:
        if d == len(names):
            return acc
        total = 0
        for v in range(ranges[d] + 1):
            env[d] = v
            here = acc * level_product(d + 1) % p
            if here:
                total += loop(d + 1, here)
        return total % p

    top_acc = level_product(0)
    return prefactor * loop(0, top_acc) % p
