"""Built-in family formulas and the bundled small-graph formula catalog."""
from __future__ import annotations

from .ast import Binomial, ClosedForm, Fact, FormulaError, LinForm, Sign
from .parse import parse_formula

N = LinForm.n
V = LinForm.var
C = LinForm.const_form


def tree_formula(vertices: int) -> ClosedForm:
    """Residue (-1)^(|V|-1) at every prime."""
    if vertices < 2:
        raise FormulaError("tree needs at least 2 vertices")
    return ClosedForm(1, (Sign(C(vertices - 1)),), (), ())


def wheel_formula(w: int) -> ClosedForm:
    """(2n)!^w * (-1)^(n*floor((w+(-1)^w)/2)) * sum_k C(n,k)^w (-1)^(kw)."""
    if w < 3:
        raise FormulaError("wheel needs w >= 3")
    c = (w + (-1) ** w) // 2
    return ClosedForm(
        2,
        (Fact(N(2), w), Sign(N(c))),
        (("x0", 1),),
        (Binomial(N(1), V("x0"), w), Sign(V("x0", w))),
    )


def zigzag_formula(m: int) -> ClosedForm:
    """Chain formula over k_1+...+k_{mm-1} = n with path-overlap binomials.

    m is the circulant size C^m_{1,2}; the decompleted zig-zag has mm = m-1
    vertices, mm-1 summation variables, and prefactor (2n)!^(mm-1).
    """
    if m < 5:
        raise FormulaError("zigzag needs m >= 5")
    mm = m - 1
    free = [f"x{i}" for i in range(mm - 2)]
    last = N(1)
    for v in free:
        last = last - V(v)
    factors: list = [Binomial(N(1), V(v)) for v in free]
    factors.append(Binomial(N(1), last))
    for i in range(1, mm - 2):  # overlap factors C(n-k_{i+1}, k_1+...+k_i)
        partial = LinForm()
        for j in range(i):
            partial = partial + V(free[j])
        factors.append(Binomial(N(1) - V(free[i]), partial))
    return ClosedForm(2, (Fact(N(2), mm - 1),), tuple((v, 1) for v in free), tuple(factors))


def k34_formula() -> ClosedForm:
    bot = N(2) - V("x0") - V("x1") - V("x2")
    return ClosedForm(
        2,
        (Fact(N(2), 6),),
        (("x0", 1), ("x1", 1), ("x2", 1)),
        (Binomial(N(1), V("x0"), 2), Binomial(N(1), V("x1"), 2),
         Binomial(N(1), V("x2"), 2), Binomial(N(1), bot, 2)),
    )


def p31sq_formula() -> ClosedForm:
    """Minus the termwise square of the K4 row."""
    return ClosedForm(
        2,
        (Sign(C(1)), Fact(N(2), 6)),
        (("x0", 1), ("x1", 1)),
        (Binomial(N(1), V("x0"), 3), Binomial(N(1), V("x1"), 3), Sign(V("x0") + V("x1"))),
    )


def didntwork_g_formula() -> ClosedForm:
    return ClosedForm(
        8,
        (Sign(C(1)),),
        (),
        (Binomial(N(5), N(1), 2), Binomial(N(5), N(2), 2)),
    )


def didntwork_g1_formula() -> ClosedForm:
    return ClosedForm(5, (Sign(C(1)),), (), (Binomial(N(3), N(1), 2),))


def r10_formula() -> ClosedForm:
    """The five-variable nested-sum form of the R10 permanent."""
    from ..bundle import load_formula_text
    return parse_formula(load_formula_text("r10"))


def family_formula(name: str) -> ClosedForm:
    """Closed form for a named family member.

    Names: tree(v), wheel(w), zigzag(m), k34, r10, p31sq, didntwork_G,
    didntwork_G1.
    """
    name = name.strip()
    fixed = {
        "k34": k34_formula,
        "r10": r10_formula,
        "p31sq": p31sq_formula,
        "didntwork_G": didntwork_g_formula,
        "didntwork_G1": didntwork_g1_formula,
    }
    if name in fixed:
        return fixed[name]()
    for prefix, fn in (("tree(", tree_formula), ("wheel(", wheel_formula), ("zigzag(", zigzag_formula)):
        if name.startswith(prefix) and name.endswith(")"):
            return fn(int(name[len(prefix):-1]))
    raise FormulaError(f"unknown family {name!r}")


def appendix_names() -> list[str]:
    """Census rows with bundled formulas, in table order."""
    sevens = [f"P_7_{j}" for j in range(1, 12)]
    return ["P_1_1", "P_3_1", "P_4_1", "P_5_1",
            "P_6_1", "P_6_2", "P_6_3", "P_6_4"] + sevens


def appendix_catalog(name: str) -> ClosedForm:
    """Parsed bundled formula for census row P_i_j (i <= 7)."""
    if name not in appendix_names():
        raise FormulaError(f"no bundled formula for {name!r}")
    from ..bundle import load_formula_text
    return parse_formula(load_formula_text(name.lower()))
