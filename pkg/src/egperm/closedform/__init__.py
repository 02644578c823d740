"""Closed-form binomial-sum formulas for residue sequences.

A formula is a prefactor (factorials and a sign) times a nested sum of
binomial and sign factors over bound variables, evaluated mod p = v*n + 1.
"""
from .ast import LinForm, Binomial, Sign, Fact, ClosedForm, FormulaError
from .parse import parse_formula, print_formula
from .evaluate import eval_formula
from .families import family_formula, appendix_catalog, appendix_names
from .generate import generate_closed_form

__all__ = [
    "LinForm", "Binomial", "Sign", "Fact", "ClosedForm", "FormulaError",
    "parse_formula", "print_formula", "eval_formula",
    "family_formula", "appendix_catalog", "appendix_names",
    "generate_closed_form",
]
