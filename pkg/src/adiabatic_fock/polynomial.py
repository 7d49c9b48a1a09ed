"""Integer polynomials for Diophantine problem Hamiltonians.

Grammar (whitespace ignored)::

    poly   := [sign] term (sign term)*
    sign   := '+' | '-'
    term   := factor ('*' factor)*
    factor := INT | VAR [('^' | '**') INT]
    VAR    := 'x' DIGITS | 'x' | 'y' | 'z'

Variables are ``x1 .. xK``; bare ``x``, ``y``, ``z`` are shorthands for ``x1``,
``x2``, ``x3``. Coefficients are integers; there are no parentheses, so write
products in expanded form, e.g. ``"3*x1^2*x2 - 7"`` or ``"x^2 + 1"``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .errors import PolynomialSyntaxError, VariableCountMismatch

_TOKEN = re.compile(r"\s*(?:(\d+)|(x\d*|y|z)|(\*\*|\^)|([+\-*]))")
_ALIASES = {"x": 1, "y": 2, "z": 3}


@dataclass(frozen=True)
class DiophantineSpec:
    """Sum of ``coefficient * prod(x_i ** exponent_i)`` terms over ``n_vars`` variables."""

    terms: tuple[tuple[int, tuple[int, ...]], ...]
    n_vars: int

    def __post_init__(self):
        if not self.terms:
            raise PolynomialSyntaxError("polynomial needs at least one term")
        for coef, exps in self.terms:
            if len(exps) != self.n_vars or any(e < 0 for e in exps):
                raise PolynomialSyntaxError(f"bad exponent vector {exps} for {self.n_vars} variables")

    @classmethod
    def parse(cls, text: str, n_vars: int | None = None) -> "DiophantineSpec":
        raw = _parse_terms(text)
        used = max((v for _, powers in raw for v in powers), default=1)
        if n_vars is None:
            n_vars = used
        elif used > n_vars:
            raise VariableCountMismatch(f"{text!r} uses x{used} but only {n_vars} variables declared")
        terms = []
        for coef, powers in raw:
            exps = [0] * n_vars
            for var, p in powers.items():
                exps[var - 1] += p
            terms.append((coef, tuple(exps)))
        return cls(tuple(terms), n_vars)

    def __call__(self, values: Sequence[int]) -> int:
        if len(values) != self.n_vars:
            raise VariableCountMismatch(f"expected {self.n_vars} values, got {len(values)}")
        total = 0
        for coef, exps in self.terms:
            term = coef
            for v, e in zip(values, exps):
                term *= int(v) ** e
            total += term
        return total

    def __str__(self):
        parts = []
        for coef, exps in self.terms:
            factors = [f"x{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(exps) if e]
            body = "*".join(([str(abs(coef))] if abs(coef) != 1 or not factors else []) + factors)
            parts.append(("- " if coef < 0 else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def _tokens(text: str):
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolynomialSyntaxError(f"unexpected character at position {pos} in {text!r}")
        pos = m.end()
        num, var, pow_, op = m.groups()
        if num is not None:
            yield "int", int(num), m.start()
        elif var is not None:
            idx = _ALIASES[var] if var in _ALIASES else int(var[1:])
            if idx < 1:
                raise PolynomialSyntaxError(f"variable index must start at 1: {var!r}")
            yield "var", idx, m.start()
        elif pow_ is not None:
            yield "pow", None, m.start()
        else:
            yield op, None, m.start()


def _parse_terms(text: str) -> list[tuple[int, dict[int, int]]]:
    toks = list(_tokens(text))
    if not toks:
        raise PolynomialSyntaxError("empty polynomial")
    terms = []
    i = 0
    sign = 1
    if toks[0][0] in "+-":
        sign = -1 if toks[0][0] == "-" else 1
        i = 1
    while True:
        coef, powers = sign, {}
        expect_factor = True
        while expect_factor:
            if i >= len(toks):
                raise PolynomialSyntaxError(f"dangling operator at end of {text!r}")
            kind, val, at = toks[i]
            if kind == "int":
                coef *= val
                i += 1
            elif kind == "var":
                i += 1
                p = 1
                if i < len(toks) and toks[i][0] == "pow":
                    if i + 1 >= len(toks) or toks[i + 1][0] != "int":
                        raise PolynomialSyntaxError(f"exponent must be a non-negative integer at position {toks[i][2]}")
                    p = toks[i + 1][1]
                    i += 2
                powers[val] = powers.get(val, 0) + p
            else:
                raise PolynomialSyntaxError(f"expected a number or variable at position {at} in {text!r}")
            expect_factor = i < len(toks) and toks[i][0] == "*"
            if expect_factor:
                i += 1
        terms.append((coef, powers))
        if i >= len(toks):
            return terms
        kind, _, at = toks[i]
        if kind not in "+-":
            raise PolynomialSyntaxError(f"expected '+' or '-' at position {at} in {text!r}")
        sign = -1 if kind == "-" else 1
        i += 1
