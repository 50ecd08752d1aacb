"""Exact univariate polynomials.

Coefficients are Python ints, or other ``IntPolynomial`` values when a
bivariate polynomial is needed (a polynomial in t whose coefficients are
polynomials in u).
"""

from __future__ import annotations

from typing import Iterable


def _is_zero(c) -> bool:
    return c == 0


class IntPolynomial:
    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable = (), var: str = "t"):
        cs = list(coeffs)
        while cs and _is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var

    @classmethod
    def constant(cls, c, var: str = "t") -> "IntPolynomial":
        return cls([c], var)

    @classmethod
    def monomial(cls, degree: int, c=1, var: str = "t") -> "IntPolynomial":
        return cls([0] * degree + [c], var)

    @classmethod
    def linear_product(cls, roots, var: str = "t") -> "IntPolynomial":
        """prod (t - r) over ``roots``."""
        p = cls([1], var)
        for r in roots:
            p = p * cls([-r, 1], var)
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __iter__(self):
        return iter(self.coeffs)

    def _coerce(self, other) -> "IntPolynomial":
        if isinstance(other, IntPolynomial) and other.var == self.var:
            return other
        return IntPolynomial([other], self.var)

    def __add__(self, other):
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return IntPolynomial([self[k] + o[k] for k in range(n)], self.var)

    __radd__ = __add__

    def __neg__(self):
        return IntPolynomial([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        if not self.coeffs or not o.coeffs:
            return IntPolynomial((), self.var)
        out = [0] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return IntPolynomial(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        r = IntPolynomial([1], self.var)
        for _ in range(k):
            r = r * self
        return r

    def __call__(self, x):
        """Horner evaluation; ``x`` may be an int, Fraction or another polynomial."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, IntPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == ((other,) if other else ())
        return NotImplemented

    def __hash__(self):
        return hash((self.coeffs, self.var))

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)!r}, var={self.var!r})"

    def __str__(self):
        return format_poly(self)

    def to_json(self):
        return [c.to_json() if isinstance(c, IntPolynomial) else c for c in self.coeffs]


def _mono(var: str, k: int) -> str:
    if k == 0:
        return ""
    return var if k == 1 else f"{var}^{k}"


def format_poly(p: IntPolynomial) -> str:
    """Descending-degree human form, e.g. ``t^2 - 18t + 72``."""
    if not p.coeffs:
        return "0"
    parts: list[str] = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if _is_zero(c):
            continue
        m = _mono(p.var, k)
        if isinstance(c, IntPolynomial):
            body = str(c)
            if len(c.coeffs) - sum(1 for x in c.coeffs if _is_zero(x)) > 1:
                body = f"({body})"
            term = body if not m else (m if body == "1" else f"{body}*{m}")
            sign = "+"
        else:
            sign = "-" if c < 0 else "+"
            a = abs(c)
            term = str(a) if not m else (m if a == 1 else f"{a}{m}")
        if not parts:
            parts.append(term if sign == "+" else f"-{term}")
        else:
            parts.append(f"{sign} {term}")
    return " ".join(parts)
