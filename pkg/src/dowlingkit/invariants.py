"""Closed-form invariants of D_n(G, S) and of orbit configuration spaces."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod

from .dowling import DowlingContext, DowlingElement, IntervalFactor, interval_factors
from .poset import RankedPoset, char_poly_bruteforce, mobius_table
from .polynomial import IntPolynomial
from .wreath import LabeledPartition, labeled_partitions


class UnsupportedCaseError(ValueError):
    pass


def char_poly_factored(n: int, size_G: int, size_S: int) -> IntPolynomial:
    """prod_{i<n} (t - |S| - |G| i) for S nonempty, prod_{0<i<n} (t - |G| i) for S empty."""
    if n < 1:
        raise ValueError("n must be positive")
    if size_S > 0:
        return IntPolynomial.linear_product(size_S + size_G * i for i in range(n))
    return IntPolynomial.linear_product(size_G * i for i in range(1, n))


def partition_lattice_char_poly(m: int) -> IntPolynomial:
    return IntPolynomial.linear_product(range(1, m))


def dowling_lattice_char_poly(m: int, size_G: int) -> IntPolynomial:
    return char_poly_factored(m, size_G, 1) if m else IntPolynomial([1])


def dd_char_poly(m: int, size_G: int) -> IntPolynomial:
    """DD_m(G): prod_{i<m-1} (t - 1 - |G| i) times (t - 1 - |G|(m-1) + m)."""
    if m < 1:
        return IntPolynomial([1])
    p = IntPolynomial.linear_product(1 + size_G * i for i in range(m - 1))
    return p * IntPolynomial([-(1 + size_G * (m - 1) - m), 1])


def interval_factor_char_poly(factor: IntervalFactor) -> IntPolynomial:
    if factor.kind == "Partition":
        return partition_lattice_char_poly(factor.size)
    if factor.kind == "Dowling":
        return dowling_lattice_char_poly(factor.size, factor.group_order)
    if factor.kind == "DowlingNoSingletonZero":
        return dd_char_poly(factor.size, factor.group_order)
    raise ValueError(f"unknown factor kind {factor.kind!r}")


def lower_interval_char_poly(ctx: DowlingContext, e: DowlingElement) -> IntPolynomial:
    """Product of the factor polynomials of [0, e]."""
    out = IntPolynomial([1])
    for f in interval_factors(ctx, e):
        out = out * interval_factor_char_poly(f)
    return out


def whitney_hilbert(n: int, size_G: int, size_S: int) -> IntPolynomial:
    """prod_{i<n} (1 + (|S| + |G| i) t)."""
    if size_S < 1:
        raise UnsupportedCaseError("no closed-form Whitney series for empty S; use whitney_ranks")
    p = IntPolynomial([1])
    for i in range(n):
        p = p * IntPolynomial([1, size_S + size_G * i])
    return p


def whitney_from_char_poly(chi: IntPolynomial, n: int) -> IntPolynomial:
    """(-t)^n chi(-1/t), coefficient by coefficient."""
    coeffs = [0] * (n + 1)
    for k, c in enumerate(chi.coeffs):
        # (-t)^n (-1/t)^k c = (-1)^(n+k) c t^(n-k)
        coeffs[n - k] += (-1) ** (n + k) * c
    return IntPolynomial(coeffs)


def dowling_homology_dim(n: int, size_G: int) -> int:
    """Dimension of the top homology of the Dowling lattice D_n(G)."""
    if n < 1:
        raise ValueError("n must be positive")
    return prod(1 + j * size_G for j in range(1, n))


@dataclass(frozen=True)
class RepSummand:
    label: LabeledPartition
    stabilizer_order: int
    inner_dim: int
    induced_dim: int


def rep_decomposition(ctx: DowlingContext, r: int) -> list[RepSummand]:
    """Dimensions of the induced summands of WH_r, one per labeled partition
    with n - r unlabeled parts."""
    if ctx.is_filtered:
        raise UnsupportedCaseError("representation decomposition is only available for D_n(G, S)")
    n, G = ctx.n, ctx.group.order
    stabs = [len(s) for s in ctx.orbits.stabilizers]
    wreath_order = factorial(n) * G ** n
    out = []
    for lam in labeled_partitions(n, len(stabs)):
        if lam.length != n - r:
            continue
        mult: dict[int, int] = {}
        for part in lam.unlabeled:
            mult[part] = mult.get(part, 0) + 1
        stab = 1
        inner = 1
        for i, a in mult.items():
            stab *= factorial(a) * (factorial(i) * G) ** a
            inner *= factorial(i - 1) ** a
        for m, h in zip(lam.labeled, stabs):
            stab *= factorial(m) * h ** m
            if m:
                inner *= dowling_homology_dim(m, h)
        out.append(RepSummand(lam, stab, inner, wreath_order // stab * inner))
    return out


def e1_hilbert(P: IntPolynomial, n: int, size_G: int, size_S: int) -> IntPolynomial:
    """prod_{i<n} (P(u) + (|S| + |G| i) t), a polynomial in t with coefficients in u."""
    if size_S < 1:
        raise UnsupportedCaseError("E1 Hilbert series needs nonempty S")
    Pu = IntPolynomial(P.coeffs, "u")
    out = IntPolynomial([IntPolynomial([1], "u")], "t")
    for i in range(n):
        out = out * IntPolynomial([Pu, IntPolynomial([size_S + size_G * i], "u")], "t")
    return out


def bivariate_eval(p: IntPolynomial, t, u):
    return sum((c(u) if isinstance(c, IntPolynomial) else c) * t ** k for k, c in enumerate(p.coeffs))


def motive_eval(x, n: int, size_G: int, size_S: int):
    """prod_{i<n} ([X] - |S| - |G| i).

    ``x`` may be an integer (point counts, Euler characteristics) or an
    IntPolynomial standing for the class [X].  With |S| = 0 this is the
    free-action product.
    """
    out = 1
    for i in range(n):
        out = out * (x - size_S - size_G * i)
    return out


def motive_polynomial(n: int, size_G: int, size_S: int) -> IntPolynomial:
    return motive_eval(IntPolynomial([0, 1], "X"), n, size_G, size_S) if n else IntPolynomial([1], "X")


def motive_from_poset(poset: RankedPoset, n: int, x, mu=None):
    """sum_b mu(0, b) x^(n - rk b) over an enumerated poset of layers."""
    return char_poly_bruteforce(poset, n, mu)(x)


def euler_binomial_form(xc: int, n: int, size_G: int, size_S: int) -> int:
    """n! |G|^n binom((xc - |S|)/|G|, n), binomial taken as a falling factorial."""
    if size_G < 1:
        raise ValueError("group order must be positive")
    top = Fraction(xc - size_S, size_G)
    falling = Fraction(1)
    for i in range(n):
        falling *= top - i
    binom = falling / factorial(n)
    val = factorial(n) * size_G ** n * binom
    assert val.denominator == 1
    return int(val)


def brute_char_poly(poset: RankedPoset, ambient_rank: int | None = None) -> IntPolynomial:
    return char_poly_bruteforce(poset, poset.max_rank if ambient_rank is None else ambient_rank, mobius_table(poset))
