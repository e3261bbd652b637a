"""Generalized Barnes zeta values at nonpositive integers.

The series sum over n in N_0^P of
    prod_p (n_p + d_p)^{R_p} / (sum_p w_p (n_p + d_p))^s
with positive rational weights w reduces exactly to a finite family of
unit-weight instances through the scaled-lattice decomposition: with
w* = lcm(numerators)/gcd(denominators) and beta_p = w*/w_p (always a
positive integer), the weight vector scales out as (w*)^{-s} at the price of
splitting each lattice axis into beta_p residue classes.

Unit-weight values at s = -m come from a closed finite sum over ordinary
Hurwitz zeta values at nonpositive integers (all exact rationals); the
s-derivative at -m follows by differentiating the scaled reduction, which
adds a -ln(w*) multiple of the value plus the same sums with the leading
Hurwitz factor replaced by its s-derivative (canonical zph atoms).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from .exact import RationalLike, compositions, hurwitz_zeta_neg
from .kvalue import KValue, kv_ln_rational, kv_rational, kv_zph

__all__ = [
    "BarnesSpec",
    "BarnesReduction",
    "barnes_reduce",
    "barnes_one_value",
    "barnes_value",
    "barnes_derivative",
]


@dataclass(frozen=True)
class BarnesSpec:
    R: tuple[int, ...]
    d: tuple[Fraction, ...]
    w: tuple[Fraction, ...]

    def __init__(self, R: Sequence[int], d: Sequence[RationalLike],
                 w: Sequence[RationalLike]):
        object.__setattr__(self, "R", tuple(int(r) for r in R))
        object.__setattr__(self, "d", tuple(Fraction(x) for x in d))
        object.__setattr__(self, "w", tuple(Fraction(x) for x in w))
        if not (len(self.R) == len(self.d) == len(self.w)):
            raise ValueError("R, d, w must have equal length")
        if any(r < 0 for r in self.R):
            raise ValueError("R entries must be nonnegative")
        if any(x <= 0 for x in self.d):
            raise ValueError("d entries must be positive")
        if any(x <= 0 for x in self.w):
            raise ValueError("w entries must be positive")

    @property
    def P(self) -> int:
        return len(self.R)

    @property
    def wstar(self) -> Fraction:
        nums = [x.numerator for x in self.w]
        dens = [x.denominator for x in self.w]
        return Fraction(math.lcm(*nums), math.gcd(*dens))

    @property
    def betas(self) -> tuple[int, ...]:
        ws = self.wstar
        out = []
        for x in self.w:
            b = ws / x
            assert b.denominator == 1 and b > 0
            out.append(int(b))
        return tuple(out)


@dataclass(frozen=True)
class BarnesReduction:
    """Unit-weight terms plus the split-off global factor (base)^{-s} * power."""

    base: Fraction                                   # w*
    power_factor: Fraction                           # prod beta_p^{R_p}
    terms: tuple[tuple[tuple[Fraction, ...], Fraction], ...]  # (d-vector, weight)


def barnes_reduce(spec: BarnesSpec) -> BarnesReduction:
    betas = spec.betas
    power = Fraction(1)
    for b, r in zip(betas, spec.R):
        power *= Fraction(b) ** r
    terms = []
    for shifts in itertools.product(*(range(b) for b in betas)):
        dvec = tuple((spec.d[p] + shifts[p]) / betas[p] for p in range(spec.P))
        terms.append((dvec, Fraction(1)))
    return BarnesReduction(spec.wstar, power, tuple(terms))


def _subset_terms(R: Sequence[int], pset: tuple[int, ...], pc: tuple[int, ...]):
    """Index data of one proper-subset block: factorial weight and the
    (k, k') budget |k| + k' = sum of R over the complement + |complement| - 1."""
    budget = sum(R[p] for p in pc) + len(pc) - 1
    fact = 1
    for p in pc:
        fact *= factorial(R[p])
    return budget, Fraction(fact)


def _proper_subsets(P: int):
    for size in range(P):
        yield from itertools.combinations(range(P), size)


def barnes_one_value(R: Sequence[int], m: int, d: Sequence[RationalLike]) -> Fraction:
    """Unit-weight value at s = -m, exact."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    R = tuple(int(r) for r in R)
    d = tuple(Fraction(x) for x in d)
    P = len(R)
    dsum = sum(d, Fraction(0))
    total = Fraction(0)
    for pset in _proper_subsets(P):
        pc = tuple(p for p in range(P) if p not in pset)
        budget, fact = _subset_terms(R, pset, pc)
        for t in range(budget + 1):
            kprime = budget - t
            lead = hurwitz_zeta_neg(m + kprime, dsum) / factorial(kprime)
            for k in compositions(t, len(pset)):
                term = lead * Fraction((-1) ** t)
                for p, kp in zip(pset, k):
                    term *= hurwitz_zeta_neg(R[p] + kp, d[p]) / factorial(kp)
                total += fact * term
    return total


def barnes_value(R: Sequence[int], m: int, d: Sequence[RationalLike],
                 w: Sequence[RationalLike]) -> Fraction:
    """Value at s = -m for positive rational weights, exact."""
    spec = BarnesSpec(R, d, w)
    red = barnes_reduce(spec)
    acc = Fraction(0)
    for dvec, weight in red.terms:
        acc += weight * barnes_one_value(spec.R, m, dvec)
    return red.base ** m * red.power_factor * acc


def barnes_derivative(R: Sequence[int], m: int, d: Sequence[RationalLike],
                      w: Sequence[RationalLike]) -> KValue:
    """s-derivative at s = -m for positive rational weights, canonical atoms."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    spec = BarnesSpec(R, d, w)
    red = barnes_reduce(spec)
    betas = spec.betas
    P = spec.P

    value = barnes_value(R, m, d, w)
    out = kv_ln_rational(red.base).scale(-value)

    scale = red.base ** m * red.power_factor
    deriv_sum = KValue()
    for shifts in itertools.product(*(range(b) for b in betas)):
        dvec = tuple((spec.d[p] + shifts[p]) / betas[p] for p in range(P))
        dsum = sum(dvec, Fraction(0))
        for pset in _proper_subsets(P):
            pc = tuple(p for p in range(P) if p not in pset)
            budget, fact = _subset_terms(spec.R, pset, pc)
            for t in range(budget + 1):
                kprime = budget - t
                for k in compositions(t, len(pset)):
                    coeff = fact * Fraction((-1) ** t, factorial(kprime))
                    for p, kp in zip(pset, k):
                        coeff *= hurwitz_zeta_neg(spec.R[p] + kp, dvec[p]) \
                            / factorial(kp)
                    if coeff:
                        deriv_sum = deriv_sum + kv_zph(m + kprime, dsum).scale(coeff)
    return out + deriv_sum.scale(scale)


def barnes_value_kv(R: Sequence[int], m: int, d: Sequence[RationalLike],
                    w: Sequence[RationalLike]) -> KValue:
    """Value at s = -m wrapped as a KValue (convenience for scaling laws)."""
    return kv_rational(barnes_value(R, m, d, w))
