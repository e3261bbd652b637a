"""Exact rational building blocks.

Everything in this module is computed over ``fractions.Fraction`` (arbitrary
precision, always in lowest terms, positive denominator) so results are exact:
Bernoulli numbers and polynomials, Hurwitz zeta values at nonpositive
integers, the generalized binomial, multinomial coefficients, harmonic
numbers, and a composition enumerator used to walk the finite constraint
sets of the closed formulas.

Bernoulli convention: B_1(x) = x - 1/2 (so B_1 = -1/2), which is the
convention forced by zeta(0, d) = 1/2 - d.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Iterator, Sequence, Union

Rational = Fraction
RationalLike = Union[Fraction, int]

__all__ = [
    "Rational",
    "bernoulli_number",
    "bernoulli_poly",
    "hurwitz_zeta_neg",
    "zeta_neg",
    "binom_shifted",
    "multinomial",
    "harmonic",
    "compositions",
    "rational_from_string",
    "rational_to_string",
]

_BERNOULLI: list[Fraction] = [Fraction(1)]


def bernoulli_number(n: int) -> Fraction:
    """B_n with B_1 = -1/2, via the recurrence sum_{k<=n} C(n+1,k) B_k = 0."""
    if n < 0:
        raise ValueError("Bernoulli index must be nonnegative")
    while len(_BERNOULLI) <= n:
        m = len(_BERNOULLI)
        if m > 1 and m % 2 == 1:
            _BERNOULLI.append(Fraction(0))
            continue
        acc = Fraction(0)
        for k in range(m):
            if _BERNOULLI[k]:
                acc += comb(m + 1, k) * _BERNOULLI[k]
        _BERNOULLI.append(-acc / (m + 1))
    return _BERNOULLI[n]


def bernoulli_poly(n: int, x: RationalLike) -> Fraction:
    """B_n(x) = sum_k C(n,k) B_k x^{n-k}, exact."""
    if n < 0:
        raise ValueError("Bernoulli degree must be nonnegative")
    x = Fraction(x)
    acc = Fraction(0)
    xpow = Fraction(1)
    # Horner would need the coefficients reversed; powers are cheap here.
    for k in range(n, -1, -1):
        b = bernoulli_number(k)
        if b:
            acc += comb(n, k) * b * xpow
        xpow *= x
    return acc


def hurwitz_zeta_neg(n: int, d: RationalLike) -> Fraction:
    """zeta(-n, d) = -B_{n+1}(d) / (n+1) for integer n >= 0 and rational d > 0."""
    if n < 0:
        raise ValueError("hurwitz_zeta_neg needs n >= 0")
    d = Fraction(d)
    if d <= 0:
        raise ValueError("hurwitz_zeta_neg needs d > 0")
    return -bernoulli_poly(n + 1, d) / (n + 1)


def zeta_neg(n: int) -> Fraction:
    """zeta(-n) = zeta(-n, 1), exact."""
    return hurwitz_zeta_neg(n, Fraction(1))


def binom_shifted(s: RationalLike, i: int) -> Fraction:
    """Generalized binomial s(s-1)...(s-i+1)/i! for i >= 0, and 0 for i < 0."""
    if i < 0:
        return Fraction(0)
    s = Fraction(s)
    num = Fraction(1)
    for t in range(i):
        num *= s - t
    return num / factorial(i)


def multinomial(n: int, k: Sequence[int]) -> Fraction:
    """n! / (k_1! ... k_P!) for a multi-index with |k| = n.

    A multi-index whose entries do not sum to n is rejected: every use site
    enumerates k under the constraint |k| = n, so a mismatch is a caller bug.
    """
    if any(kp < 0 for kp in k):
        raise ValueError("multinomial entries must be nonnegative")
    if sum(k) != n:
        raise ValueError(f"multinomial needs |k| = n, got |k|={sum(k)}, n={n}")
    acc = factorial(n)
    for kp in k:
        acc //= factorial(kp)
    return Fraction(acc)


def harmonic(n: int) -> Fraction:
    """h_n = 1 + 1/2 + ... + 1/n, with h_0 = 0."""
    if n < 0:
        raise ValueError("harmonic index must be nonnegative")
    return sum((Fraction(1, k) for k in range(1, n + 1)), Fraction(0))


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Yield every tuple of `parts` nonnegative integers summing to `total`.

    Lexicographic order, each composition exactly once.  With parts = 0 the
    empty tuple is produced iff total = 0.
    """
    if parts < 0:
        raise ValueError("parts must be nonnegative")
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        if total >= 0:
            yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def rational_from_string(text: str) -> Fraction:
    """Parse "p/q" or "p" (ASCII or U+2212 minus) into a Fraction."""
    cleaned = text.strip().replace("−", "-")
    return Fraction(cleaned)


def rational_to_string(r: RationalLike) -> str:
    """Render a rational as "p/q", or "p" when the denominator is 1."""
    r = Fraction(r)
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"
