"""Exact linear combinations over a canonical basis of constants.

A :class:`KValue` is a finite map from basis atoms to rational coefficients.
The atoms are 1, the Euler-Mascheroni constant, logarithms of primes, ln(pi),
and the Hurwitz zeta s-derivatives zp(n) = zeta'(-n) and
zph(n, d) = zeta'(-n, d) with d restricted to (0,1) \\ {1/2}: arguments
outside that range reduce exactly through the shift identity
zeta'(-n, d+1) = zeta'(-n, d) + d^n ln d and the half-argument identity
zeta'(-n, 1/2) = ln(2) 2^{-n} zeta(-n) + (2^{-n} - 1) zeta'(-n), so equality
of reduced KValues is meaningful exact equality.

Logarithms of positive rationals always decompose into prime logarithms;
ln(pi) stays irreducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional

import mpmath as mp

from .exact import (Rational, RationalLike, rational_from_string,
                    rational_to_string, zeta_neg)
from .numeric import (DomainError, Precision, euler_gamma, zeta_em_deriv)

__all__ = [
    "Atom",
    "KValue",
    "kv_rational",
    "kv_ln_rational",
    "kv_zph",
    "kv_eval",
    "kv_add",
    "kv_scale",
    "kv_equals",
]

_KIND_RANK = {"one": 0, "gamma": 1, "lnp": 2, "lnpi": 3, "zp": 4, "zph": 5}


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Atom:
    """One basis constant; construct through the classmethods."""

    kind: str
    n: int = 0
    d: Fraction = field(default=Fraction(0))

    @classmethod
    def one(cls) -> "Atom":
        return cls("one")

    @classmethod
    def gamma(cls) -> "Atom":
        return cls("gamma")

    @classmethod
    def ln_prime(cls, p: int) -> "Atom":
        if not _is_prime(p):
            raise ValueError(f"ln_prime argument {p} is not prime")
        return cls("lnp", n=p)

    @classmethod
    def ln_pi(cls) -> "Atom":
        return cls("lnpi")

    @classmethod
    def zp(cls, n: int) -> "Atom":
        if n < 0:
            raise ValueError("zp index must be nonnegative")
        return cls("zp", n=n)

    @classmethod
    def zph(cls, n: int, d: RationalLike) -> "Atom":
        d = Fraction(d)
        if n < 0:
            raise ValueError("zph index must be nonnegative")
        if not (0 < d < 1) or d == Fraction(1, 2):
            raise ValueError("zph argument must lie in (0,1) and differ from 1/2")
        return cls("zph", n=n, d=d)

    def sort_key(self) -> tuple:
        return (_KIND_RANK[self.kind], self.n, self.d)

    def encode(self) -> str:
        if self.kind == "one":
            return "1"
        if self.kind == "gamma":
            return "gamma"
        if self.kind == "lnp":
            return f"ln:{self.n}"
        if self.kind == "lnpi":
            return "ln:pi"
        if self.kind == "zp":
            return f"zp:{self.n}"
        return f"zph:{self.n}:{rational_to_string(self.d)}"

    @classmethod
    def decode(cls, text: str) -> "Atom":
        if text == "1":
            return cls.one()
        if text == "gamma":
            return cls.gamma()
        if text == "ln:pi":
            return cls.ln_pi()
        if text.startswith("ln:"):
            return cls.ln_prime(int(text[3:]))
        if text.startswith("zp:"):
            return cls.zp(int(text[3:]))
        if text.startswith("zph:"):
            _, n, d = text.split(":", 2)
            return cls.zph(int(n), rational_from_string(d))
        raise ValueError(f"unknown atom encoding {text!r}")


class KValue:
    """Immutable rational linear combination of atoms."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Optional[Mapping[Atom, RationalLike]] = None):
        clean: dict[Atom, Fraction] = {}
        if coeffs:
            for atom, c in coeffs.items():
                c = Fraction(c)
                if c:
                    clean[atom] = clean.get(atom, Fraction(0)) + c
                    if not clean[atom]:
                        del clean[atom]
        object.__setattr__(self, "_coeffs", clean)

    @property
    def coeffs(self) -> dict[Atom, Fraction]:
        return dict(self._coeffs)

    def coeff(self, atom: Atom) -> Fraction:
        return self._coeffs.get(atom, Fraction(0))

    @property
    def rational_part(self) -> Fraction:
        return self.coeff(Atom.one())

    def atoms(self) -> list[Atom]:
        return sorted(self._coeffs, key=Atom.sort_key)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __add__(self, other: "KValue") -> "KValue":
        merged = dict(self._coeffs)
        for atom, c in other._coeffs.items():
            merged[atom] = merged.get(atom, Fraction(0)) + c
        return KValue(merged)

    def __sub__(self, other: "KValue") -> "KValue":
        return self + (-other)

    def __neg__(self) -> "KValue":
        return KValue({a: -c for a, c in self._coeffs.items()})

    def scale(self, r: RationalLike) -> "KValue":
        r = Fraction(r)
        if not r:
            return KValue()
        return KValue({a: c * r for a, c in self._coeffs.items()})

    __mul__ = scale
    __rmul__ = scale

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KValue):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self._coeffs.items()))

    def __repr__(self) -> str:
        if not self._coeffs:
            return "KValue(0)"
        bits = [f"{rational_to_string(self._coeffs[a])}*{a.encode()}"
                for a in self.atoms()]
        return "KValue(" + " + ".join(bits) + ")"

    def to_json_list(self) -> list[dict[str, str]]:
        return [{"atom": a.encode(), "coeff": rational_to_string(self._coeffs[a])}
                for a in self.atoms()]

    @classmethod
    def from_json_list(cls, items: Iterable[Mapping[str, str]]) -> "KValue":
        return cls({Atom.decode(it["atom"]): rational_from_string(it["coeff"])
                    for it in items})


def kv_rational(r: RationalLike) -> KValue:
    return KValue({Atom.one(): Fraction(r)})


def kv_gamma(c: RationalLike = 1) -> KValue:
    return KValue({Atom.gamma(): Fraction(c)})


def _factorize(n: int) -> dict[int, int]:
    # Trial division; the arguments here are ratios of spec coefficients and
    # shift corrections, far below anything that needs heavier machinery.
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 7
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def kv_ln_rational(r: RationalLike) -> KValue:
    """ln r decomposed over prime logarithms, for rational r > 0."""
    r = Fraction(r)
    if r <= 0:
        raise DomainError("kv_ln_rational requires a positive rational")
    coeffs: dict[Atom, Fraction] = {}
    for p, e in _factorize(r.numerator).items():
        coeffs[Atom.ln_prime(p)] = Fraction(e)
    for p, e in _factorize(r.denominator).items():
        atom = Atom.ln_prime(p)
        coeffs[atom] = coeffs.get(atom, Fraction(0)) - e
    return KValue(coeffs)


def kv_zph(n: int, d: RationalLike) -> KValue:
    """zeta'(-n, d) in canonical form, for rational d > 0.

    Arguments above 1 walk down through the shift identity, emitting exact
    prime-log corrections; d = 1 maps to zp(n) and d = 1/2 folds through the
    half-argument identity using the exact rational zeta(-n).
    """
    if n < 0:
        raise ValueError("kv_zph index must be nonnegative")
    d = Fraction(d)
    if d <= 0:
        raise DomainError("kv_zph requires d > 0")
    out = KValue()
    while d > 1:
        d -= 1
        out = out + kv_ln_rational(d).scale(d ** n)
    if d == 1:
        return out + KValue({Atom.zp(n): Fraction(1)})
    if d == Fraction(1, 2):
        half_pow = Fraction(1, 2 ** n)
        out = out + kv_ln_rational(2).scale(half_pow * zeta_neg(n))
        return out + KValue({Atom.zp(n): half_pow - 1})
    return out + KValue({Atom.zph(n, d): Fraction(1)})


_EVAL_CACHE: dict[tuple[Atom, int], mp.mpf] = {}


def _atom_value(atom: Atom, prec: Precision) -> mp.mpf:
    key = (atom, prec.digits)
    cached = _EVAL_CACHE.get(key)
    if cached is not None:
        return cached
    with mp.workprec(prec.working_bits):
        if atom.kind == "one":
            val = mp.mpf(1)
        elif atom.kind == "gamma":
            val = euler_gamma(prec)
        elif atom.kind == "lnp":
            val = mp.log(atom.n)
        elif atom.kind == "lnpi":
            val = mp.log(mp.pi)
        elif atom.kind == "zp":
            val = zeta_em_deriv(-atom.n, 1, prec)
        elif atom.kind == "zph":
            val = zeta_em_deriv(-atom.n, atom.d, prec)
        else:  # pragma: no cover - enum is closed
            raise ValueError(f"unknown atom kind {atom.kind}")
    _EVAL_CACHE[key] = val
    return val


def kv_eval(v: KValue, prec: Precision = Precision()) -> mp.mpf:
    """Numeric value of the combination at the target precision."""
    with mp.workprec(prec.working_bits):
        total = mp.mpf(0)
        for atom, c in v.coeffs.items():
            total += (mp.mpf(c.numerator) / c.denominator) * _atom_value(atom, prec)
        return +total


def kv_add(a: KValue, b: KValue) -> KValue:
    return a + b


def kv_scale(r: RationalLike, v: KValue) -> KValue:
    return v.scale(r)


def kv_equals(a: KValue, b: KValue) -> bool:
    return a == b
