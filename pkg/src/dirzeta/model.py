"""Problem configuration: the multizeta data, directions, targets, presets.

A :class:`HurwitzSpec` holds the exponent data of the series

    sum over n in N_0^P of
        prod_p (n_p + d_p)^{-s_p} * prod_q (l_q(n) + d'_q)^{-s'_q},

with l_q(x) = sum_p c[q][p] x_p and d'_q = l_q(d).  The exact engine
restricts every c[q][p] and d_p to strictly positive rationals.  The index
set is N_0^P (offsets live in d), which is what the closed formulas and the
Lie-algebra presets require.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence, Union

from .exact import RationalLike, rational_from_string, rational_to_string

__all__ = [
    "SpecError",
    "HurwitzSpec",
    "Direction",
    "TargetPoint",
    "WittenPreset",
    "validate",
    "preset",
    "PRESET_NAMES",
    "load_spec",
    "save_spec",
    "parse_problem",
    "problem_to_dict",
]


class SpecError(ValueError):
    """Invalid configuration, with the offending entry in the message."""


def _frac_matrix(rows: Sequence[Sequence[RationalLike]]) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def _frac_vector(xs: Sequence[RationalLike]) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in xs)


@dataclass(frozen=True)
class HurwitzSpec:
    c: tuple[tuple[Fraction, ...], ...]   # Q rows, P columns
    d: tuple[Fraction, ...]               # length P

    def __init__(self, c: Sequence[Sequence[RationalLike]],
                 d: Sequence[RationalLike]):
        object.__setattr__(self, "c", _frac_matrix(c))
        object.__setattr__(self, "d", _frac_vector(d))

    @property
    def Q(self) -> int:
        return len(self.c)

    @property
    def P(self) -> int:
        return len(self.d)

    @property
    def dprime(self) -> tuple[Fraction, ...]:
        # Always recomputed from c and d; never stored independently.
        return tuple(self.linear_form(q, self.d) for q in range(self.Q))

    def linear_form(self, q: int, x: Sequence[Fraction]) -> Fraction:
        return sum((self.c[q][p] * x[p] for p in range(self.P)), Fraction(0))

    def column(self, p: int) -> tuple[Fraction, ...]:
        return tuple(self.c[q][p] for q in range(self.Q))

    def row(self, q: int) -> tuple[Fraction, ...]:
        return self.c[q]

    @property
    def max_coeff(self) -> Fraction:
        return max(max(row) for row in self.c)


@dataclass(frozen=True)
class Direction:
    mu: tuple[Fraction, ...]        # length P, entries >= 0
    muprime: tuple[Fraction, ...]   # length Q, entries > 0

    def __init__(self, mu: Sequence[RationalLike], muprime: Sequence[RationalLike]):
        object.__setattr__(self, "mu", _frac_vector(mu))
        object.__setattr__(self, "muprime", _frac_vector(muprime))

    @classmethod
    def ones(cls, P: int, Q: int) -> "Direction":
        return cls([1] * P, [1] * Q)


@dataclass(frozen=True)
class TargetPoint:
    N: tuple[int, ...]       # length P
    Nprime: tuple[int, ...]  # length Q

    def __init__(self, N: Sequence[int], Nprime: Sequence[int]):
        object.__setattr__(self, "N", tuple(int(x) for x in N))
        object.__setattr__(self, "Nprime", tuple(int(x) for x in Nprime))

    @classmethod
    def origin(cls, P: int, Q: int) -> "TargetPoint":
        return cls([0] * P, [0] * Q)


@dataclass(frozen=True)
class WittenPreset:
    name: str
    spec: HurwitzSpec
    weyl_denominator: int

    @property
    def direction(self) -> Direction:
        return Direction.ones(self.spec.P, self.spec.Q)

    @property
    def origin(self) -> TargetPoint:
        return TargetPoint.origin(self.spec.P, self.spec.Q)


def validate(spec: HurwitzSpec,
             direction: Union[Direction, None] = None,
             target: Union[TargetPoint, None] = None) -> None:
    """Check positivity and dimension invariants; raise SpecError on the
    first violation, naming the entry."""
    if spec.Q < 1:
        raise SpecError("spec needs at least one linear form (Q >= 1)")
    if spec.P < 1:
        raise SpecError("spec needs at least one power factor (P >= 1)")
    for q, row in enumerate(spec.c):
        if len(row) != spec.P:
            raise SpecError(f"c row {q} has length {len(row)}, expected P={spec.P}")
        for p, entry in enumerate(row):
            if entry <= 0:
                raise SpecError(f"c[{q}][{p}] not > 0 (got {entry})")
    for p, entry in enumerate(spec.d):
        if entry <= 0:
            raise SpecError(f"d[{p}] not > 0 (got {entry})")
    if direction is not None:
        if len(direction.mu) != spec.P:
            raise SpecError(f"mu has length {len(direction.mu)}, expected P={spec.P}")
        if len(direction.muprime) != spec.Q:
            raise SpecError(
                f"muprime has length {len(direction.muprime)}, expected Q={spec.Q}")
        for p, entry in enumerate(direction.mu):
            if entry < 0:
                raise SpecError(f"mu[{p}] not >= 0 (got {entry})")
        for q, entry in enumerate(direction.muprime):
            if entry <= 0:
                raise SpecError(f"muprime[{q}] not > 0 (got {entry})")
    if target is not None:
        if len(target.N) != spec.P:
            raise SpecError(f"N has length {len(target.N)}, expected P={spec.P}")
        if len(target.Nprime) != spec.Q:
            raise SpecError(
                f"Nprime has length {len(target.Nprime)}, expected Q={spec.Q}")
        for p, entry in enumerate(target.N):
            if entry < 0:
                raise SpecError(f"N[{p}] not >= 0 (got {entry})")
        for q, entry in enumerate(target.Nprime):
            if entry < 0:
                raise SpecError(f"Nprime[{q}] not >= 0 (got {entry})")


PRESET_NAMES = ("so5", "g2")


def preset(name: str) -> WittenPreset:
    """Hard-coded Weyl-formula expansions for so(5) and g2."""
    if name == "so5":
        return WittenPreset("so5", HurwitzSpec([[1, 1], [1, 2]], [1, 1]), 6)
    if name == "g2":
        return WittenPreset(
            "g2", HurwitzSpec([[1, 1], [1, 2], [1, 3], [2, 3]], [1, 1]), 120)
    raise SpecError(f"unknown preset {name!r}; choose from {PRESET_NAMES}")


def parse_problem(data: dict) -> tuple[HurwitzSpec, Direction, TargetPoint]:
    """Build and validate a (spec, direction, target) triple from a config
    dict with rationals encoded as strings."""
    try:
        P = int(data["P"])
        Q = int(data["Q"])
        c = [[rational_from_string(str(x)) for x in row] for row in data["c"]]
        d = [rational_from_string(str(x)) for x in data["d"]]
        mu = [rational_from_string(str(x)) for x in data["mu"]]
        muprime = [rational_from_string(str(x)) for x in data["muprime"]]
        N = [int(x) for x in data["N"]]
        Nprime = [int(x) for x in data["Nprime"]]
    except KeyError as exc:
        raise SpecError(f"config is missing field {exc.args[0]!r}") from exc
    except (ValueError, ZeroDivisionError) as exc:
        raise SpecError(f"config parse error: {exc}") from exc
    if len(c) != Q:
        raise SpecError(f"c has {len(c)} rows, expected Q={Q}")
    if len(d) != P:
        raise SpecError(f"d has length {len(d)}, expected P={P}")
    spec = HurwitzSpec(c, d)
    direction = Direction(mu, muprime)
    target = TargetPoint(N, Nprime)
    validate(spec, direction, target)
    return spec, direction, target


def problem_to_dict(spec: HurwitzSpec, direction: Direction,
                    target: TargetPoint) -> dict:
    return {
        "P": spec.P,
        "Q": spec.Q,
        "c": [[rational_to_string(x) for x in row] for row in spec.c],
        "d": [rational_to_string(x) for x in spec.d],
        "mu": [rational_to_string(x) for x in direction.mu],
        "muprime": [rational_to_string(x) for x in direction.muprime],
        "N": list(target.N),
        "Nprime": list(target.Nprime),
    }


def load_spec(path: Union[str, Path]) -> tuple[HurwitzSpec, Direction, TargetPoint]:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    return parse_problem(data)


def save_spec(path: Union[str, Path], spec: HurwitzSpec, direction: Direction,
              target: TargetPoint) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(problem_to_dict(spec, direction, target), fh, indent=2,
                  sort_keys=True)
        fh.write("\n")
