"""Witten zeta specials for so(5) and g2, and the g2 representation count.

The Lie-algebra Dirichlet series is W^s times the plain multizeta of the
preset (W the Weyl denominator, 6 or 120), so the value at 0 is the preset
value and the derivative at 0 gains a ln(W) multiple of it.

The asymptotic count of dimension-n representations of g2 uses the
two-pole saddle-point constants assembled from: the residues at 1/3 and 1/5
(computed by the closed residue formula), the value and derivative at 0, and
ordinary Gamma/zeta values.  The exact count comes from the classic
unbounded-knapsack dynamic program over the polynomial part values P(i,j)
with multiplicity f(n) = #{(i,j): P(i,j) = n}.

Only the leading exponential/power factor of the asymptotic is produced;
the subleading 1/n^{j/20} correction coefficients are intentionally out of
scope and 'leading_factor_only' is flagged on the output metadata.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath as mp

from .engine import ContinuationParams, residue_at, value_at, derivative_blocks
from .kvalue import KValue, kv_eval, kv_ln_rational
from .model import WittenPreset, preset
from .numeric import DomainError, Precision, gamma_pos, zeta_em

__all__ = [
    "witten_value0",
    "witten_derivative0",
    "ResiduePair",
    "residues_g2",
    "MeinardusData",
    "meinardus_constants",
    "weyl_dimension",
    "parts_table",
    "rg2_exact",
    "rg2_exact_series",
    "rg2_asymptotic",
    "rg2_log_asymptotic",
]


def witten_value0(name: str) -> Fraction:
    """Value of the Lie-algebra zeta at 0 (the W^s prefactor is 1 there)."""
    pre = preset(name)
    return value_at(pre.spec, pre.direction, pre.origin)


def witten_derivative0(name: str) -> KValue:
    """Derivative of the Lie-algebra zeta at 0: ln(W) * value + core derivative."""
    pre = preset(name)
    core = derivative_blocks(pre.spec, pre.direction, pre.origin)
    return kv_ln_rational(pre.weyl_denominator).scale(core.value) + core.derivative


@dataclass(frozen=True)
class ResiduePair:
    omega_alpha: float
    omega_beta: float
    err_alpha: float
    err_beta: float


def _g2_residue(s0: Fraction, params: ContinuationParams) -> float:
    pre = preset("g2")
    base = residue_at(pre.spec, pre.direction, pre.origin, s0, params)
    return float(120 ** float(s0)) * base


def residues_g2(prec: Precision = Precision(15),
                params: Optional[ContinuationParams] = None) -> ResiduePair:
    """Residues of the g2 zeta at 1/3 and 1/5, with refinement error bars.

    The error estimate is the difference between two quadrature refinement
    levels of the closed residue formula.
    """
    params = params or ContinuationParams(prec=prec)
    fine = params
    coarse = ContinuationParams(theta=params.theta, prec=params.prec,
                                quad_max_boxes=max(60, params.quad_max_boxes // 8),
                                quad_orders=(6, 9))
    out = {}
    for label, s0 in (("alpha", Fraction(1, 3)), ("beta", Fraction(1, 5))):
        v_fine = _g2_residue(s0, fine)
        v_coarse = _g2_residue(s0, coarse)
        out[label] = (v_fine, abs(v_fine - v_coarse))
    return ResiduePair(out["alpha"][0], out["beta"][0],
                       out["alpha"][1], out["beta"][1])


@dataclass(frozen=True)
class MeinardusData:
    alpha: Fraction
    beta: Fraction
    omega_alpha: float
    omega_beta: float
    c1: float
    c2: float
    K2: float
    K3: float
    A1: float
    A2: float
    A3: float
    C: float
    b: Fraction
    zeta0: Fraction
    zeta0_prime: float
    leading_factor_only: bool = True


def meinardus_constants(prec: Precision = Precision(15),
                        residues: Optional[ResiduePair] = None) -> MeinardusData:
    """Assemble the saddle-point constants of the g2 count asymptotics.

    c1 and c2 pair each residue with Gamma(pole+1) zeta(pole+1); the
    exponential coefficients follow the two-pole expansion
        A1 = 4 c1^{3/4},
        A2 = omega_beta Gamma(1/5) zeta(6/5) / c1^{3/20},
        A3 = 2 K2^2 / (3 c1^{3/4}) - (c2 / c1^{9/10}) K2,
    the power is b = (7 - 6 zeta(0)) / 8 = 41/80 exactly, and the constant is
        C = e^{zeta'(0)} c1^{(3 - 6 zeta(0))/8} sqrt(3) / sqrt(8 pi).
    """
    zeta0 = witten_value0("g2")
    zeta0p = float(kv_eval(witten_derivative0("g2"), Precision(30)))
    res = residues or residues_g2(prec)
    with mp.workprec(prec.working_bits):
        g43 = gamma_pos(Fraction(4, 3), prec)
        g65 = gamma_pos(Fraction(6, 5), prec)
        g15 = gamma_pos(Fraction(1, 5), prec)
        z43 = zeta_em(Fraction(4, 3), 1, prec)
        z65 = zeta_em(Fraction(6, 5), 1, prec)
        c1 = res.omega_alpha * float(g43 * z43)
        c2 = res.omega_beta * float(g65 * z65)
        K2 = 0.75 * c2 / c1 ** 0.15
        K3 = -(3.0 / 160.0) * c2 ** 2 / c1 ** 1.05
        A1 = 4.0 * c1 ** 0.75
        A2 = res.omega_beta * float(g15 * z65) / c1 ** 0.15
        A3 = 2.0 * K2 ** 2 / (3.0 * c1 ** 0.75) - (c2 / c1 ** 0.9) * K2
        b = (7 - 6 * zeta0) / 8
        C = math.exp(zeta0p) * c1 ** float((3 - 6 * zeta0) / 8) \
            * math.sqrt(3.0) / math.sqrt(8.0 * math.pi)
    return MeinardusData(Fraction(1, 3), Fraction(1, 5),
                         res.omega_alpha, res.omega_beta,
                         c1, c2, K2, K3, A1, A2, A3, C, b,
                         zeta0, zeta0p)


# ---------------------------------------------------------------------------
# Exact counting
# ---------------------------------------------------------------------------

def weyl_dimension(i: int, j: int) -> int:
    """Dimension polynomial value P(i, j) for i, j >= 1; always an integer."""
    num = i * j * (i + j) * (i + 2 * j) * (i + 3 * j) * (2 * i + 3 * j)
    q, r = divmod(num, 120)
    assert r == 0, (i, j)
    return q


def parts_table(n_max: int) -> dict[int, int]:
    """f(n) = number of (i, j) with P(i, j) = n, for n <= n_max."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    table: dict[int, int] = {}
    j = 1
    while weyl_dimension(1, j) <= n_max:
        i = 1
        while True:
            dim = weyl_dimension(i, j)
            if dim > n_max:
                break
            table[dim] = table.get(dim, 0) + 1
            i += 1
        j += 1
    return table


def rg2_exact(n_max: int) -> list[int]:
    """Counts r(0..n_max) of multisets of parts P(i,j) summing to n.

    Unbounded-knapsack DP: each distinct part value v is applied f(v) times
    as an unlimited part (one pass per copy).
    """
    table = parts_table(n_max)
    counts = [1] + [0] * n_max
    for v in sorted(table):
        for _ in range(table[v]):
            for n in range(v, n_max + 1):
                counts[n] += counts[n - v]
    return counts


def rg2_exact_series(n_max: int) -> list[int]:
    """Independent recount through the generating product.

    Expands prod_v (1 - q^v)^{f(v)} as a truncated polynomial and divides
    the constant series 1 by it; used as the dual-method oracle.
    """
    table = parts_table(n_max)
    denom = [1] + [0] * n_max
    for v, mult in sorted(table.items()):
        for _ in range(mult):
            # multiply by (1 - q^v)
            for n in range(n_max, v - 1, -1):
                denom[n] -= denom[n - v]
    inv = [0] * (n_max + 1)
    inv[0] = 1
    for n in range(1, n_max + 1):
        acc = 0
        for m in range(1, min(n, n_max) + 1):
            if denom[m]:
                acc += denom[m] * inv[n - m]
        inv[n] = -acc
    return inv


def rg2_log_asymptotic(n: int, data: MeinardusData) -> float:
    """ln of the leading asymptotic factor C n^{-b} exp(A1 n^{1/4} + ...)."""
    if n < 1:
        raise DomainError("n must be positive")
    x = float(n)
    return (math.log(data.C) - float(data.b) * math.log(x)
            + data.A1 * x ** 0.25 + data.A2 * x ** 0.15 + data.A3 * x ** 0.05)


def rg2_asymptotic(n: int, data: MeinardusData) -> float:
    return math.exp(rg2_log_asymptotic(n, data))
