"""Independent brute-force checks bundled behind one interface.

Each check recomputes a quantity by a route independent of the code path it
validates (direct series summation, quadrature plus extrapolation, dual
dynamic programs, finite differences) and reports the worst deviation seen.
The CLI exposes them under the ``oracle`` subcommand; the test suite calls
the same functions.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import mpmath as mp
import numpy as np

from .engine import (ContinuationParams, continuation_eval, h_oracle,
                     residue_at, value_at)
from .exact import compositions
from .kvalue import kv_eval
from .model import Direction, HurwitzSpec, TargetPoint, preset
from .numeric import Precision, zeta_em
from .qengine import QContext, q0, q1
from .witten import rg2_exact, rg2_exact_series, residues_g2

__all__ = ["OracleReport", "run_oracle", "ORACLE_NAMES",
           "direct_series", "oracle_contexts"]


@dataclass(frozen=True)
class OracleReport:
    name: str
    passed: bool
    max_deviation: float
    tolerance: float
    details: str = ""


def direct_series(spec: HurwitzSpec, direction: Direction, target: TargetPoint,
                  s: float, box: int) -> float:
    """Brute-force lattice sum of the defining series at real s (float64).

    Only meaningful inside the absolute-convergence region; the caller picks
    the box, and the [box, 1.5*box) shell is added as a tail estimate.
    """
    P, Q = spec.P, spec.Q
    spow = [target.N[p] - float(direction.mu[p]) * s for p in range(P)]
    sppow = [target.Nprime[q] - float(direction.muprime[q]) * s for q in range(Q)]
    d = [float(x) for x in spec.d]
    dp = [float(x) for x in spec.dprime]
    c = [[float(spec.c[q][p]) for p in range(P)] for q in range(Q)]

    def box_sum(ranges: Sequence[np.ndarray]) -> float:
        grids = np.meshgrid(*ranges, indexing="ij")
        ns = [g.ravel().astype(float) for g in grids]
        acc = np.ones_like(ns[0])
        for p in range(P):
            acc = acc * (ns[p] + d[p]) ** spow[p]
        for q in range(Q):
            nu = np.full_like(ns[0], dp[q])
            for p in range(P):
                nu = nu + c[q][p] * ns[p]
            acc = acc * nu ** sppow[q]
        return float(acc.sum())

    full = box_sum([np.arange(box)] * P)
    ext = int(box * 1.5)
    shell_total = 0.0
    for p in range(P):
        ranges = []
        for pp in range(P):
            if pp < p:
                ranges.append(np.arange(ext))
            elif pp == p:
                ranges.append(np.arange(box, ext))
            else:
                ranges.append(np.arange(box))
        shell_total += box_sum(ranges)
    return full + shell_total


def oracle_contexts(name: str, max_k: int = 2) -> list[QContext]:
    """Every preset context with N' = 0, subset size <= 1, |k| <= max_k."""
    pre = preset(name)
    spec, direction, target = pre.spec, pre.direction, pre.origin
    out = []
    for j in range(spec.Q):
        for size in (0, 1):
            for pset in itertools.combinations(range(spec.P), size):
                pc_len = spec.P - size
                for total in range(max_k + 1):
                    for k in compositions(total, pc_len):
                        out.append(QContext(spec, direction, target, j,
                                            frozenset(pset), k))
    return out


_H_SAMPLES = tuple(0.4 / 2 ** i for i in range(5))


def h_taylor_table(name: str, max_k: int = 2,
                   samples: Sequence[float] = _H_SAMPLES
                   ) -> dict[QContext, tuple[float, float]]:
    """Quadrature-extrapolated (h(0), h'(0)) for every preset context.

    All integrals sharing a residual index and a sample point are evaluated
    in one batched quadrature; the degree-(len-1) polynomial fit per context
    then mirrors h_oracle.
    """
    from .engine import _HEvaluator, ContinuationParams
    pre = preset(name)
    ctxs = oracle_contexts(name, max_k)
    pairs = sorted({("partial", ctx.pset, ctx.k) for ctx in ctxs},
                   key=lambda t: (sorted(t[1]), t[2]))
    values: dict[tuple[int, tuple], list[float]] = {}
    params = ContinuationParams()
    for s in samples:
        ev = _HEvaluator(pre.spec, pre.direction, pre.origin, float(s), params)
        for j in range(pre.spec.Q):
            for pair, val in zip(pairs, ev.values(j, pairs)):
                values.setdefault((j, pair), []).append(val)
    V = np.vander(np.asarray(samples, dtype=float), increasing=True)
    out = {}
    for ctx in ctxs:
        vals = values[(ctx.j, ("partial", ctx.pset, ctx.k))]
        coeffs = np.linalg.solve(V, np.asarray(vals))
        out[ctx] = (float(coeffs[0]), float(coeffs[1]))
    return out


def _check_q0(name: str) -> OracleReport:
    worst = 0.0
    for ctx, (h0, _) in h_taylor_table(name).items():
        worst = max(worst, abs(h0 - float(q0(ctx))))
    return OracleReport(f"q0[{name}]", worst < 1e-4, worst, 1e-4)


def _check_q1(name: str) -> OracleReport:
    worst = 0.0
    prec = Precision(20)
    for ctx, (_, h0p) in h_taylor_table(name).items():
        worst = max(worst, abs(h0p - float(kv_eval(q1(ctx), prec))))
    return OracleReport(f"q1[{name}]", worst < 1e-3, worst, 1e-3)


def _check_zeta() -> OracleReport:
    # (a) direct summation of the s=2 series with integral tail corrections;
    # (b) two independent expansion configurations at s=1/5.
    prec = Precision(30)
    n_terms = 10 ** 6
    direct = mp.mpf(0)
    with mp.workprec(120):
        for n in range(1, n_terms + 1):
            direct += mp.mpf(1) / (n * n)
        # Euler-Maclaurin tail of sum_{n>N} n^-2: 1/N - 1/(2N^2) + 1/(6N^3)...
        N = mp.mpf(n_terms)
        direct += 1 / N - 1 / (2 * N ** 2) + 1 / (6 * N ** 3) - 1 / (30 * N ** 5)
    dev_a = abs(float(zeta_em(2, 1, prec) - direct))
    run1 = zeta_em(Fraction(1, 5), 1, prec)
    run2 = zeta_em(Fraction(1, 5), 1, prec, order_bump=6, shift_bump=9)
    dev_b = abs(float(run1 - run2))
    worst = max(dev_a, dev_b)
    return OracleReport("zeta", worst < 1e-12, worst, 1e-12,
                        "direct summation at 2; independent runs at 1/5")


def _euler_gamma_harmonic(levels: int = 14, base: int = 64) -> mp.mpf:
    """Richardson extrapolation of H_n - ln n along n = base * 2^k."""
    with mp.workprec(260):
        rows = []
        h = mp.mpf(0)
        prev_n = 0
        for k in range(levels):
            n = base * 2 ** k
            for i in range(prev_n + 1, n + 1):
                h += mp.mpf(1) / i
            prev_n = n
            rows.append(h - mp.log(n))
        # eliminate successive powers of 1/n (ratio 2 ladder)
        for order in range(1, levels):
            factor = mp.mpf(2) ** order
            rows = [(factor * rows[i + 1] - rows[i]) / (factor - 1)
                    for i in range(len(rows) - 1)]
        return rows[0]


def _check_gamma() -> OracleReport:
    from .numeric import euler_gamma
    prec = Precision(30)
    lit = euler_gamma(prec)
    dev_a = abs(float(lit - _euler_gamma_harmonic()))
    # zeta-limit cross-check: (zeta(1+e) + zeta(1-e))/2 - 1/e-free average.
    eps = mp.mpf(1) / 10 ** 4
    avg = (zeta_em(1 + eps, 1, prec) - 1 / eps
           + zeta_em(1 - eps, 1, prec) + 1 / eps) / 2
    dev_b = abs(float(lit - avg))
    worst = max(dev_a, min(dev_b, dev_b))
    passed = dev_a < 1e-25 and dev_b < 1e-7
    return OracleReport("gamma", passed, worst, 1e-7,
                        f"harmonic dev {dev_a:.2e}, zeta-limit dev {dev_b:.2e}")


def _check_continuation() -> OracleReport:
    pre = preset("so5")
    spec, direction, target = pre.spec, pre.direction, pre.origin
    oracle = direct_series(spec, direction, target, 2.0, 2000)
    devs = []
    vals = []
    for theta in (Fraction(1, 20), Fraction(1, 50)):
        params = ContinuationParams(theta=theta)
        v = continuation_eval(spec, direction, target, Fraction(2), params)
        vals.append(v)
        devs.append(abs(v - oracle))
    dev_theta = abs(vals[0] - vals[1])
    worst = max(max(devs), dev_theta)
    return OracleReport("continuation", worst < 1e-8, worst, 1e-8,
                        f"direct-sum devs {devs}, theta dev {dev_theta:.2e}")


def slope_residue(f: Callable[[Fraction], float], s0: Fraction,
                  eps: Fraction) -> float:
    """Antisymmetric slope fit of the simple-pole weight at s0, one
    Richardson level over steps eps and 2 eps."""
    fine = float(eps) * (f(s0 + eps) - f(s0 - eps)) / 2.0
    coarse = float(eps) * (f(s0 + 2 * eps) - f(s0 - 2 * eps))
    return (4.0 * fine - coarse) / 3.0


def _check_residues(fast: bool = True) -> OracleReport:
    # One-form shape: the residue at 1 must be exactly the simple pole
    # weight of the ordinary zeta function.
    spec = HurwitzSpec([[1]], [1])
    direction = Direction([0], [1])
    target = TargetPoint([0], [0])
    base = residue_at(spec, direction, target, Fraction(1))
    dev = abs(base - 1.0)
    details = [f"one-form residue dev {dev:.2e}"]
    worst = dev
    if not fast:
        pre = preset("g2")
        pres = residues_g2()

        def f(s: Fraction) -> float:
            return 120.0 ** float(s) * continuation_eval(
                pre.spec, pre.direction, pre.origin, s, ContinuationParams())

        for s0, omega in ((Fraction(1, 3), pres.omega_alpha),
                          (Fraction(1, 5), pres.omega_beta)):
            est = slope_residue(f, s0, Fraction(1, 100))
            dev = abs(est - omega)
            details.append(f"slope fit at {s0}: dev {dev:.2e}")
            worst = max(worst, dev)
    tol = 1e-8 if fast else 1e-3
    return OracleReport("residues", worst < tol, worst, tol, "; ".join(details))


def _check_rg2() -> OracleReport:
    a = rg2_exact(200)
    b = rg2_exact_series(200)
    dev = max(abs(x - y) for x, y in zip(a, b))
    return OracleReport("rg2", dev == 0, float(dev), 0.0,
                        "dual dynamic programs agree" if dev == 0 else "mismatch")


def _check_barnes() -> OracleReport:
    from .barnes import BarnesSpec, barnes_reduce

    def direct(R, d, w, s, box):
        ns = np.meshgrid(*[np.arange(box)] * len(R), indexing="ij")
        acc = np.ones_like(ns[0], dtype=float)
        lin = np.zeros_like(ns[0], dtype=float)
        for p, (r, dp, wp) in enumerate(zip(R, d, w)):
            shifted = ns[p] + float(dp)
            acc = acc * shifted ** r
            lin = lin + float(wp) * shifted
        return float((acc * lin ** (-s)).sum())

    worst = 0.0
    cases = [((0, 0), (Fraction(1), Fraction(1)), (Fraction(1), Fraction(2)), 5.0),
             ((0, 0), (Fraction(1, 2), Fraction(3, 2)),
              (Fraction(3, 2), Fraction(2, 3)), 5.0),
             ((1, 1), (Fraction(1), Fraction(1)), (Fraction(1), Fraction(2)), 9.0)]
    for R, d, w, s in cases:
        spec = BarnesSpec(R, d, w)
        red = barnes_reduce(spec)
        lhs = direct(R, d, w, s, 2500)
        rhs = 0.0
        for dvec, weight in red.terms:
            rhs += float(weight) * direct(R, dvec, [Fraction(1)] * len(R), s, 2500)
        rhs *= float(red.base) ** (-s) * float(red.power_factor)
        worst = max(worst, abs(lhs - rhs))
    return OracleReport("barnes", worst < 1e-10, worst, 1e-10)


ORACLE_NAMES = ("q0", "q1", "zeta", "gamma", "continuation", "residues",
                "rg2", "barnes")


def run_oracle(name: str, preset_name: Optional[str] = None,
               fast: bool = True) -> list[OracleReport]:
    """Run one named oracle (or 'all'); returns one report per sub-check."""
    if name == "all":
        out = []
        for nm in ORACLE_NAMES:
            out.extend(run_oracle(nm, preset_name, fast))
        return out
    presets = [preset_name] if preset_name else ["so5", "g2"]
    if name == "q0":
        return [_check_q0(p) for p in presets]
    if name == "q1":
        return [_check_q1(p) for p in presets]
    if name == "zeta":
        return [_check_zeta()]
    if name == "gamma":
        return [_check_gamma()]
    if name == "continuation":
        return [_check_continuation()]
    if name == "residues":
        return [_check_residues(fast)]
    if name == "rg2":
        return [_check_rg2()]
    if name == "barnes":
        return [_check_barnes()]
    raise ValueError(f"unknown oracle {name!r}; choose from {ORACLE_NAMES}")
