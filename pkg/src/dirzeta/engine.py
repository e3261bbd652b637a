"""Directional values, derivative values, analytic continuation, residues.

``value_at`` and ``derivative_at`` are the exact closed formulas: finite
sums over strict subsets of the power indices, budgeted multi-indices k, and
residual linear-form indices j, combining the corner coefficients q0/q1 with
exact Hurwitz zeta values (and, for the derivative, with generalized Barnes
derivative values reduced to canonical atoms).

``continuation_eval`` evaluates the function at generic real s away from the
hypothetical singularity set by splitting it into an entire incomplete-gamma
lattice sum K (vanishing at 0) and an explicit series J whose terms combine
Hurwitz zeta values with the corner integrals h.  ``residue_at`` extracts
the residue at a simple pole from exactly the J-term families whose linear
denominator vanishes there.  ``h_oracle`` measures h(0) and h'(0) by
quadrature plus polynomial extrapolation; it is the independent check on
q0/q1.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import factorial
from typing import Optional, Sequence, Union

import mpmath as mp
import numpy as np

from .barnes import barnes_derivative
from .exact import compositions, harmonic, hurwitz_zeta_neg, multinomial
from .kvalue import Atom, KValue, kv_zph
from .model import Direction, HurwitzSpec, TargetPoint, validate
from .numeric import (DomainError, Precision, gamma_q_reg, ln_gamma, zeta_em)
from .qengine import QContext, q0, q1
from .quad import quad_cube_multi

__all__ = [
    "DirectionalResult",
    "ContinuationParams",
    "NearSingularityError",
    "value_at",
    "derivative_at",
    "derivative_blocks",
    "continuation_eval",
    "residue_at",
    "singularities",
    "default_theta",
    "h_value",
    "h_oracle",
    "HOracleResult",
    "worker_count",
]


class NearSingularityError(DomainError):
    """The requested point is within the guard distance of a candidate pole."""


def worker_count() -> int:
    """Parallelism cap: DIRZETA_THREADS if set, else a small default."""
    env = os.environ.get("DIRZETA_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return min(4, os.cpu_count() or 1)


# ---------------------------------------------------------------------------
# Exact closed formulas
# ---------------------------------------------------------------------------

def _strict_subsets(P: int):
    for size in range(P):
        yield from (frozenset(c) for c in itertools.combinations(range(P), size))


def _mu_weight(direction: Direction, pset: frozenset[int]) -> Fraction:
    return sum((direction.mu[p] for p in pset),
               sum(direction.muprime, Fraction(0)))


def value_at(spec: HurwitzSpec, direction: Direction,
             target: TargetPoint, *, corner_factor: bool = True) -> Fraction:
    """Exact directional value at -(N, N') along (mu, mu').

    ``corner_factor=False`` reproduces the published variant of the corner
    coefficients (see the q-coefficient module docstring); the default is
    the oracle-confirmed form."""
    validate(spec, direction, target)
    N, Np = target.N, target.Nprime
    mup = direction.muprime
    total = Fraction(0)
    for pset in _strict_subsets(spec.P):
        pc = tuple(p for p in range(spec.P) if p not in pset)
        budget = sum(Np) + sum(N[p] for p in pset) + len(pset)
        sign = Fraction((-1) ** (sum(N[p] for p in pset) + len(pset)))
        nfact = Fraction(1)
        for p in pset:
            nfact *= factorial(N[p])
        denom = _mu_weight(direction, pset)
        for k in compositions(budget, len(pc)):
            zfac = Fraction(1)
            for p, kp in zip(pc, k):
                zfac *= hurwitz_zeta_neg(N[p] + kp, spec.d[p]) / factorial(kp)
            if not zfac:
                continue
            for j in range(spec.Q):
                ctx = QContext(spec, direction, target, j, pset, k)
                q0v = q0(ctx, corner_factor=corner_factor)
                if not q0v:
                    continue
                jfac = Fraction((-1) ** Np[j]) * mup[j] * factorial(Np[j]) / denom
                total += sign * nfact * jfac * q0v * zfac
    return Fraction((-1) ** sum(Np)) * total


@dataclass(frozen=True)
class DirectionalResult:
    value: Fraction
    derivative: KValue
    blocks: dict[str, KValue] = field(default_factory=dict)


def _z1(spec: HurwitzSpec, direction: Direction, target: TargetPoint) -> KValue:
    N, Np = target.N, target.Nprime
    mu, mup = direction.mu, direction.muprime
    out = KValue()
    for pset in _strict_subsets(spec.P):
        pc = tuple(p for p in range(spec.P) if p not in pset)
        budget = sum(Np) + sum(N[p] for p in pset) + len(pset)
        # Sign carries |N| restricted to the subset (with the budgeted |k|
        # equal to |N'| + |N|_subset + |subset|, this is (-1)^{|k|}).
        sign = Fraction((-1) ** (sum(Np) + sum(N[p] for p in pset) + len(pset)))
        nfact = Fraction(1)
        for p in pset:
            nfact *= factorial(N[p])
        denom = _mu_weight(direction, pset)
        pbracket = sum((mu[p] * (Fraction(0) - harmonic(N[p])) for p in pset),
                       Fraction(0))
        pgamma = sum((mu[p] for p in pset), Fraction(0))
        for j in range(spec.Q):
            jfac = sign * nfact * Fraction((-1) ** Np[j]) * mup[j] \
                * factorial(Np[j]) / denom
            bracket = KValue({
                Atom.one(): pbracket - mup[j] * harmonic(Np[j]),
                Atom.gamma(): pgamma + mup[j],
            })
            for k in compositions(budget, len(pc)):
                zfac = Fraction(1)
                for p, kp in zip(pc, k):
                    zfac *= hurwitz_zeta_neg(N[p] + kp, spec.d[p]) / factorial(kp)
                ctx = QContext(spec, direction, target, j, pset, k)
                inner = q1(ctx) + bracket.scale(q0(ctx))
                out = out + inner.scale(jfac * zfac)
    return out


def _z2(spec: HurwitzSpec, direction: Direction, target: TargetPoint) -> KValue:
    N, Np = target.N, target.Nprime
    mu, mup = direction.mu, direction.muprime
    out = KValue()
    for pset in _strict_subsets(spec.P):
        pc = tuple(p for p in range(spec.P) if p not in pset)
        budget = sum(Np) + sum(N[p] for p in pset) + len(pset)
        sign = Fraction((-1) ** (sum(Np) + sum(N[p] for p in pset) + len(pset)))
        nfact = Fraction(1)
        for p in pset:
            nfact *= factorial(N[p])
        denom = _mu_weight(direction, pset)
        for k in compositions(budget, len(pc)):
            for j in range(spec.Q):
                ctx = QContext(spec, direction, target, j, pset, k)
                q0v = q0(ctx)
                if not q0v:
                    continue
                jfac = sign * nfact * Fraction((-1) ** Np[j]) * mup[j] \
                    * factorial(Np[j]) / denom
                for i_pos, i in enumerate(pc):
                    if not mu[i]:
                        continue
                    rest = Fraction(1)
                    for p, kp in zip(pc, k):
                        if p == i:
                            continue
                        rest *= hurwitz_zeta_neg(N[p] + kp, spec.d[p]) \
                            / factorial(kp)
                    zp_term = kv_zph(N[i] + k[i_pos], spec.d[i]) \
                        .scale(mu[i] * rest / factorial(k[i_pos]))
                    out = out + zp_term.scale(jfac * q0v)
    return out


def _u_assignments(spec: HurwitzSpec, target: TargetPoint, j: int):
    """Per-form multi-indices u_q over the power axes with |u_q| = N'_q."""
    others = [q for q in range(spec.Q) if q != j]
    pools = [list(compositions(target.Nprime[q], spec.P)) for q in others]
    for combo in itertools.product(*pools):
        yield dict(zip(others, combo))


def _u_factor(spec: HurwitzSpec, target: TargetPoint, j: int,
              u: dict[int, tuple[int, ...]]) -> Fraction:
    acc = Fraction(1)
    for q, uq in u.items():
        acc *= multinomial(target.Nprime[q], uq)
        for p in range(spec.P):
            if uq[p]:
                acc *= spec.c[q][p] ** uq[p]
    return acc


def _r_vector(spec: HurwitzSpec, target: TargetPoint,
              u: dict[int, tuple[int, ...]]) -> tuple[int, ...]:
    return tuple(target.N[p] + sum(uq[p] for uq in u.values())
                 for p in range(spec.P))


def _z3(spec: HurwitzSpec, direction: Direction, target: TargetPoint) -> KValue:
    out = KValue()
    for j in range(spec.Q):
        jsum = KValue()
        for u in _u_assignments(spec, target, j):
            fac = _u_factor(spec, target, j, u)
            R = _r_vector(spec, target, u)
            jsum = jsum + barnes_derivative(R, target.Nprime[j], spec.d,
                                            spec.row(j)).scale(fac)
        out = out + jsum.scale(direction.muprime[j])
    return out


def _z4(spec: HurwitzSpec, direction: Direction, target: TargetPoint) -> KValue:
    N, Np = target.N, target.Nprime
    out = KValue()
    for j in range(spec.Q):
        inner = Fraction(0)
        for u in _u_assignments(spec, target, j):
            fac = _u_factor(spec, target, j, u)
            R = _r_vector(spec, target, u)
            psum = Fraction(0)
            for pset in _strict_subsets(spec.P):
                pc = tuple(p for p in range(spec.P) if p not in pset)
                sign = Fraction((-1) ** (sum(R[p] for p in pset) + len(pset)))
                coeff = sign
                for p in pset:
                    coeff *= spec.c[j][p] ** (-R[p] - 1) * factorial(R[p])
                budget = Np[j] + sum(R[p] for p in pset) + len(pset)
                ksum = Fraction(0)
                for k in compositions(budget, len(pc)):
                    term = Fraction(1)
                    for p, kp in zip(pc, k):
                        term *= spec.c[j][p] ** kp \
                            * hurwitz_zeta_neg(R[p] + kp, spec.d[p]) \
                            / factorial(kp)
                    ksum += term
                psum += coeff * ksum
            inner += fac * psum
        jcoeff = direction.muprime[j] * factorial(Np[j]) * inner
        out = out + KValue({Atom.gamma(): jcoeff,
                            Atom.one(): -harmonic(Np[j]) * jcoeff})
    return out


def derivative_blocks(spec: HurwitzSpec, direction: Direction,
                      target: TargetPoint) -> DirectionalResult:
    """Value plus derivative with the four-block provenance retained."""
    validate(spec, direction, target)
    blocks = {
        "Z1": _z1(spec, direction, target),
        "Z2": _z2(spec, direction, target),
        "Z3": _z3(spec, direction, target),
        "Z4": _z4(spec, direction, target),
    }
    deriv = blocks["Z1"] + blocks["Z2"] + blocks["Z3"] - blocks["Z4"]
    return DirectionalResult(value_at(spec, direction, target), deriv, blocks)


def derivative_at(spec: HurwitzSpec, direction: Direction,
                  target: TargetPoint) -> KValue:
    """Exact directional derivative value at -(N, N'), canonical atoms."""
    return derivative_blocks(spec, direction, target).derivative


# ---------------------------------------------------------------------------
# Hypothetical singularities
# ---------------------------------------------------------------------------

def default_theta(spec: HurwitzSpec) -> Fraction:
    """Safe free parameter: half of 1/(Q M r'^2) with r' covering d."""
    rprime = max(Fraction(2), max(spec.d), max(1 / dp for dp in spec.d))
    return Fraction(1, 2) / (spec.Q * spec.max_coeff * rprime ** 2)


def _theta_bound(spec: HurwitzSpec) -> Fraction:
    rprime = max(Fraction(2), max(spec.d), max(1 / dp for dp in spec.d))
    return Fraction(1) / (spec.Q * spec.max_coeff * rprime ** 2)


def singularities(spec: HurwitzSpec, direction: Direction, target: TargetPoint,
                  lo: Fraction, hi: Fraction) -> list[Fraction]:
    """All hypothetical singularities in [lo, hi]: zeta-argument points
    m/mu_p (m > N_p) and linear-denominator points m/(|mu'| + |mu|_subset)
    for nonzero integers m up to the subset budget."""
    found = _zeta_family_points(spec, direction, target, lo, hi)
    found |= _denominator_points(spec, direction, target, lo, hi)
    return sorted(found)


def _zeta_family_points(spec: HurwitzSpec, direction: Direction,
                        target: TargetPoint, lo: Fraction,
                        hi: Fraction) -> set[Fraction]:
    out: set[Fraction] = set()
    for p in range(spec.P):
        mu_p = direction.mu[p]
        if not mu_p:
            continue
        m = max(target.N[p] + 1, math.ceil(lo * mu_p))
        while Fraction(m) / mu_p <= hi:
            out.add(Fraction(m) / mu_p)
            m += 1
    return out


def _denominator_points(spec: HurwitzSpec, direction: Direction,
                        target: TargetPoint, lo: Fraction,
                        hi: Fraction) -> set[Fraction]:
    out: set[Fraction] = set()
    for size in range(spec.P + 1):
        for pset in itertools.combinations(range(spec.P), size):
            D = sum((direction.mu[p] for p in pset),
                    sum(direction.muprime, Fraction(0)))
            bound = sum(target.N[p] for p in pset) + sum(target.Nprime) + size
            m_lo = math.ceil(lo * D)
            m_hi = min(bound, math.floor(hi * D))
            for m in range(m_lo, m_hi + 1):
                if m != 0:
                    out.add(Fraction(m) / D)
    return out


# ---------------------------------------------------------------------------
# Corner integrals h by quadrature
# ---------------------------------------------------------------------------

@dataclass
class ContinuationParams:
    theta: Optional[Fraction] = None
    k_max: int = 60
    n_max: Optional[int] = None
    prec: Precision = field(default_factory=lambda: Precision(15))
    delta: float = 1e-3            # proximity guard around candidate poles
    quad_digits: int = 15          # corner-integral tolerance (clamped in quad)
    quad_max_boxes: int = 3000
    quad_orders: Optional[tuple[int, int]] = None


_FULL = "full"


class _HEvaluator:
    """Batched quadrature of the corner integrals at one fixed s.

    All integrands for a fixed residual index j share the axis exponents and
    the linear-form values; requests are cached per (j, subset, k).
    """

    def __init__(self, spec: HurwitzSpec, direction: Direction,
                 target: TargetPoint, s: float, params: ContinuationParams):
        self.spec = spec
        self.direction = direction
        self.target = target
        self.s = float(s)
        self.params = params
        self._cache: dict[tuple, float] = {}

    def _axis_exponents(self, j: int) -> list[float]:
        qs = [q for q in range(self.spec.Q) if q != j]
        return [-self.target.Nprime[q] + float(self.direction.muprime[q]) * self.s - 1
                for q in qs]

    def values(self, j: int, pairs: Sequence[tuple]) -> list[float]:
        missing = [pair for pair in pairs if (j, pair) not in self._cache]
        if missing:
            self._evaluate(j, missing)
        return [self._cache[(j, pair)] for pair in pairs]

    def value(self, j: int, pair: tuple) -> float:
        return self.values(j, [pair])[0]

    def _evaluate(self, j: int, pairs: Sequence[tuple]) -> None:
        spec, target, direction = self.spec, self.target, self.direction
        s = self.s
        qs = [q for q in range(spec.Q) if q != j]
        exps = self._axis_exponents(j)
        if any(e <= -1.0 for e in exps):
            raise DomainError(
                f"corner integral not integrable at s={s}: axis exponent <= -1")
        coef = np.array([[float(spec.c[q][p]) for p in range(spec.P)]
                         for q in qs], dtype=float)
        cj = np.array([float(spec.c[j][p]) for p in range(spec.P)])
        p_expo = [-target.N[p] + float(direction.mu[p]) * s - 1
                  for p in range(spec.P)]
        # Shared power tables: which negative-exponent factors and which
        # monomial degrees the batch needs, per power index.
        need_neg = set()
        max_deg = [0] * spec.P
        for pair in pairs:
            if pair[0] == _FULL:
                need_neg.update(range(spec.P))
            else:
                pset, k = pair[1], pair[2]
                need_neg.update(pset)
                pc = tuple(p for p in range(spec.P) if p not in pset)
                for p, kp in zip(pc, k):
                    max_deg[p] = max(max_deg[p], kp)

        def integrand(x: np.ndarray) -> np.ndarray:
            npts = x.shape[0]
            L = cj[None, :] + (x @ coef if qs else np.zeros((npts, spec.P)))
            base = np.ones(npts)
            for axis, e in enumerate(exps):
                base = base * x[:, axis] ** e
            neg_pow = {p: L[:, p] ** p_expo[p] for p in need_neg}
            mono: list[list[np.ndarray]] = []
            for p in range(spec.P):
                row = [np.ones(npts)]
                for _ in range(max_deg[p]):
                    row.append(row[-1] * L[:, p])
                mono.append(row)
            out = np.empty((npts, len(pairs)))
            for i, pair in enumerate(pairs):
                col = base.copy()
                if pair[0] == _FULL:
                    for p in range(spec.P):
                        col = col * neg_pow[p]
                else:
                    pset, k = pair[1], pair[2]
                    for p in pset:
                        col = col * neg_pow[p]
                    pc = tuple(p for p in range(spec.P) if p not in pset)
                    for p, kp in zip(pc, k):
                        if kp:
                            col = col * mono[p][kp]
                out[:, i] = col
            return out

        res = quad_cube_multi(integrand, exps, Precision(self.params.quad_digits),
                              m=len(pairs), max_boxes=self.params.quad_max_boxes,
                              orders=self.params.quad_orders)
        gam = 1.0
        for q in qs:
            gam *= math.gamma(-target.Nprime[q] + float(direction.muprime[q]) * s)
        vals = np.atleast_1d(res.value)
        for i, pair in enumerate(pairs):
            self._cache[(j, pair)] = float(vals[i]) / gam


def h_value(spec: HurwitzSpec, direction: Direction, target: TargetPoint,
            pset: Optional[frozenset[int]], j: int, k: Optional[tuple[int, ...]],
            s: float, params: Optional[ContinuationParams] = None) -> float:
    """One corner integral h at real s; pset=None means the full-subset case."""
    params = params or ContinuationParams()
    ev = _HEvaluator(spec, direction, target, s, params)
    if pset is None:
        return ev.value(j, (_FULL,))
    return ev.value(j, ("partial", frozenset(pset), tuple(k or ())))


@dataclass(frozen=True)
class HOracleResult:
    h0: float
    h0prime: float
    fit_condition: float


def h_oracle(ctx: QContext, samples: Sequence[float],
             params: Optional[ContinuationParams] = None) -> HOracleResult:
    """Quadrature values of h along decreasing positive samples, fitted by a
    degree-(len-1) polynomial; returns the value and slope at 0.

    Requires N' = 0 so every sampled s > 0 keeps the axis exponents
    integrable.
    """
    if any(ctx.target.Nprime):
        raise DomainError("h_oracle requires N' = 0")
    if not samples or any(s <= 0 for s in samples):
        raise DomainError("h_oracle needs positive samples")
    params = params or ContinuationParams()
    pair = ("partial", ctx.pset, tuple(ctx.k))
    vals = []
    for s in samples:
        ev = _HEvaluator(ctx.spec, ctx.direction, ctx.target, float(s), params)
        vals.append(ev.value(ctx.j, pair))
    V = np.vander(np.asarray(samples, dtype=float), increasing=True)
    cond = float(np.linalg.cond(V))
    coeffs = np.linalg.solve(V, np.asarray(vals))
    return HOracleResult(float(coeffs[0]), float(coeffs[1]), cond)


# ---------------------------------------------------------------------------
# J + K continuation
# ---------------------------------------------------------------------------

def _gamma_any(x: mp.mpf, prec: Precision) -> mp.mpf:
    """Gamma at any real non-pole argument (reflection for x <= 1/2)."""
    with mp.workprec(prec.working_bits):
        if x > 0.5:
            return mp.e ** ln_gamma(x, prec)
        if x == mp.floor(x):
            raise DomainError(f"gamma pole at {x}")
        return mp.pi / (mp.sin(mp.pi * x) * mp.e ** ln_gamma(1 - x, prec))


def _resolve_theta(spec: HurwitzSpec, params: ContinuationParams) -> Fraction:
    theta = params.theta if params.theta is not None else default_theta(spec)
    theta = Fraction(theta)
    if not 0 < theta < _theta_bound(spec):
        raise DomainError(
            f"theta={theta} outside (0, {_theta_bound(spec)}) for this spec")
    return theta


def _j_formula(spec: HurwitzSpec, direction: Direction, target: TargetPoint,
               s: Fraction, theta: Fraction, params: ContinuationParams,
               prec: Precision) -> mp.mpf:
    """The explicit series part at a regular rational point s."""
    N, Np = target.N, target.Nprime
    mu, mup = direction.mu, direction.muprime
    sf = float(s)
    hev = _HEvaluator(spec, direction, target, sf, params)
    # Prefetch the corner integrals every subset will need through its
    # mandatory shells: one batched quadrature per residual index j.
    prefetch: list[tuple] = [(_FULL,)]
    for pset in _strict_subsets(spec.P):
        pc_len = spec.P - len(pset)
        resonant = sum(Np) + sum(N[p] for p in pset) + len(pset)
        for shell in range(min(resonant + 5, params.k_max) + 1):
            prefetch.extend(("partial", pset, k)
                            for k in compositions(shell, pc_len))
    for j in range(spec.Q):
        hev.values(j, prefetch)
    with mp.workprec(prec.working_bits):
        theta_m = mp.mpf(theta.numerator) / theta.denominator
        ln_theta = mp.log(theta_m)
        total = mp.mpf(0)
        tol = mp.mpf(10) ** (-prec.digits - 2)

        def gamma_of(x: Fraction) -> mp.mpf:
            return _gamma_any(mp.mpf(x.numerator) / x.denominator, prec)

        for pset in _strict_subsets(spec.P):
            pc = tuple(p for p in range(spec.P) if p not in pset)
            gfac = mp.mpf(1)
            for p in pset:
                gfac *= gamma_of(1 + N[p] - mu[p] * s)
            D = _mu_weight(direction, pset)
            L0 = D * s - sum(Np) - sum(N[p] for p in pset) - len(pset)
            resonant = sum(Np) + sum(N[p] for p in pset) + len(pset)
            quiet = 0
            converged = False
            for shell in range(params.k_max + 1):
                shell_max = mp.mpf(0)
                shell_pairs = [("partial", pset, k)
                               for k in compositions(shell, len(pc))]
                for j in range(spec.Q):
                    hev.values(j, shell_pairs)
                for k in compositions(shell, len(pc)):
                    zfac = mp.mpf(1)
                    for p, kp in zip(pc, k):
                        zfac *= zeta_em(-N[p] + mu[p] * s - kp, spec.d[p], prec) \
                            / mp.factorial(kp)
                    L = L0 + shell
                    theta_pow = mp.e ** (ln_theta * (mp.mpf(L.numerator)
                                                     / L.denominator))
                    jsum = mp.mpf(0)
                    for j in range(spec.Q):
                        hval = hev.value(j, ("partial", pset, k))
                        jsum += hval / (gamma_of(-Np[j] + mup[j] * s)
                                        * (mp.mpf(L.numerator) / L.denominator))
                    term = ((-1) ** shell) * gfac * zfac * theta_pow * jsum
                    total += term
                    shell_max = max(shell_max, abs(term))
                if shell >= resonant + 2:
                    quiet = quiet + 1 if shell_max < tol * max(1, abs(total)) else 0
                    if quiet >= 3:
                        converged = True
                        break
            if not converged:
                raise DomainError(
                    f"J series did not converge within k_max={params.k_max}")

        # Full-subset block.
        gfac = mp.mpf(1)
        for p in range(spec.P):
            gfac *= gamma_of(1 + N[p] - mu[p] * s)
        D = _mu_weight(direction, frozenset(range(spec.P)))
        L = D * s - sum(Np) - sum(N) - spec.P
        theta_pow = mp.e ** (ln_theta * (mp.mpf(L.numerator) / L.denominator))
        jsum = mp.mpf(0)
        for j in range(spec.Q):
            hval = hev.value(j, (_FULL,))
            jsum += hval / (gamma_of(-Np[j] + mup[j] * s)
                            * (mp.mpf(L.numerator) / L.denominator))
        total += gfac * theta_pow * jsum
        return +total


def _k_lattice(spec: HurwitzSpec, direction: Direction, target: TargetPoint,
               s: float, theta: float, abs_tol: float,
               n_cap: Optional[int]) -> float:
    """Entire part: incomplete-gamma lattice sum in float64, truncated where
    the exponential decay drops the remaining mass below the tolerance."""
    P, Q = spec.P, spec.Q
    a = [-target.Nprime[q] + float(direction.muprime[q]) * s for q in range(Q)]
    spow = [target.N[p] - float(direction.mu[p]) * s for p in range(P)]
    d = [float(x) for x in spec.d]
    dp = [float(x) for x in spec.dprime]
    c = [[float(spec.c[q][p]) for p in range(P)] for q in range(Q)]

    growth = sum(max(x, 0.0) for x in spow) + sum(
        max(target.Nprime[q] - float(direction.muprime[q]) * s, 0.0)
        for q in range(Q)) + 3.0
    L = math.log(1.0 / max(abs_tol, 1e-300)) + 4.0
    sizes = []
    for p in range(P):
        rate = theta * min(c[q][p] for q in range(Q))
        T = L / rate
        for _ in range(5):
            T = (L + growth * math.log(max(T, 2.0))) / rate
        T = int(math.ceil(T)) + 2
        if n_cap is not None:
            T = min(T, n_cap)
        sizes.append(T)

    subsets = [combo for r in range(1, Q + 1)
               for combo in itertools.combinations(range(Q), r)]

    # Beyond this argument the regularized upper gamma is below any
    # tolerance used here; such lattice points are skipped outright.
    dead_x = math.log(1.0 / max(abs_tol, 1e-300)) + 25.0

    def box_sum(ranges: list[np.ndarray]) -> float:
        total = 0.0
        chunk = max(1, int(4e6 // max(1, np.prod([len(r) for r in ranges[1:]])))) \
            if P > 1 else len(ranges[0])
        first = ranges[0]
        for start in range(0, len(first), chunk):
            block = [first[start:start + chunk]] + ranges[1:]
            grids = np.meshgrid(*block, indexing="ij")
            ns = [g.ravel().astype(float) for g in grids]
            nus = []
            min_x = None
            for q in range(Q):
                nu = np.full_like(ns[0], dp[q])
                for p in range(P):
                    nu = nu + c[q][p] * ns[p]
                nus.append(nu)
                min_x = nu if min_x is None else np.minimum(min_x, nu)
            live = theta * min_x < dead_x
            if not live.any():
                continue
            ns = [n[live] for n in ns]
            nus = [nu[live] for nu in nus]
            pre = np.ones_like(ns[0])
            for p in range(P):
                pre = pre * (ns[p] + d[p]) ** spow[p]
            for q in range(Q):
                pre = pre * nus[q] ** (-a[q])
            qvals = [gamma_q_reg(a[q], theta * nus[q]) for q in range(Q)]
            one_minus = np.zeros_like(ns[0])
            for sub in subsets:
                prod = qvals[sub[0]].copy()
                for q in sub[1:]:
                    prod = prod * qvals[q]
                one_minus += ((-1) ** (len(sub) + 1)) * prod
            total += float(np.sum(pre * one_minus))
        return total

    ranges = [np.arange(0, sizes[p]) for p in range(P)]
    total = box_sum(ranges)
    # Honest tail check: a 30% extension must contribute below tolerance.
    added = None
    for _ in range(3):
        ext_sizes = [max(sizes[p] + 2, int(sizes[p] * 1.3)) for p in range(P)]
        if n_cap is not None:
            ext_sizes = [min(t, n_cap) for t in ext_sizes]
        if ext_sizes == sizes:
            break
        shells = []
        for p in range(P):
            shell_ranges = []
            for pp in range(P):
                if pp < p:
                    shell_ranges.append(np.arange(0, ext_sizes[pp]))
                elif pp == p:
                    shell_ranges.append(np.arange(sizes[pp], ext_sizes[pp]))
                else:
                    shell_ranges.append(np.arange(0, sizes[pp]))
            shells.append(shell_ranges)
        added = sum(box_sum(sr) for sr in shells)
        total += added
        sizes = ext_sizes
        if abs(added) < abs_tol / 2:
            return total
    if added is not None and abs(added) >= abs_tol / 2:
        raise DomainError("K lattice sum did not reach the requested tolerance")
    return total


def _exactify(s: Union[Fraction, int, float]) -> Fraction:
    if isinstance(s, (Fraction, int)):
        return Fraction(s)
    return Fraction(s).limit_denominator(10 ** 9)


def continuation_eval(spec: HurwitzSpec, direction: Direction,
                      target: TargetPoint, s: Union[Fraction, float],
                      params: Optional[ContinuationParams] = None) -> float:
    """J + K at real s away from the candidate poles.

    Points where only a zeta-argument factor degenerates (the function
    itself stays regular there when the offending terms cancel) are handled
    by symmetric Richardson extrapolation from two bracketing pairs; a
    nonvanishing antisymmetric slope there signals a genuine pole and
    raises.
    """
    validate(spec, direction, target)
    params = params or ContinuationParams()
    theta = _resolve_theta(spec, params)
    s_frac = _exactify(s)
    prec = params.prec

    window_lo = s_frac - 2
    window_hi = s_frac + 2
    den_pts = _denominator_points(spec, direction, target, window_lo, window_hi)
    zeta_pts = _zeta_family_points(spec, direction, target, window_lo, window_hi)
    if den_pts:
        dmin = min(abs(float(s_frac - x)) for x in den_pts)
        if dmin < params.delta:
            raise NearSingularityError(
                f"s={s} is within {params.delta} of a candidate pole")
    if spec.Q >= 2:
        for q in range(spec.Q):
            if direction.muprime[q] * s_frac <= target.Nprime[q]:
                raise DomainError(
                    "corner integrals not integrable at this s "
                    f"(axis q={q}); choose s larger")

    on_zeta_pt = s_frac in zeta_pts
    near_zeta = any(0 < abs(float(s_frac - x)) < params.delta for x in zeta_pts)
    if near_zeta and not on_zeta_pt:
        raise NearSingularityError(
            f"s={s} is within {params.delta} of a zeta-argument degeneracy; "
            "evaluate at the point itself or further away")

    kv = _k_lattice(spec, direction, target, float(s_frac), float(theta),
                    max(prec.eps, 1e-13), params.n_max)

    if not on_zeta_pt:
        jv = float(_j_formula(spec, direction, target, s_frac, theta, params,
                              prec))
        return jv + kv

    # Removable degeneracy: extrapolate the explicit series from two
    # symmetric pairs; Richardson cancels the even error terms.
    rho = Fraction(1, 512)
    all_pts = (den_pts | zeta_pts) - {s_frac}
    for _ in range(20):
        offsets = [s_frac - 2 * rho, s_frac - rho, s_frac + rho, s_frac + 2 * rho]
        if not all_pts or all(
                min(abs(float(o - x)) for x in all_pts) > float(rho) / 4
                for o in offsets):
            break
        rho /= 2
    jm2, jm1, jp1, jp2 = (
        float(_j_formula(spec, direction, target, o, theta, params, prec))
        for o in offsets)
    # Antisymmetric slope estimates the residue; for a regular point the
    # two-step Richardson combination is O(rho^4) small.
    res1 = float(rho) * (jp1 - jm1) / 2.0
    res2 = float(rho) * (jp2 - jm2)
    residue_est = (4.0 * res1 - res2) / 3.0
    even1 = (jp1 + jm1) / 2.0
    even2 = (jp2 + jm2) / 2.0
    scale = max(abs(even1), 1.0)
    if abs(residue_est) > 1e-6 * scale:
        raise NearSingularityError(
            f"s={s} appears to be a genuine pole (residue ~ {residue_est:.3g})")
    jv = (4.0 * even1 - even2) / 3.0
    return jv + kv


def residue_at(spec: HurwitzSpec, direction: Direction, target: TargetPoint,
               s0: Union[Fraction, float],
               params: Optional[ContinuationParams] = None) -> float:
    """Residue at a simple candidate pole s0 > 0 of the linear-denominator
    kind: the sum of exactly the series families whose denominator vanishes
    at s0, each with the denominator replaced by its s-slope."""
    validate(spec, direction, target)
    params = params or ContinuationParams()
    s0 = _exactify(s0)
    if s0 <= 0:
        raise DomainError("residue_at supports poles at s0 > 0 only")
    if s0 in _zeta_family_points(spec, direction, target, s0, s0):
        raise DomainError(
            "residue_at: zeta-argument degeneracy coincides with s0; "
            "unsupported pole shape")
    N, Np = target.N, target.Nprime
    mu, mup = direction.mu, direction.muprime
    prec = params.prec
    hev = _HEvaluator(spec, direction, target, float(s0), params)
    matched = False
    with mp.workprec(prec.working_bits):
        total = mp.mpf(0)

        def gamma_of(x: Fraction) -> mp.mpf:
            return _gamma_any(mp.mpf(x.numerator) / x.denominator, prec)

        for pset in _strict_subsets(spec.P):
            pc = tuple(p for p in range(spec.P) if p not in pset)
            D = _mu_weight(direction, pset)
            kk = sum(Np) + sum(N[p] for p in pset) + len(pset) - D * s0
            if kk.denominator != 1 or kk < 0:
                continue
            matched = True
            kk = int(kk)
            gfac = mp.mpf(1)
            for p in pset:
                gfac *= gamma_of(1 + N[p] - mu[p] * s0)
            for k in compositions(kk, len(pc)):
                zfac = mp.mpf(1)
                for p, kp in zip(pc, k):
                    arg = -N[p] + mu[p] * s0 - kp
                    if arg == 1:
                        raise DomainError(
                            "residue_at: zeta pole inside a matched family")
                    zfac *= zeta_em(arg, spec.d[p], prec) / mp.factorial(kp)
                for j in range(spec.Q):
                    hval = hev.value(j, ("partial", pset, k))
                    total += ((-1) ** kk) * gfac * zfac * hval \
                        / (gamma_of(-Np[j] + mup[j] * s0)
                           * (mp.mpf(D.numerator) / D.denominator))
        D = _mu_weight(direction, frozenset(range(spec.P)))
        if D * s0 == sum(Np) + sum(N) + spec.P:
            matched = True
            gfac = mp.mpf(1)
            for p in range(spec.P):
                gfac *= gamma_of(1 + N[p] - mu[p] * s0)
            for j in range(spec.Q):
                hval = hev.value(j, (_FULL,))
                total += gfac * hval / (gamma_of(-Np[j] + mup[j] * s0)
                                        * (mp.mpf(D.numerator) / D.denominator))
    if not matched:
        raise DomainError(f"s0={s0} is not a candidate pole of this spec")
    return float(total)
