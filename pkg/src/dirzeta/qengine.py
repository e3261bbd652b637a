"""Exact Taylor data of the auxiliary corner integrals at s = 0.

``q0`` is the order-0 coefficient: a finite double sum over budgeted
multi-index assignments (w over the complement of the chosen subset, v over
the subset), with all mass constrained per linear form.  ``q1`` is the
order-1 coefficient: the same enumeration decorated with harmonic-number /
Euler-gamma brackets, plus a second block of logarithmic constants obtained
by integrating exact partial-fraction decompositions over [0, 1] and keeping
the part that survives as the lower endpoint goes to 0.

q0 lands in Q; q1 lands in the span of {1, gamma, prime logs}.

A note on the fully-budgeted terms: when every integration variable sits
below the cutoff, the leftover zero-dimensional integral is the constant
prod_{p in subset} c[j][p]^(-N_p + mu_p s - 1 - |v_p|), not 1.  At s = 0
this multiplies each q0/q1 term by prod c[j][p]^(-N_p - 1 - |v_p|), and its
s-slope adds sum_p mu_p ln(c[j][p]) to the q1 bracket.  Dropping that
constant (pass corner_factor=False) reproduces a simpler published variant
of these coefficients; the default keeps it, which is what quadrature
oracles, the exactly solvable degenerate configurations, and the
unit-weight lattice reduction all confirm.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterator, Sequence

from .exact import binom_shifted, compositions, harmonic, multinomial
from .kvalue import Atom, KValue, kv_ln_rational
from .model import Direction, HurwitzSpec, TargetPoint

__all__ = ["QContext", "PartialFraction", "q0", "q1",
           "partial_fractions", "f_constant"]


@dataclass(frozen=True)
class QContext:
    """Arguments of one corner coefficient: subset, residual index j, k."""

    spec: HurwitzSpec
    direction: Direction
    target: TargetPoint
    j: int
    pset: frozenset[int]
    k: tuple[int, ...]   # indexed by sorted complement of pset

    def __post_init__(self) -> None:
        P, Q = self.spec.P, self.spec.Q
        if not 0 <= self.j < Q:
            raise ValueError(f"j={self.j} outside [0, {Q})")
        if not self.pset <= set(range(P)) or len(self.pset) >= P:
            raise ValueError("pset must be a strict subset of the power indices")
        if len(self.k) != P - len(self.pset):
            raise ValueError("k must be indexed by the complement of pset")
        if any(kp < 0 for kp in self.k):
            raise ValueError("k entries must be nonnegative")

    @property
    def pc(self) -> tuple[int, ...]:
        return tuple(p for p in range(self.spec.P) if p not in self.pset)

    @property
    def ps(self) -> tuple[int, ...]:
        return tuple(sorted(self.pset))


def _w_assignments(ctx: QContext) -> Iterator[dict[int, tuple[int, ...]]]:
    """Every w: one length-Q multi-index per complement index p, |w_p| = k_p."""
    pc = ctx.pc
    Q = ctx.spec.Q
    pools = [list(compositions(kp, Q)) for kp in ctx.k]
    for combo in itertools.product(*pools):
        yield dict(zip(pc, combo))


def _w_factor(ctx: QContext, w: dict[int, tuple[int, ...]]) -> Fraction:
    c = ctx.spec.c
    acc = Fraction(1)
    for p, kp in zip(ctx.pc, ctx.k):
        wp = w[p]
        acc *= multinomial(kp, wp)
        for q in range(ctx.spec.Q):
            if wp[q]:
                acc *= c[q][p] ** wp[q]
    return acc


def _w_column(ctx: QContext, w: dict[int, tuple[int, ...]], q: int) -> int:
    return sum(w[p][q] for p in ctx.pc)


def _v_assignments(ctx: QContext, w: dict[int, tuple[int, ...]],
                   excluded: tuple[int, ...]) -> Iterator[dict[int, dict[int, int]]]:
    """Every v over the subset with v(q) + w(q) = N'_q for q outside
    ``excluded``; the remaining mass budgets distribute over pset columns."""
    ps = ctx.ps
    Np = ctx.target.Nprime
    qs = [q for q in range(ctx.spec.Q) if q not in excluded]
    budgets = []
    for q in qs:
        b = Np[q] - _w_column(ctx, w, q)
        if b < 0:
            return
        budgets.append(b)
    if not ps:
        if any(budgets):
            return
        yield {}
        return
    pools = [list(compositions(b, len(ps))) for b in budgets]
    for combo in itertools.product(*pools):
        v: dict[int, dict[int, int]] = {p: {} for p in ps}
        for q, comp in zip(qs, combo):
            for p, amount in zip(ps, comp):
                v[p][q] = amount
        yield v


def _v_factor(ctx: QContext, v: dict[int, dict[int, int]],
              excluded: tuple[int, ...]) -> Fraction:
    c = ctx.spec.c
    N = ctx.target.N
    acc = Fraction(1)
    for p in ctx.ps:
        vp = v[p]
        sizes = [vp.get(q, 0) for q in range(ctx.spec.Q) if q not in excluded]
        total = sum(sizes)
        acc *= binom_shifted(-N[p] - 1, total) * multinomial(total, sizes)
        for q, amount in vp.items():
            if amount:
                acc *= c[q][p] ** amount
    return acc


def _v_sizes(ctx: QContext, v: dict[int, dict[int, int]]) -> dict[int, int]:
    return {p: sum(v[p].values()) for p in ctx.ps}


def _residual_sign_factorial(ctx: QContext) -> Fraction:
    acc = Fraction(1)
    for q in range(ctx.spec.Q):
        if q == ctx.j:
            continue
        nq = ctx.target.Nprime[q]
        acc *= Fraction((-1) ** nq * factorial(nq))
    return acc


def _corner_constant(ctx: QContext, sizes: dict[int, int]) -> Fraction:
    """The zero-dimensional leftover integral of a fully-budgeted term."""
    acc = Fraction(1)
    for p in ctx.ps:
        acc *= ctx.spec.c[ctx.j][p] ** (-ctx.target.N[p] - 1 - sizes.get(p, 0))
    return acc


def q0(ctx: QContext, *, corner_factor: bool = True) -> Fraction:
    """Order-0 coefficient; exact rational."""
    tail = _residual_sign_factorial(ctx)
    total = Fraction(0)
    for w in _w_assignments(ctx):
        wf = _w_factor(ctx, w)
        for v in _v_assignments(ctx, w, excluded=(ctx.j,)):
            term = wf * _v_factor(ctx, v, excluded=(ctx.j,))
            if corner_factor:
                term *= _corner_constant(ctx, _v_sizes(ctx, v))
            total += term
    return tail * total


def q1(ctx: QContext, *, corner_factor: bool = True) -> KValue:
    """Order-1 coefficient; lies in span{1, gamma, prime logs}."""
    mu = ctx.direction.mu
    mup = ctx.direction.muprime
    N = ctx.target.N
    Np = ctx.target.Nprime
    j = ctx.j
    others = [q for q in range(ctx.spec.Q) if q != j]

    # Block 1: full constraint set, harmonic/gamma bracket; the corner
    # constant scales each term and contributes its own log slope.
    gamma_weight = sum((mup[q] for q in others), Fraction(0))
    const_bracket = -sum((mup[q] * harmonic(Np[q]) for q in others), Fraction(0))
    rat_sum = Fraction(0)
    gam_sum = Fraction(0)
    log_sum = KValue()
    for w in _w_assignments(ctx):
        wf = _w_factor(ctx, w)
        for v in _v_assignments(ctx, w, excluded=(j,)):
            base = wf * _v_factor(ctx, v, excluded=(j,))
            sizes = _v_sizes(ctx, v)
            if corner_factor:
                base *= _corner_constant(ctx, sizes)
            psum = sum((mu[p] * (harmonic(N[p]) - harmonic(N[p] + sizes[p]))
                        for p in ctx.ps), Fraction(0))
            rat_sum += base * (psum + const_bracket)
            gam_sum += base * gamma_weight
            if corner_factor:
                for p in ctx.ps:
                    if mu[p]:
                        log_sum = log_sum + kv_ln_rational(
                            ctx.spec.c[j][p]).scale(base * mu[p])
    tail = _residual_sign_factorial(ctx)
    result = KValue({Atom.one(): tail * rat_sum, Atom.gamma(): tail * gam_sum}) \
        + log_sum.scale(tail)

    # Block 2: one linear form released from its budget; its endpoint
    # integral contributes the logarithmic constant F.
    pref2 = Fraction((-1) ** sum(Np[q] for q in others))
    for q in others:
        pref2 *= factorial(Np[q])
    block2 = KValue()
    for f in others:
        fsum = KValue()
        for w in _w_assignments(ctx):
            wf = _w_factor(ctx, w)
            for v in _v_assignments(ctx, w, excluded=(j, f)):
                vf = _v_factor(ctx, v, excluded=(j, f))
                fc = f_constant(ctx, f, v, w)
                fsum = fsum + fc.scale(wf * vf)
        block2 = block2 + fsum.scale(mup[f])
    return result + block2.scale(pref2)


# ---------------------------------------------------------------------------
# Exact partial fractions of x^a * prod_p (alpha_p + beta_p x)^{-m_p}
# ---------------------------------------------------------------------------

@dataclass
class PartialFraction:
    """Decomposition data with its source parameters kept for verification.

    Proportional linear factors are merged into one root group attributed to
    the smallest participating index, so pole orders are always correct.
    """

    a: int
    factors: tuple[tuple[int, Fraction, Fraction, int], ...]  # (p, alpha, beta, m)
    poly: tuple[Fraction, ...]                 # ascending coefficients
    c_terms: dict[int, Fraction] = field(default_factory=dict)
    d_terms: dict[tuple[int, int], Fraction] = field(default_factory=dict)
    group_base: dict[int, tuple[Fraction, Fraction]] = field(default_factory=dict)

    @property
    def e_const(self) -> Fraction:
        # Constant term of the primitive of the polynomial part that
        # vanishes at x = 1.
        return -sum((c / (i + 1) for i, c in enumerate(self.poly)), Fraction(0))

    def source_evaluate(self, x: Fraction) -> Fraction:
        acc = x ** self.a if self.a >= 0 else Fraction(1) / x ** (-self.a)
        for _, alpha, beta, m in self.factors:
            acc /= (alpha + beta * x) ** m
        return acc

    def evaluate(self, x: Fraction) -> Fraction:
        acc = sum((c * x ** i for i, c in enumerate(self.poly)), Fraction(0))
        for lam, coeff in self.c_terms.items():
            acc += coeff / x ** lam
        for (lam, p), coeff in self.d_terms.items():
            alpha, beta = self.group_base[p]
            acc += coeff / (alpha + beta * x) ** lam
        return acc


def _series_mul(a: list[Fraction], b: list[Fraction], order: int) -> list[Fraction]:
    out = [Fraction(0)] * order
    for i, ai in enumerate(a):
        if not ai or i >= order:
            continue
        for jj, bj in enumerate(b):
            if i + jj >= order:
                break
            if bj:
                out[i + jj] += ai * bj
    return out


def _series_pow_linear(A: Fraction, B: Fraction, expo: int, order: int) -> list[Fraction]:
    """Taylor coefficients of (A + B u)^{expo} around u = 0 (expo may be < 0)."""
    ratio = B / A
    out = []
    for i in range(order):
        out.append(binom_shifted(expo, i) * ratio ** i * A ** expo)
    return out


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for jj, bj in enumerate(b):
                if bj:
                    out[i + jj] += ai * bj
    return out


def decompose_power_product(a: int,
                            factors: Sequence[tuple[int, Fraction, Fraction, int]]
                            ) -> PartialFraction:
    """Exact partial fractions of x^a * prod (alpha + beta x)^{-m}."""
    groups: dict[Fraction, list[tuple[int, Fraction, Fraction, int]]] = {}
    for p, alpha, beta, m in factors:
        if alpha <= 0 or beta <= 0:
            raise ValueError("linear factors need positive coefficients")
        groups.setdefault(alpha / beta, []).append((p, alpha, beta, m))

    const = Fraction(1)
    merged: list[tuple[int, Fraction, Fraction, int]] = []   # (rep, A, B, M)
    for members in groups.values():
        members = sorted(members)
        rep, A, B, _ = members[0]
        M = 0
        for p, alpha, beta, m in members:
            M += m
            t = beta / B          # alpha + beta x = t (A + B x)
            if t != 1:
                const *= t ** (-m)
        merged.append((rep, A, B, M))

    result = PartialFraction(
        a=a,
        factors=tuple(factors),
        poly=(),
        group_base={rep: (A, B) for rep, A, B, _ in merged},
    )

    # Pole at x = 0: coefficients come from the Taylor expansion of the
    # product of the linear factors' negative powers.
    if a < 0:
        order = -a
        G = [Fraction(1)] + [Fraction(0)] * (order - 1)
        for _, A, B, M in merged:
            G = _series_mul(G, _series_pow_linear(A, B, -M, order), order)
        for lam in range(1, -a + 1):
            coeff = const * G[-a - lam]
            if coeff:
                result.c_terms[lam] = coeff

    # Poles at the group roots.
    for gi, (rep, A, B, M) in enumerate(merged):
        root = -A / B
        order = M
        H = [Fraction(1)] + [Fraction(0)] * (order - 1)
        if a >= 0:
            xa = [binom_shifted(a, i) * root ** (a - i) if i <= a else Fraction(0)
                  for i in range(order)]
        else:
            xa = _series_pow_linear(root, Fraction(1), a, order)
        H = _series_mul(H, xa, order)
        for gj, (_, A2, B2, M2) in enumerate(merged):
            if gj == gi:
                continue
            C0 = A2 + B2 * root
            H = _series_mul(H, _series_pow_linear(C0, B2, -M2, order), order)
        for lam in range(1, M + 1):
            coeff = const * H[M - lam] * B ** (lam - M)
            if coeff:
                result.d_terms[(lam, rep)] = coeff

    # Polynomial part (nonzero only when the x-power dominates).
    total_m = sum(M for _, _, _, M in merged)
    if a >= total_m:
        den = [Fraction(1)]
        for _, A, B, M in merged:
            for _ in range(M):
                den = _poly_mul(den, [A, B])
        num = [Fraction(0)] * a + [Fraction(1)]
        quot = [Fraction(0)] * (a - total_m + 1)
        rem = list(num)
        for i in range(a - total_m, -1, -1):
            coef = rem[i + total_m] / den[total_m]
            quot[i] = coef
            if coef:
                for jj, dc in enumerate(den):
                    rem[i + jj] -= coef * dc
        result.poly = tuple(c * const for c in quot)
    return result


def _pf_inputs(ctx: QContext, f: int, v: dict[int, dict[int, int]],
               w: dict[int, tuple[int, ...]]
               ) -> tuple[int, list[tuple[int, Fraction, Fraction, int]]]:
    a = -ctx.target.Nprime[f] - 1 + _w_column(ctx, w, f)
    sizes = _v_sizes(ctx, v) if ctx.ps else {}
    factors = [(p, ctx.spec.c[ctx.j][p], ctx.spec.c[f][p],
                ctx.target.N[p] + 1 + sizes.get(p, 0))
               for p in ctx.ps]
    return a, factors


def partial_fractions(ctx: QContext, f: int, v: dict[int, dict[int, int]],
                      w: dict[int, tuple[int, ...]]) -> PartialFraction:
    """Decomposition of the endpoint integrand for the released form f."""
    if f == ctx.j:
        raise ValueError("released index must differ from j")
    a, factors = _pf_inputs(ctx, f, v, w)
    return decompose_power_product(a, factors)


def f_constant(ctx: QContext, f: int, v: dict[int, dict[int, int]],
               w: dict[int, tuple[int, ...]]) -> KValue:
    """Endpoint-stable part of the [eps, 1] integral of the decomposition.

    Polynomial part: minus the constant term of its primitive vanishing at 1.
    x^{-lam} terms (lam >= 2): -C_lam / (lam - 1); the lam = 1 term only
    produces ln(eps) and drops out.  Linear-factor terms integrate in closed
    form; their lam = 1 pieces give logarithms of rational ratios, which
    decompose into prime logs.
    """
    pf = partial_fractions(ctx, f, v, w)
    rational = -pf.e_const
    for lam, coeff in pf.c_terms.items():
        if lam >= 2:
            rational -= coeff / (lam - 1)
    out = KValue({Atom.one(): rational})
    for (lam, p), coeff in pf.d_terms.items():
        alpha, beta = pf.group_base[p]
        if lam == 1:
            out = out + kv_ln_rational(1 + beta / alpha).scale(coeff / beta)
        else:
            bracket = Fraction(1) / (alpha + beta) ** (lam - 1) \
                - Fraction(1) / alpha ** (lam - 1)
            out = out + KValue({Atom.one(): -coeff / ((lam - 1) * beta) * bracket})
    return out
