import random
from fractions import Fraction as F

import pytest

from dirzeta.exact import harmonic
from dirzeta.kvalue import Atom, KValue, kv_ln_rational
from dirzeta.model import Direction, HurwitzSpec, TargetPoint, preset
from dirzeta.qengine import (QContext, decompose_power_product, f_constant,
                             partial_fractions, q0, q1)


def ctx_for(spec, j, pset, k, *, direction=None, target=None):
    direction = direction or Direction.ones(spec.P, spec.Q)
    target = target or TargetPoint.origin(spec.P, spec.Q)
    return QContext(spec, direction, target, j, frozenset(pset), tuple(k))


def test_q0_one_form_is_weighted_monomials():
    # single linear form, empty subset: the w-mass telescopes onto it
    spec = HurwitzSpec([[F(3, 2), 5]], [1, 1])
    ctx = ctx_for(spec, 0, [], (2, 1), direction=Direction([0, 0], [1]))
    assert q0(ctx) == F(3, 2) ** 2 * 5


def test_q0_one_form_random_rows():
    rng = random.Random(31)
    for _ in range(100):
        row = [F(rng.randint(1, 9), rng.randint(1, 5)) for _ in range(2)]
        spec = HurwitzSpec([row], [1, 1])
        k = (rng.randint(0, 3), rng.randint(0, 3))
        ctx = ctx_for(spec, 0, [], k, direction=Direction([0, 0], [1]))
        assert q0(ctx) == row[0] ** k[0] * row[1] ** k[1]


def test_q0_one_form_nonempty_subset_carries_corner_constant():
    # with the subset occupied, the zero-dimensional leftover integral
    # contributes c^(-N_p - 1); the simpler published variant drops it
    spec = HurwitzSpec([[F(3), F(5)]], [1, 1])
    ctx = ctx_for(spec, 0, [0], (2,), direction=Direction([0, 0], [1]))
    assert q0(ctx) == F(1, 3) * 25
    assert q0(ctx, corner_factor=False) == 25


def test_q0_so5_examples():
    so5 = preset("so5")
    ctx = ctx_for(so5.spec, 0, [], (1, 0))
    assert q0(ctx) == 1  # mass forced onto the residual form: c[0][0]
    ctx = ctx_for(so5.spec, 0, [0], (0,))
    assert q0(ctx) == 1
    # the corner constant is visible where c[j][p] != 1
    ctx = ctx_for(so5.spec, 1, [1], (0,))
    assert q0(ctx) == F(1, 2)
    assert q0(ctx, corner_factor=False) == 1


def test_q1_one_form_vanishes():
    spec = HurwitzSpec([[1, 1]], [1, 1])
    ctx = ctx_for(spec, 0, [], (1, 2), direction=Direction([0, 0], [1]))
    assert q1(ctx).is_zero()


def test_q1_so5_origin_is_gamma():
    so5 = preset("so5")
    ctx = ctx_for(so5.spec, 0, [], (0, 0))
    assert q1(ctx) == KValue({Atom.gamma(): 1})


def test_q1_gamma_coefficient_is_muprime_weighted_q0():
    so5 = preset("so5")
    for j in range(2):
        for pset, k in ([(), (0, 0)], [(0,), (1,)], [(1,), (2,)]):
            ctx = ctx_for(so5.spec, j, pset, k)
            weight = sum(so5.direction.muprime[q] for q in range(2) if q != j)
            assert q1(ctx).coeff(Atom.gamma()) == weight * q0(ctx)


def test_q1_atoms_stay_in_rational_gamma_log_span():
    g2 = preset("g2")
    for j in range(4):
        for pset, k in ([(), (1, 1)], [(0,), (2,)], [(1,), (0,)]):
            ctx = ctx_for(g2.spec, j, pset, k)
            for atom in q1(ctx).atoms():
                assert atom.kind in ("one", "gamma", "lnp")


def test_q1_corner_log_slope():
    # single form, subset occupied, mu_p > 0: the corner constant's slope
    # adds mu_p ln(c) to the bracket; with Q = 1 nothing else survives
    spec = HurwitzSpec([[F(3), F(1)]], [1, 1])
    ctx = ctx_for(spec, 0, [0], (0,), direction=Direction([1, 0], [1]))
    got = q1(ctx)
    assert got == kv_ln_rational(3).scale(q0(ctx))
    assert q1(ctx, corner_factor=False).is_zero()


def test_f_constant_examples():
    so5 = preset("so5")
    # released-form constants at the origin
    ctx = ctx_for(so5.spec, 0, [], (0, 0))
    w0 = {0: (0, 0), 1: (0, 0)}
    assert f_constant(ctx, 1, {}, w0).is_zero()
    # subset {p}, unit budget on the released form: + ln(1 + c_f/c_j)/c_f
    ctx = ctx_for(so5.spec, 0, [1], (0,))
    w_f = {0: (0, 1)}
    cf = so5.spec.c[1][1]
    cj = so5.spec.c[0][1]
    assert f_constant(ctx, 1, {1: {}}, w_f) == \
        kv_ln_rational(1 + cf / cj).scale(1 / cf)
    # unit budget on the residual form: - ln(1 + c_f/c_j)/c_j
    w_j = {0: (1, 0)}
    assert f_constant(ctx, 1, {1: {}}, w_j) == \
        kv_ln_rational(1 + cf / cj).scale(-1 / cj)


def test_f_constant_empty_subset_power_rule():
    # with no subset factors the endpoint integral of x^{a-1} leaves 1/a
    spec = HurwitzSpec([[1], [1]], [1])
    direction = Direction([1], [1, 1])
    target = TargetPoint([0], [0, 2])
    ctx = QContext(spec, direction, target, 0, frozenset(), (0,))
    # released form f=1 has budget N'_f = 2; w(f)=0 gives exponent -3
    got = f_constant(ctx, 1, {}, {0: (0, 0)})
    assert got == KValue({Atom.one(): F(-1, 2)})


def test_partial_fraction_recombination_50_random():
    rng = random.Random(41)
    for _ in range(50):
        P = rng.choice([1, 2])
        Q = rng.choice([2, 3, 4])
        c = [[F(rng.randint(1, 4), rng.randint(1, 2)) for _ in range(P)]
             for _ in range(Q)]
        d = [F(1)] * P
        spec = HurwitzSpec(c, d)
        direction = Direction([1] * P, [1] * Q)
        target = TargetPoint([rng.randint(0, 2) for _ in range(P)],
                             [rng.randint(0, 2) for _ in range(Q)])
        j = rng.randrange(Q)
        f = rng.choice([q for q in range(Q) if q != j])
        size = rng.randint(0, P - 1)
        pset = frozenset(rng.sample(range(P), size))
        pc = [p for p in range(P) if p not in pset]
        k = tuple(rng.randint(0, 2) for _ in pc)
        ctx = QContext(spec, direction, target, j, pset, k)
        w = {p: tuple(rng.randint(0, 1) for _ in range(Q)) for p in pc}
        # w must satisfy |w_p| = k_p: rebuild consistently
        w = {}
        for p, kp in zip(pc, k):
            parts = [0] * Q
            for _ in range(kp):
                parts[rng.randrange(Q)] += 1
            w[p] = tuple(parts)
        v = {p: {} for p in pset}
        for p in pset:
            for q in range(Q):
                if q not in (j, f) and rng.random() < 0.4:
                    v[p][q] = rng.randint(0, 2)
        pf = partial_fractions(ctx, f, v, w)
        for i in range(20):
            x = F(rng.randint(1, 50), rng.randint(1, 25))
            assert pf.evaluate(x) == pf.source_evaluate(x)


def test_partial_fraction_merged_roots():
    # proportional factors merge into one root group
    pf = decompose_power_product(
        -2, [(0, F(1), F(2), 1), (1, F(2), F(4), 2)])
    for x in (F(1, 3), F(5, 2), F(7)):
        assert pf.evaluate(x) == pf.source_evaluate(x)
    assert set(p for (_, p) in pf.d_terms) == {0}


def test_partial_fraction_polynomial_branch():
    pf = decompose_power_product(4, [(0, F(1), F(1), 1)])
    assert pf.poly  # genuine polynomial part
    for x in (F(2), F(1, 2), F(9, 4)):
        assert pf.evaluate(x) == pf.source_evaluate(x)
