import random
from fractions import Fraction as F

import mpmath as mp
import numpy as np
import pytest

from dirzeta.barnes import (BarnesSpec, barnes_derivative, barnes_one_value,
                            barnes_reduce, barnes_value)
from dirzeta.engine import ContinuationParams, continuation_eval, value_at
from dirzeta.exact import hurwitz_zeta_neg
from dirzeta.kvalue import Atom, KValue, kv_eval, kv_ln_rational, kv_zph
from dirzeta.model import Direction, HurwitzSpec, TargetPoint
from dirzeta.numeric import Precision

PREC = Precision(30)


def test_spec_derived_quantities():
    spec = BarnesSpec([0, 0], [1, 1], [F(1), F(2)])
    assert spec.wstar == 2
    assert spec.betas == (2, 1)
    spec = BarnesSpec([0, 0], [1, 1], [F(2), F(3)])
    assert spec.wstar == 6
    assert spec.betas == (3, 2)
    spec = BarnesSpec([1], [1], [F(3, 4)])
    assert spec.wstar == F(3, 4)
    assert spec.betas == (1,)


def test_reduce_identity_cases():
    red = barnes_reduce(BarnesSpec([0, 0], [1, 1], [1, 1]))
    assert red.base == 1 and red.power_factor == 1
    assert red.terms == (((F(1), F(1)), F(1)),)
    red = barnes_reduce(BarnesSpec([2], [F(1, 2)], [2]))
    assert red.base == 2 and red.power_factor == 1
    assert red.terms == (((F(1, 2),), F(1)),)
    red = barnes_reduce(BarnesSpec([1, 0], [1, 1], [1, 2]))
    assert red.base == 2 and red.power_factor == 2
    assert [t[0] for t in red.terms] == [(F(1, 2), F(1)), (F(1), F(1))]


def _direct_sum(R, d, w, s, box):
    grids = np.meshgrid(*[np.arange(box)] * len(R), indexing="ij")
    acc = np.ones_like(grids[0], dtype=float)
    lin = np.zeros_like(grids[0], dtype=float)
    for p, (r, dp, wp) in enumerate(zip(R, d, w)):
        shifted = grids[p] + float(dp)
        acc = acc * shifted ** r
        lin = lin + float(wp) * shifted
    return float((acc * lin ** (-s)).sum())


@pytest.mark.parametrize("R,d,w,s", [
    ((0, 0), (F(1), F(1)), (F(1), F(2)), 5.0),
    ((0, 0), (F(1, 2), F(3, 2)), (F(3, 2), F(2, 3)), 5.0),
    ((1, 1), (F(1), F(1)), (F(1), F(2)), 9.0),
])
def test_reduce_matches_direct_summation(R, d, w, s):
    spec = BarnesSpec(R, d, w)
    red = barnes_reduce(spec)
    lhs = _direct_sum(R, d, w, s, 2500)
    rhs = sum(float(weight) * _direct_sum(R, dvec, [F(1)] * len(R), s, 2500)
              for dvec, weight in red.terms)
    rhs *= float(red.base) ** (-s) * float(red.power_factor)
    assert abs(lhs - rhs) < 1e-10


def test_one_value_p1_collapse_exact():
    for r in range(5):
        for m in range(5):
            for d in (F(1), F(2, 3), F(7, 5)):
                assert barnes_one_value([r], m, [d]) \
                    == hurwitz_zeta_neg(m + r, d)


def test_value_p1_collapse_with_weight():
    # single-variable: the weight scales out completely
    for r in range(3):
        for m in range(3):
            w = F(3, 4)
            got = barnes_value([r], m, [F(5, 6)], [w])
            assert got == w ** m * hurwitz_zeta_neg(m + r, F(5, 6))


def test_one_value_formula_vs_direct_summation_generic_s():
    # the closed finite expansion is an identity in s; test it numerically
    # at a convergent point away from its poles
    from dirzeta.numeric import zeta_em
    from math import factorial
    import itertools
    rng = random.Random(2)
    for R, d in [((0, 0), (F(1), F(1))), ((1, 0), (F(1, 2), F(4, 3))),
                 ((1, 1), (F(1), F(2)))]:
        s = sum(R) + len(R) + 3
        P = len(R)
        dsum = sum(d, F(0))
        with mp.workprec(PREC.working_bits):
            total = mp.mpf(0)
            for size in range(P):
                for pset in itertools.combinations(range(P), size):
                    pc = [p for p in range(P) if p not in pset]
                    budget = sum(R[p] for p in pc) + len(pc) - 1
                    fact = 1
                    for p in pc:
                        fact *= factorial(R[p])
                    for t in range(budget + 1):
                        kprime = budget - t
                        lead = zeta_em(s - kprime, dsum, PREC) \
                            / factorial(kprime)
                        for k in itertools.product(range(t + 1), repeat=size):
                            if sum(k) != t:
                                continue
                            term = lead * (-1) ** t
                            for p, kp in zip(pset, k):
                                ex = hurwitz_zeta_neg(R[p] + kp, d[p])
                                term *= mp.mpf(ex.numerator) / ex.denominator \
                                    / factorial(kp)
                            total += fact * term
            direct = _direct_sum(R, d, [F(1)] * P, float(s), 3000)
            assert abs(float(total) - direct) < 1e-9


def test_one_value_matches_single_form_closed_value():
    # P = 2 unit weights against two independent routes
    spec = HurwitzSpec([[1, 1]], [1, 1])
    direction = Direction([0, 0], [1])
    for m in range(3):
        got = barnes_one_value([0, 0], m, [1, 1])
        assert got == value_at(spec, direction, TargetPoint([0, 0], [m]))
        # explicit: sum (n'+1)(n'+2)^{m-s} = zeta(s-m-1,2) - zeta(s-m,2)
        assert got == hurwitz_zeta_neg(m + 1, 2) - hurwitz_zeta_neg(m, 2)


def test_value_consistency_vs_single_form_closed_formula_random():
    rng = random.Random(77)
    for _ in range(20):
        P = rng.choice([1, 2])
        w = [F(rng.randint(1, 4), rng.randint(1, 3)) for _ in range(P)]
        d = [F(rng.randint(1, 5), rng.randint(1, 3)) for _ in range(P)]
        R = [rng.randint(0, 2) for _ in range(P)]
        m = rng.randint(0, 2)
        spec = HurwitzSpec([w], d)
        direction = Direction([0] * P, [1])
        target = TargetPoint(R, [m])
        assert value_at(spec, direction, target) == barnes_value(R, m, d, w)


def test_derivative_p1_closed_identity():
    # d/ds[c^{-s} zeta(s-r,d)] at -m = c^m(-ln c zeta(-m-r,d) + zeta'(-m-r,d))
    for r in range(3):
        for m in range(2):
            c = F(5, 2)
            d = F(3, 4)
            got = barnes_derivative([r], m, [d], [c])
            want = kv_ln_rational(c).scale(-c ** m * hurwitz_zeta_neg(m + r, d)) \
                + kv_zph(m + r, d).scale(c ** m)
            assert got == want


def test_derivative_two_variable_closed_form():
    # zetaB(0,s,(1,1)|(1,2)) = 2^{-s}[zeta(s-1,3/2) - zeta(s,3/2)/2
    #                                  + zeta(s-1,2) - zeta(s,2)]
    got = barnes_derivative([0, 0], 0, [1, 1], [1, 2])
    want = KValue({Atom.ln_prime(2): F(-1, 4), Atom.zp(1): F(1, 2),
                   Atom.zp(0): -1})
    assert got == want
    assert barnes_value([0, 0], 0, [1, 1], [1, 2]) == F(11, 24)


def test_derivative_scaling_law_numeric():
    with mp.workprec(PREC.working_bits):
        R, m, d, w = [0, 1], 1, [F(1), F(3, 2)], [F(1, 2), F(2)]
        lam = F(3)
        lhs = kv_eval(barnes_derivative(R, m, d, [lam * x for x in w]), PREC)
        val = barnes_value(R, m, d, w)
        rhs = lam ** m * (kv_eval(kv_ln_rational(lam).scale(-val), PREC)
                          + kv_eval(barnes_derivative(R, m, d, w), PREC))
        assert abs(lhs - rhs) < mp.mpf("1e-10") * max(1, abs(rhs))


def test_derivative_vs_continuation_finite_differences():
    # central differences of the one-form continuation at s = +-1e-3
    # with one Richardson level
    spec = HurwitzSpec([[1, 2]], [1, 1])
    direction = Direction([0, 0], [1])
    target = TargetPoint([0, 0], [0])
    params = ContinuationParams(delta=1e-4)

    def zeta_b(s):
        return continuation_eval(spec, direction, target, s, params)

    eps = F(1, 1000)
    d1 = (zeta_b(eps) - zeta_b(-eps)) / (2 * float(eps))
    d2 = (zeta_b(2 * eps) - zeta_b(-2 * eps)) / (4 * float(eps))
    fd = (4 * d1 - d2) / 3
    want = float(kv_eval(barnes_derivative([0, 0], 0, [1, 1], [1, 2]), PREC))
    assert abs(fd - want) < 1e-5
