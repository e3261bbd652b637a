import random
from fractions import Fraction as F

import mpmath as mp
import numpy as np
import pytest

from dirzeta.exact import zeta_neg
from dirzeta.kvalue import (Atom, KValue, kv_equals, kv_eval, kv_ln_rational,
                            kv_rational, kv_zph)
from dirzeta.numeric import DomainError, Precision, ln_gamma, zeta_em_deriv

PREC = Precision(30)


def test_atom_validation():
    with pytest.raises(ValueError):
        Atom.ln_prime(6)
    with pytest.raises(ValueError):
        Atom.zph(0, F(3, 2))
    with pytest.raises(ValueError):
        Atom.zph(0, F(1, 2))
    Atom.zph(2, F(1, 3))


def test_atom_encoding_roundtrip():
    for atom in (Atom.one(), Atom.gamma(), Atom.ln_prime(5), Atom.ln_pi(),
                 Atom.zp(3), Atom.zph(1, F(1, 3))):
        assert Atom.decode(atom.encode()) == atom


def test_ln_rational_examples():
    assert kv_ln_rational(6) == KValue({Atom.ln_prime(2): 1, Atom.ln_prime(3): 1})
    assert kv_ln_rational(1).is_zero()
    assert kv_ln_rational(F(4, 3)) == KValue({Atom.ln_prime(2): 2,
                                              Atom.ln_prime(3): -1})
    with pytest.raises(DomainError):
        kv_ln_rational(F(-1, 2))


def test_linear_ops():
    ln2 = kv_ln_rational(2)
    assert ln2 + ln2 == ln2.scale(2)
    assert Atom.gamma() not in (KValue({Atom.gamma(): 0})).coeffs
    assert kv_equals(kv_ln_rational(F(4, 3)) + kv_ln_rational(3),
                     kv_ln_rational(2).scale(2))


def test_zph_canonical_examples():
    assert kv_zph(0, 1) == KValue({Atom.zp(0): 1})
    assert kv_zph(0, F(1, 2)) == kv_ln_rational(2).scale(F(-1, 2))
    expected = KValue({Atom.zph(1, F(1, 3)): 1}) \
        + kv_ln_rational(F(1, 3)).scale(F(1, 3)) \
        + kv_ln_rational(F(4, 3)).scale(F(4, 3))
    assert kv_zph(1, F(7, 3)) == expected


def test_zph_half_identity_folds_rational_zeta():
    # at even positive index the trivial zero kills the log part too
    n = 2
    got = kv_zph(n, F(1, 2))
    assert got.coeff(Atom.ln_prime(2)) == F(1, 4) * zeta_neg(n) == 0
    assert got.coeff(Atom.zp(n)) == F(1, 4) - 1


def test_eval_examples():
    with mp.workprec(PREC.working_bits):
        v = kv_eval(kv_ln_rational(6), PREC)
        assert abs(v - mp.log(6)) < mp.mpf(10) ** -25
        v = kv_eval(KValue({Atom.zph(0, F(1, 3)): 1}), PREC)
        ref = ln_gamma(F(1, 3), PREC) - mp.log(2 * mp.pi) / 2
        assert abs(v - ref) < mp.mpf(10) ** -25
        g = kv_eval(KValue({Atom.gamma(): 1}), PREC)
        assert abs(g - mp.mpf("0.57721566490153286")) < mp.mpf(10) ** -15


def test_ln_rational_exp_roundtrip_100():
    rng = random.Random(23)
    with mp.workprec(PREC.working_bits):
        for _ in range(100):
            r = F(rng.randint(1, 10 ** 6), rng.randint(1, 10 ** 6))
            v = kv_eval(kv_ln_rational(r), PREC)
            back = mp.e ** v
            ref = mp.mpf(r.numerator) / r.denominator
            assert abs(back - ref) < mp.mpf("1e-12") * ref


def test_zph_eval_matches_shift_identity():
    rng = random.Random(9)
    with mp.workprec(PREC.working_bits):
        for _ in range(25):
            n = rng.randint(0, 3)
            d = F(rng.randint(1, 16), rng.randint(4, 9))  # in (0, 4]
            lhs = kv_eval(kv_zph(n, d), PREC)
            dm = mp.mpf(d.numerator) / d.denominator
            rhs = zeta_em_deriv(-n, d, PREC)
            assert abs(lhs - rhs) < mp.mpf("1e-10") * max(1, abs(rhs))


def test_basis_distinctness_smoke():
    # Vandermonde Gram in the atom values has full rank iff no two atoms
    # reduce to the same number: the reduction never conflates atoms.
    atoms = [Atom.one(), Atom.gamma(), Atom.ln_prime(2), Atom.ln_prime(3),
             Atom.ln_prime(5), Atom.ln_pi(), Atom.zp(0), Atom.zp(1)]
    vals = np.array([float(kv_eval(KValue({a: 1}), Precision(20)))
                     for a in atoms])
    V = np.vander(vals, len(vals), increasing=True)
    G = V @ V.T
    assert np.linalg.matrix_rank(G, tol=1e-8) == len(atoms)


def test_serialization_roundtrip():
    v = KValue({Atom.gamma(): F(1, 6), Atom.ln_prime(2): F(-5, 72),
                Atom.zph(1, F(1, 3)): 1, Atom.one(): F(3, 8)})
    items = v.to_json_list()
    assert [it["atom"] for it in items] == ["1", "gamma", "ln:2", "zph:1:1/3"]
    assert KValue.from_json_list(items) == v
