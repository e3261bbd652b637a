import json
from fractions import Fraction as F

import pytest

from dirzeta.model import (Direction, HurwitzSpec, SpecError, TargetPoint,
                           load_spec, parse_problem, preset, problem_to_dict,
                           save_spec, validate)


def test_presets():
    so5 = preset("so5")
    assert so5.spec.P == 2 and so5.spec.Q == 2
    assert so5.spec.c == ((F(1), F(1)), (F(1), F(2)))
    assert so5.weyl_denominator == 6
    assert so5.spec.dprime == (F(2), F(3))
    g2 = preset("g2")
    assert g2.spec.Q == 4 and g2.weyl_denominator == 120
    assert g2.spec.dprime == (F(2), F(3), F(4), F(5))
    with pytest.raises(SpecError):
        preset("e8")


def test_dprime_recomputed():
    spec = HurwitzSpec([[1, 2], [3, 4]], [F(1, 2), F(1, 3)])
    assert spec.dprime == (F(1, 2) + F(2, 3), F(3, 2) + F(4, 3))
    # idempotent
    assert spec.dprime == spec.dprime


def test_validate_accepts_presets():
    so5 = preset("so5")
    validate(so5.spec, so5.direction, so5.origin)


def test_validate_rejects_zero_coefficient():
    spec = HurwitzSpec([[1, 1], [1, 0]], [1, 1])
    with pytest.raises(SpecError, match=r"c\[1\]\[1\] not > 0"):
        validate(spec)


def test_validate_rejects_dimension_mismatch():
    spec = HurwitzSpec([[1, 1]], [1, 1])
    with pytest.raises(SpecError, match="length"):
        validate(spec, Direction([1], [1]), TargetPoint([0, 0], [0]))


def test_validate_rejects_bad_direction():
    spec = HurwitzSpec([[1]], [1])
    with pytest.raises(SpecError, match="muprime"):
        validate(spec, Direction([1], [0]), None)
    with pytest.raises(SpecError, match=r"mu\[0\]"):
        validate(spec, Direction([-1], [1]), None)


def test_config_roundtrip(tmp_path):
    spec = HurwitzSpec([[1, 1], [1, 2]], [F(1, 2), 1])
    direction = Direction([F(1, 3), 0], [1, F(2, 5)])
    target = TargetPoint([0, 1], [2, 0])
    path = tmp_path / "cfg.json"
    save_spec(path, spec, direction, target)
    spec2, dir2, tgt2 = load_spec(path)
    assert spec2 == spec and dir2 == direction and tgt2 == target


def test_config_example_shape(tmp_path):
    data = {"P": 2, "Q": 2, "c": [["1", "1"], ["1", "2"]], "d": ["1", "1"],
            "mu": ["1", "1"], "muprime": ["1", "1"], "N": [0, 0],
            "Nprime": [0, 0]}
    spec, direction, target = parse_problem(data)
    assert spec == preset("so5").spec
    assert problem_to_dict(spec, direction, target) == data


def test_parse_errors():
    with pytest.raises(SpecError, match="missing field"):
        parse_problem({"P": 1})
    bad = {"P": 1, "Q": 1, "c": [["0"]], "d": ["1"], "mu": ["0"],
           "muprime": ["1"], "N": [0], "Nprime": [0]}
    with pytest.raises(SpecError, match="not > 0"):
        parse_problem(bad)


def test_load_reports_json_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{\n  broken\n}")
    with pytest.raises(SpecError, match="line 2"):
        load_spec(path)
