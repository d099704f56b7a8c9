import json

import numpy as np
import pytest

from generators import random_curve, random_degree, random_moduli_point
from tropspine import (
    CombinatorialTree,
    ComplexLine,
    SamplingScheme,
    ToricDegree,
    Window,
    epsilon,
    from_moduli,
    line_degree,
)
from tropspine.errors import SchemaViolation
from tropspine.io import dumps, from_dict, loads, to_dict
from tropspine.limits import Family, Monomial, decorate, make_datum

PATH = CombinatorialTree(3, ((0, 1), (1, 2)), (0, 0, 1, 1, 2, 2))


def same_text(obj):
    text = dumps(obj)
    back = loads(text)
    assert type(back) is type(obj)
    assert dumps(back) == text
    return back


def test_degree_round_trip():
    assert same_text(line_degree(3)) == line_degree(3)


def test_curve_round_trip_exact():
    rng = np.random.default_rng(51)
    for _ in range(100):
        curve = from_moduli(random_moduli_point(rng))
        back = same_text(curve)
        assert np.abs(back.positions - curve.positions).max() <= 1e-15


def test_all_domain_types_round_trip():
    rng = np.random.default_rng(52)
    D = ToricDegree(((1, 1), (0, -1), (-1, 0), (-1, 0), (1, -1), (0, 1)))
    objects = [
        CombinatorialTree(2, ((0, 1),), (1, 0, 0, 1)),
        random_moduli_point(rng),
        ComplexLine([0, -1, 2j]),
        random_curve(rng, random_degree(rng)),
        SamplingScheme(10, 12, 1e-3, 1e3),
        Window(np.array([-1.0, 0.5]), np.array([2.0, 3.0])),
        epsilon(4),
        decorate(PATH, D),
        make_datum(D, PATH, (0, 1), kept=(0, 2)),
        Monomial(1 - 2j, 0.5, 0.25),
        Family(line_degree(2), (Monomial(0), Monomial(-1, 1)), (Monomial(1), Monomial(1))),
    ]
    for obj in objects:
        same_text(obj)


def test_floats_are_exact_and_finite():
    x = 0.1 + 0.2
    w = Window(np.array([x, -x]), np.array([1 / 3, 2 / 3]))
    assert np.array_equal(loads(dumps(w)).lo, [x, -x])
    with pytest.raises(ValueError):
        json.dumps(to_dict(Window(np.array([0.0]), np.array([np.inf]))), allow_nan=False)


def test_schema_violations_carry_pointers():
    with pytest.raises(SchemaViolation) as e:
        from_dict({"type": "ToricDegree", "vectors": [[1, 0], [0]]})
    assert e.value.pointer == "/vectors/1"
    with pytest.raises(SchemaViolation) as e:
        from_dict({"type": "ComplexLine", "punctures": "x"})
    assert e.value.pointer == "/punctures"
    with pytest.raises(SchemaViolation) as e:
        from_dict({"type": "Nope"})
    assert e.value.pointer == "/type"
    with pytest.raises(SchemaViolation):
        loads("{bad")
