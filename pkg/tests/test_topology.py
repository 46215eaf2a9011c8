import time

import numpy as np
import pytest

from memflow import topology
from memflow.topology import (
    AnalyticVectorField,
    DegenerateZero,
    check_family,
    circle_rotation,
    double_well_1d,
    morse_signed_sum,
    poincare_hopf_sum,
    single_well_1d,
    sphere_height_gradient,
    torus_morse_gradient,
    zero_index,
    zeros_with_index,
)


def _planar(fn):
    return AnalyticVectorField("planar", "euclidean-box", fn, [np.zeros(2)], [topology._identity_chart()])


@pytest.mark.parametrize(
    "fn, expected",
    [
        (lambda p: np.array([p[0], p[1]]), 1),
        (lambda p: np.array([p[0], -p[1]]), -1),
        (lambda p: np.array([-p[0], -p[1]]), 1),
    ],
)
def test_zero_index_examples(fn, expected):
    assert zero_index(_planar(fn), np.zeros(2)) == expected


def test_degenerate_zero_is_reported():
    with pytest.raises(DegenerateZero, match="degenerate zero"):
        zero_index(_planar(lambda p: np.array([p[0] ** 3, p[1]])), np.zeros(2))


def test_non_zero_location_is_rejected():
    with pytest.raises(ValueError):
        zero_index(_planar(lambda p: np.array([p[0] + 1, p[1]])), np.zeros(2))


def test_poincare_hopf_examples():
    assert poincare_hopf_sum(sphere_height_gradient()) == 2
    assert poincare_hopf_sum(torus_morse_gradient()) == 0
    assert poincare_hopf_sum(circle_rotation()) == 0


def test_torus_zero_types():
    zeros = zeros_with_index(torus_morse_gradient(0.3))
    assert sorted(z.sign_index for z in zeros) == [-1, -1, 1, 1]


def test_morse_sum_examples():
    assert morse_signed_sum(double_well_1d()) == 1
    assert [z.morse_index for z in zeros_with_index(double_well_1d())] == [0, 1, 0]
    assert morse_signed_sum(single_well_1d()) == 1
    tilted = double_well_1d(0.1)
    assert len(tilted.known_zeros) == 3
    assert morse_signed_sum(tilted) == 1


def test_zero_lists_are_zeros():
    for name, (factory, (lo, hi), _, _) in topology.FAMILIES.items():
        for param in np.linspace(lo, hi, 7):
            vf = factory(float(param))
            for z in vf.known_zeros:
                assert np.max(np.abs(vf(z))) <= 1e-9


def test_index_is_chart_independent():
    vf = sphere_height_gradient(0.7)
    for z in vf.known_zeros:
        signs = {zero_index(vf, z, c) for c in topology.SPHERE_CHARTS if c.covers(z)}
        assert len(signs) == 1
    vf = torus_morse_gradient(0.4)
    for z in vf.known_zeros:
        signs = {zero_index(vf, z, c) for c in vf.charts if c.covers(z)}
        assert len(signs) == 1


def test_sweeps_hold_and_are_fast():
    start = time.perf_counter()
    for name in topology.FAMILIES:
        rows = check_family(name, 20)
        assert len(rows) == 20 and all(r.passed for r in rows)
    assert time.perf_counter() - start < 5.0


def test_circle_rejects_zeroful_wobble():
    with pytest.raises(ValueError):
        circle_rotation(1.0)
