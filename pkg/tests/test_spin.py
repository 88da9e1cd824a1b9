import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cliffwave.algebra import Multivector, reflect
from cliffwave.spin import SpinQuadrature, Spinor, haar_quadrature, rotate, spinor_from_vectors


def rot2(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def test_spinor_from_vectors_examples():
    assert spinor_from_vectors([[1.0, 0.0], [1.0, 0.0]]).value == -1
    assert spinor_from_vectors([[1.0, 0.0], [0.0, 1.0]]).value == Multivector.blade(2, "e12")
    with pytest.raises(ValueError):
        spinor_from_vectors([])
    with pytest.raises(ValueError):
        spinor_from_vectors([[1.0, 0.0]])
    with pytest.raises(ValueError):
        spinor_from_vectors([[1.0, 0.0], [0.0, 2.0]])


def test_identity_spinor_acts_trivially():
    x = np.array([0.3, -2.0, 1.1])
    assert np.array_equal(rotate(Spinor.identity(3), x), x)
    s = spinor_from_vectors([[1.0, 0.0], [1.0, 0.0]])
    assert np.allclose(rotate(s, [0.5, 0.25]), [0.5, 0.25], atol=0)


def test_planar_quarter_turn_orientation():
    # s(pi/4) rotates by +pi/2: e1 -> e2
    s = Spinor(Multivector.from_dict(2, {"1": 1 / math.sqrt(2), "e12": 1 / math.sqrt(2)}))
    assert np.allclose(rotate(s, [1.0, 0.0]), [0.0, 1.0], atol=1e-15)


def test_double_reflection_in_three_dimensions():
    s = spinor_from_vectors([[1.0, 0, 0], [0, 1.0, 0]])
    assert np.allclose(s.matrix(), np.diag([-1.0, -1.0, 1.0]), atol=0)


@given(st.floats(-10, 10))
def test_spin2_matches_rotation_matrix(phi):
    s = Spinor.planar(phi)
    assert np.abs(s.matrix() - rot2(2 * phi)).max() <= 1e-12


def test_spin2_hundred_random_angles(rng):
    for phi in rng.uniform(0, 2 * math.pi, 100):
        x = rng.normal(size=2)
        assert np.abs(rotate(Spinor.planar(phi), x) - rot2(2 * phi) @ x).max() <= 1e-12


@given(st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_rotation_equals_composed_reflections(pairs, seed):
    rng = np.random.default_rng(seed)
    ws = rng.normal(size=(2 * pairs, 3))
    ws /= np.linalg.norm(ws, axis=1, keepdims=True)
    s = spinor_from_vectors(ws)
    x = rng.normal(size=3)
    expected = x
    for w in ws[::-1]:
        expected = reflect(w, expected)
    assert np.allclose(rotate(s, x), expected, atol=1e-12)


@given(st.integers(0, 2**32 - 1))
def test_rotation_is_orthogonal(seed):
    rng = np.random.default_rng(seed)
    q = rng.normal(size=4)
    s = Spinor.from_quaternion(q / np.linalg.norm(q))
    x, y = rng.normal(size=(2, 3))
    rx, ry = rotate(s, x), rotate(s, y)
    assert abs(np.linalg.norm(rx) - np.linalg.norm(x)) <= 1e-12 * max(1, np.linalg.norm(x))
    assert abs(np.dot(rx, ry) - np.dot(x, y)) <= 1e-12 * max(1, np.linalg.norm(x) * np.linalg.norm(y))
    R = s.matrix()
    assert np.allclose(R.T @ R, np.eye(3), atol=1e-12)
    assert np.linalg.det(R) == pytest.approx(1.0, abs=1e-12)


def test_non_unit_and_odd_spinors_rejected():
    with pytest.raises(ValueError):
        Spinor(Multivector.scalar(2, 2.0))
    with pytest.raises(ValueError):
        Spinor(Multivector.blade(2, "e1"))
    with pytest.raises(ValueError):
        rotate(Multivector.scalar(2, 0.5), [1.0, 0.0])


def test_haar_quadrature_n2_nodes():
    q = haar_quadrature(2, 4)
    phis = [math.atan2(s.value["e12"].real, s.value["1"].real) % (2 * math.pi) for s in q.nodes]
    assert np.allclose(phis, [0, math.pi / 2, math.pi, 3 * math.pi / 2], atol=1e-15)
    assert np.allclose(q.weights, 0.25, atol=0)


@pytest.mark.parametrize("n, count", [(2, 1), (2, 7), (3, 1), (3, 100)])
def test_quadrature_has_unit_mass(n, count):
    q = haar_quadrature(n, count)
    assert q.integrate(lambda s: 1.0) == pytest.approx(1.0, abs=1e-14)


def test_n3_mean_matrix_entry_vanishes():
    q = haar_quadrature(3, 512)
    e1 = np.array([1.0, 0.0, 0.0])
    value = q.integrate(lambda s: float(np.dot(rotate(s, e1), e1)))
    assert abs(value) <= 2e-2


def test_n3_nodes_are_unit_even_spinors():
    q = haar_quadrature(3, 64)
    for s in q.nodes:
        assert s.value.odd() == 0
        assert (s.value * s.conj()).isclose(1.0)


@pytest.mark.parametrize("n", [2, 3])
def test_sphere_coverage_mean_shrinks(n):
    xi = np.arange(1.0, n + 1.0)
    means = []
    for count in (16, 64, 256):
        mats = haar_quadrature(n, count).matrices()
        pts = np.einsum("pji,j->pi", mats, xi)
        assert np.allclose(np.linalg.norm(pts, axis=1), np.linalg.norm(xi), atol=1e-12)
        means.append(np.linalg.norm(pts.mean(axis=0)))
    # planar nodes are equispaced, so the mean is zero to round-off at every count
    assert means[-1] <= max(means[0], 1e-12)
    assert means[-1] <= 0.05 * np.linalg.norm(xi)


def test_unsupported_dimension():
    with pytest.raises(ValueError):
        haar_quadrature(4, 10)


def test_quadrature_csv_roundtrip():
    q = haar_quadrature(3, 10)
    text = q.to_csv()
    assert text.splitlines()[0] == "1,e1,e2,e12,e3,e13,e23,e123,weight"
    back = SpinQuadrature.from_csv(text)
    assert np.array_equal(back.coefficient_array(), q.coefficient_array())
    assert np.array_equal(back.weights, q.weights)
    assert back.to_csv() == text


def test_quadrature_weights_validated():
    s = Spinor.identity(2)
    with pytest.raises(ValueError):
        SpinQuadrature((s, s), np.array([0.5, 0.6]))
    with pytest.raises(ValueError):
        SpinQuadrature((s, s), np.array([1.5, -0.5]))
