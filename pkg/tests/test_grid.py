import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cliffwave.algebra import Multivector
from cliffwave.corpus import isotropic_gaussian, random_enveloped_field
from cliffwave.grid import (
    CliffordField,
    GridMismatchError,
    GridSpec,
    cauchy_schwarz_check,
    coordinate_multiply,
    inner_product,
    norm_l1,
    norm_l2,
)


def test_centered_grid_layout():
    g = GridSpec.centered(2, 65, 8.0)
    assert g.shape == (65, 65)
    assert g.spacing == (0.25, 0.25)
    assert g.cell_volume == 0.0625
    assert g.is_odd() and g.is_centered()
    assert g.index_of([0.0, 0.0]) == (32, 32)
    assert g.index_of([0.1, 0.0]) is None
    assert g.coords()[0, -1].tolist() == [-8.0, 8.0]


def test_grid_rejects_bad_specs():
    with pytest.raises(ValueError):
        GridSpec((5,), (0.0,), (0.0,))
    with pytest.raises(ValueError):
        GridSpec((5, 5), (1.0,), (0.0, 0.0))


def test_gaussian_inner_product_and_norms(ref_grid):
    f = isotropic_gaussian(ref_grid)
    ip = inner_product(f, f)
    assert ip.is_scalar(atol=0)
    assert abs(ip.scalar_part - math.pi) <= 1e-6
    assert norm_l2(f) ** 2 == pytest.approx(math.pi, abs=1e-6)
    assert norm_l1(f) == pytest.approx(2 * math.pi, abs=1e-6)
    assert inner_product(f, CliffordField.zeros(ref_grid)) == 0
    assert norm_l2(CliffordField.zeros(ref_grid)) == 0


def test_unit_vector_multiple_keeps_norm(ref_grid):
    f = isotropic_gaussian(ref_grid)
    e1f = Multivector.blade(2, "e1") * f
    assert inner_product(e1f, e1f).isclose(inner_product(f, f), atol=1e-12)


@pytest.mark.parametrize("k", [1, 2])
def test_coordinate_multiply(ref_grid, k):
    f = isotropic_gaussian(ref_grid)
    assert norm_l2(coordinate_multiply(f, k)) ** 2 == pytest.approx(math.pi / 2, abs=1e-6)
    one = CliffordField.from_scalar(ref_grid, np.ones(ref_grid.shape))
    assert np.array_equal(coordinate_multiply(one, k).data[..., 0].real, ref_grid.coords()[..., k - 1])


def test_coordinate_multiply_commutes(small_grid, rng):
    one = CliffordField.from_scalar(small_grid, np.ones(small_grid.shape))
    a = coordinate_multiply(coordinate_multiply(one, 1), 2)
    b = coordinate_multiply(coordinate_multiply(one, 2), 1)
    assert np.array_equal(a.data, b.data)
    # general data: two roundings in different order, so agreement is to the last bit
    f = random_enveloped_field(small_grid, rng)
    a = coordinate_multiply(coordinate_multiply(f, 1), 2)
    b = coordinate_multiply(coordinate_multiply(f, 2), 1)
    assert np.allclose(a.data, b.data, rtol=4.5e-16, atol=0)
    with pytest.raises(ValueError):
        coordinate_multiply(f, 3)
    with pytest.raises(ValueError):
        coordinate_multiply(f, 0)


@given(st.complex_numbers(min_magnitude=1e-6, max_magnitude=10, allow_nan=False, allow_infinity=False), st.integers(0, 2**32 - 1))
def test_norm_homogeneity(c, seed):
    g = GridSpec.centered(2, 17, 6.0)
    f = random_enveloped_field(g, np.random.default_rng(seed))
    assert norm_l2(c * f) == pytest.approx(abs(c) * norm_l2(f), rel=1e-12, abs=1e-300)


@given(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False), st.integers(0, 2**32 - 1))
def test_sesquilinearity(c, seed):
    grid = GridSpec.centered(2, 17, 6.0)
    rng = np.random.default_rng(seed)
    f, g, h = (random_enveloped_field(grid, rng) for _ in range(3))
    lhs = inner_product(f, g * c + h)
    rhs = inner_product(f, g) * c + inner_product(f, h)
    scale = 1 + norm_l2(f) * (abs(c) * norm_l2(g) + norm_l2(h))
    assert (lhs - rhs).magnitude() <= 1e-12 * scale


@given(st.integers(0, 2**32 - 1))
def test_inner_product_hermitian_symmetry(seed):
    grid = GridSpec.centered(2, 17, 6.0)
    rng = np.random.default_rng(seed)
    f, g = random_enveloped_field(grid, rng), random_enveloped_field(grid, rng)
    diff = inner_product(f, g).dagger() - inner_product(g, f)
    assert diff.magnitude() <= 1e-12 * (1 + norm_l2(f) * norm_l2(g))


def _real_vector_part(f):
    data = np.zeros_like(f.data)
    data[..., [1, 2]] = f.data[..., [1, 2]].real
    return f.replace(data)


def test_cauchy_schwarz_examples(small_grid, rng):
    # equality needs a scalar <f, f>: scalar-valued or real vector-valued fields
    base = random_enveloped_field(small_grid, rng)
    for f in (CliffordField.from_scalar(small_grid, base.data[..., 0]), _real_vector_part(base)):
        lhs, rhs = cauchy_schwarz_check(f, f)
        assert lhs == pytest.approx(norm_l2(f) ** 2, rel=1e-12)
        assert rhs == pytest.approx(norm_l2(f) ** 2, rel=1e-12)
    f = random_enveloped_field(small_grid, rng)
    assert cauchy_schwarz_check(f, CliffordField.zeros(small_grid)) == (0.0, 0.0)
    for _ in range(20):
        g, h = random_enveloped_field(small_grid, rng), random_enveloped_field(small_grid, rng)
        lhs, rhs = cauchy_schwarz_check(g, h)
        assert lhs <= rhs * (1 + 1e-10)


def test_cauchy_schwarz_magnitude_form_can_exceed_for_full_multivectors(small_grid, rng):
    # f^dagger f carries bivector parts for complex full multivectors, so |<f, f>| > ||f||^2
    f = random_enveloped_field(small_grid, rng)
    lhs, rhs = cauchy_schwarz_check(f, f)
    assert inner_product(f, f).scalar_part.real == pytest.approx(rhs, rel=1e-12)
    assert lhs > rhs


def test_grid_mismatch(small_grid, ref_grid):
    with pytest.raises(GridMismatchError):
        inner_product(isotropic_gaussian(small_grid), isotropic_gaussian(ref_grid))


def test_riemann_sum_converges_at_least_second_order():
    # coarse spacings: on finer grids the Gaussian sum is exact to round-off
    errs = []
    for h in (1.0, 0.5):
        points = int(round(16 / h)) + 1
        f = isotropic_gaussian(GridSpec.centered(2, points, 8.0))
        errs.append(abs(norm_l2(f) ** 2 - math.pi))
    assert errs[1] <= errs[0] / 4


def test_fields_are_read_only(small_grid):
    f = isotropic_gaussian(small_grid)
    with pytest.raises(ValueError):
        f.data[0, 0, 0] = 1.0
