import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cliffwave.algebra import Multivector, algebra
from cliffwave.corpus import isotropic_gaussian, random_enveloped_field
from cliffwave.fourier import (
    cft_forward,
    cft_inverse,
    frequency_grid,
    frequency_multiply,
    parseval_check,
    spectral_derivative,
)
from cliffwave.grid import CliffordField, GridMismatchError, GridSpec, norm_l2


def direct_transform(f: CliffordField) -> np.ndarray:
    """O(N^2) Riemann sum of the continuum transform on the frequency grid."""
    x = f.grid.coords().reshape(-1, f.n)
    xi = frequency_grid(f.grid).coords().reshape(-1, f.n)
    kernel = np.exp(-1j * xi @ x.T) * f.grid.cell_volume / (2 * math.pi) ** (f.n / 2)
    out = kernel @ f.data.reshape(-1, f.data.shape[-1])
    return out.reshape(f.data.shape)


def test_frequency_grid_layout(ref_grid):
    freq = frequency_grid(ref_grid)
    assert freq.spacing[0] == pytest.approx(2 * math.pi / (65 * 0.25), rel=1e-15)
    assert freq.index_of([0.0, 0.0]) == (32, 32)
    with pytest.raises(ValueError):
        frequency_grid(GridSpec((4, 5), (1.0, 1.0), (-2.0, -2.0)))


def test_gaussian_pair(ref_grid):
    F = cft_forward(isotropic_gaussian(ref_grid))
    xi2 = np.sum(F.grid.coords() ** 2, axis=-1)
    assert np.abs(F.data[..., 0] - np.exp(-xi2 / 2)).max() <= 1e-8
    assert np.abs(F.data[..., 1:]).max() == 0
    assert F.domain == "frequency"


def test_inverse_of_gaussian_spectrum(ref_grid):
    f = isotropic_gaussian(ref_grid)
    freq = frequency_grid(ref_grid)
    xi2 = np.sum(freq.coords() ** 2, axis=-1)
    F = CliffordField(freq, CliffordField.from_scalar(freq, np.exp(-xi2 / 2)).data, domain="frequency")
    back = cft_inverse(F, ref_grid)
    assert np.abs(back.data - f.data).max() <= 1e-8


def test_zero_maps_to_zero(ref_grid):
    assert np.array_equal(cft_forward(CliffordField.zeros(ref_grid)).data, np.zeros((65, 65, 4)))
    Z = CliffordField(frequency_grid(ref_grid), np.zeros((65, 65, 4)), domain="frequency")
    assert np.array_equal(cft_inverse(Z, ref_grid).data, np.zeros((65, 65, 4)))


def test_matches_direct_sum_on_small_grid(rng):
    grid = GridSpec.centered(2, 17, 6.0)
    f = random_enveloped_field(grid, rng)
    assert np.abs(cft_forward(f).data - direct_transform(f)).max() <= 1e-10


def test_shift_theorem():
    grid = GridSpec.centered(2, 17, 8.0)
    c = np.array(grid.spacing) * np.array([2, -1])
    x = grid.coords()
    f = CliffordField.from_scalar(grid, np.exp(-np.sum(x**2, -1) / 2))
    g = CliffordField.from_scalar(grid, np.exp(-np.sum((x - c) ** 2, -1) / 2))
    F, G = cft_forward(f), cft_forward(g)
    factor = np.exp(-1j * F.grid.coords() @ c)[..., None]
    assert np.abs(G.data - factor * direct_transform(f)).max() <= 1e-8
    assert np.abs(G.data - factor * F.data).max() <= 1e-8


def test_off_centre_grid_uses_phase_ramp(rng):
    grid = GridSpec((17, 17), (0.4, 0.4), (-2.2, -3.6))
    f = random_enveloped_field(GridSpec.centered(2, 17, 3.2), rng).data
    field = CliffordField(grid, f)
    assert np.abs(cft_forward(field).data - direct_transform(field)).max() <= 1e-10
    assert np.abs(cft_inverse(cft_forward(field)).data - f).max() <= 1e-12


def test_round_trip_random(ref_grid, rng):
    for _ in range(5):
        f = random_enveloped_field(ref_grid, rng)
        assert np.abs(cft_inverse(cft_forward(f)).data - f.data).max() <= 1e-10


def test_round_trip_three_dimensions(rng):
    grid = GridSpec.centered(3, 17, 6.0)
    f = random_enveloped_field(grid, rng)
    assert np.abs(cft_inverse(cft_forward(f)).data - f.data).max() <= 1e-10
    assert norm_l2(cft_forward(f)) == pytest.approx(norm_l2(f), rel=1e-12)


def test_parseval_examples(ref_grid, small_grid, rng):
    g = isotropic_gaussian(ref_grid)
    lhs, rhs = parseval_check(g, g)
    assert lhs.scalar_part == pytest.approx(math.pi, abs=1e-6)
    assert rhs.scalar_part == pytest.approx(math.pi, abs=1e-6)
    assert parseval_check(g, CliffordField.zeros(ref_grid)) == (0, 0)
    for _ in range(5):
        f, h = random_enveloped_field(small_grid, rng), random_enveloped_field(small_grid, rng)
        lhs, rhs = parseval_check(f, h)
        assert np.abs(lhs.coeffs - rhs.coeffs).max() <= 1e-8


def test_plancherel_on_corpus(ref_grid, rng):
    for _ in range(5):
        f = random_enveloped_field(ref_grid, rng)
        assert abs(norm_l2(f) - norm_l2(cft_forward(f))) <= 1e-8


@given(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False), st.integers(0, 2**32 - 1))
def test_linearity(c, seed):
    grid = GridSpec.centered(2, 17, 6.0)
    rng = np.random.default_rng(seed)
    f, g = random_enveloped_field(grid, rng), random_enveloped_field(grid, rng)
    lhs = cft_forward(f * c + g).data
    rhs = cft_forward(f).data * c + cft_forward(g).data
    assert np.abs(lhs - rhs).max() <= 1e-12 * (1 + abs(c)) * max(1.0, np.abs(rhs).max())


@pytest.mark.parametrize("mask", range(4))
def test_left_module_compatibility(small_grid, rng, mask):
    f = random_enveloped_field(small_grid, rng)
    e = Multivector.blade(2, mask)
    assert np.abs(cft_forward(e * f).data - (e * cft_forward(f)).data).max() <= 1e-12


def test_even_axes_and_domains_rejected(ref_grid):
    f = CliffordField.zeros(GridSpec((8, 9), (1.0, 1.0), (-3.5, -4.0)))
    with pytest.raises(ValueError):
        cft_forward(f)
    F = cft_forward(isotropic_gaussian(ref_grid))
    with pytest.raises(ValueError):
        cft_forward(F)
    with pytest.raises(ValueError):
        cft_inverse(isotropic_gaussian(ref_grid))
    with pytest.raises(GridMismatchError):
        cft_inverse(F, GridSpec.centered(2, 65, 4.0))


@pytest.mark.parametrize("k", [1, 2])
def test_spectral_derivative_against_finite_differences(ref_grid, k):
    x = ref_grid.coords()
    f = CliffordField.from_scalar(ref_grid, np.exp(-np.sum(x**2, -1) / 2) * (1 + 0.3 * x[..., 0]))
    d = spectral_derivative(f, k)
    h = ref_grid.spacing[k - 1]
    def shift(m):
        return np.roll(f.data, -m, axis=k - 1)

    # fourth-order central stencil
    fd = (-shift(2) + 8 * shift(1) - 8 * shift(-1) + shift(-2)) / (12 * h)
    fd_norm = math.sqrt(np.sum(np.abs(fd) ** 2) * ref_grid.cell_volume)
    assert norm_l2(d) == pytest.approx(fd_norm, rel=1e-3)
    # duality: spectral derivative norm equals ||xi_k f^||
    assert norm_l2(d) == pytest.approx(norm_l2(frequency_multiply(cft_forward(f), k)), rel=1e-12)


def test_spectral_derivative_of_gaussian_is_exact(ref_grid):
    f = isotropic_gaussian(ref_grid)
    x = ref_grid.coords()
    expected = -x[..., 0] * np.exp(-np.sum(x**2, -1) / 2)
    assert np.abs(spectral_derivative(f, 1).data[..., 0] - expected).max() <= 1e-8


def test_blades_transform_independently(small_grid, rng):
    f = random_enveloped_field(small_grid, rng)
    F = cft_forward(f)
    alg = algebra(2)
    for mask in range(alg.dim):
        data = np.zeros_like(f.data)
        data[..., mask] = f.data[..., mask]
        part = cft_forward(f.replace(data)).data
        assert np.array_equal(part[..., mask], F.data[..., mask])
