"""Heisenberg-type inequalities for the Clifford-Fourier and Clifford wavelet transforms.

All wavelet constants come from ``Z = (2 pi)^n C_psi``.  With that
normalizer the per-slice Heisenberg bound, Cauchy-Schwarz over (a, s),
the isometry and the frequency-side energy identity combine to

    (sum ||b_k T(a,.,s)||^2 da/a^(n+1) ds)^(1/2) * ||xi_k f^|| >= (1/2) sqrt(Z) ||f||^2
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .cwt import CWTGrid, _weighted_sum, iter_slices, normalizer, safe_ratio
from .fourier import cft_forward, forward_array, frequency_grid, frequency_multiply
from .grid import CliffordField, coordinate_multiply, norm_l2
from .wavelets import MotherWavelet, admissibility, sphere_area

DECAY_WARNING = 1e-8


@dataclass
class UncertaintyReport:
    axis: int
    lhs_position: float
    lhs_frequency: float
    rhs: float
    ratio: float
    settings: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    @property
    def product(self) -> float:
        return self.lhs_position * self.lhs_frequency

    def to_dict(self) -> dict:
        return asdict(self)


def _check_axis(f: CliffordField, k: int):
    if not 1 <= k <= f.n:
        raise ValueError(f"axis {k} out of range 1..{f.n}")


def _decay_note(f: CliffordField) -> dict:
    peak = float(f.pointwise_magnitude().max(initial=0.0))
    edge = f.boundary_max()
    return {"boundary_relative": edge / peak if peak > 0 else 0.0, "decays": edge <= DECAY_WARNING * max(peak, 1e-300)}


def fourier_uncertainty(f: CliffordField, k: int) -> UncertaintyReport:
    """``||x_k f|| * ||xi_k f^||`` against ``||f||^2 / 2``."""
    _check_axis(f, k)
    position = norm_l2(coordinate_multiply(f, k))
    frequency = norm_l2(frequency_multiply(cft_forward(f), k))
    rhs = 0.5 * norm_l2(f) ** 2
    return UncertaintyReport(
        axis=k,
        lhs_position=position,
        lhs_frequency=frequency,
        rhs=rhs,
        ratio=safe_ratio(position * frequency, rhs),
        settings={"shape": list(f.grid.shape), "spacing": list(f.grid.spacing)},
        diagnostics=_decay_note(f),
    )


def _axis_weights(axis_values: np.ndarray, k: int, ndim: int) -> np.ndarray:
    shape = [1] * (ndim + 1)
    shape[k - 1] = -1
    return (axis_values**2).reshape(shape)


@dataclass
class _SliceSums:
    energy: np.ndarray
    position: np.ndarray
    frequency: np.ndarray


def _slice_sums(f: CliffordField, psi: MotherWavelet, grid: CWTGrid, k: int, threads: int | None) -> _SliceSums:
    """Per-slice ``sum |T|^2``, ``sum b_k^2 |T|^2`` and ``sum xi_k^2 |T^|^2`` (no cell volumes)."""
    space = grid.translations
    freq = frequency_grid(space)
    bk2 = _axis_weights(space.axes()[k - 1], k, space.n)
    xk2 = _axis_weights(freq.axes()[k - 1], k, space.n)
    shape = (len(grid.scales), len(grid.spins))
    out = _SliceSums(np.zeros(shape), np.zeros(shape), np.zeros(shape))
    for i, j, data in iter_slices(f, psi, grid, threads, warn=False):
        mag2 = np.abs(data) ** 2
        out.energy[i, j] = mag2.sum()
        out.position[i, j] = (bk2 * mag2).sum()
        that = forward_array(data, space)
        out.frequency[i, j] = (xk2 * np.abs(that) ** 2).sum()
    return out


def lemma_check(f: CliffordField, psi: MotherWavelet, grid: CWTGrid, k: int, C_psi: float | None = None, threads: int | None = None):
    """Frequency-weighted coefficient energy against ``Z ||xi_k f^||^2``.

    Returns ``(lhs, rhs, ratio)``.  The left side transforms every
    (scale, spin) slice over the translation variable.
    """
    _check_axis(f, k)
    Z = normalizer(psi, C_psi)
    sums = _slice_sums(f, psi, grid, k, threads)
    lhs = float(_weighted_sum(grid, sums.frequency)) * frequency_grid(grid.translations).cell_volume / grid.translations.cell_volume
    rhs = Z * norm_l2(frequency_multiply(cft_forward(f), k)) ** 2
    return lhs, rhs, safe_ratio(lhs, rhs)


def wavelet_uncertainty(f: CliffordField, psi: MotherWavelet, grid: CWTGrid, k: int, C_psi: float | None = None, threads: int | None = None) -> UncertaintyReport:
    """Check the wavelet uncertainty inequality and each link of its proof chain.

    ``diagnostics`` records:

    * ``slice_heisenberg_min`` - smallest per-slice ratio
      ``||b_k T|| ||xi_k T^|| / (||T||^2 / 2)``;
    * ``chain_ratio`` - ``(int ||b_k T||^2)(int ||xi_k T^||^2) / ((1/2) int ||T||^2)^2``;
    * ``lemma_ratio`` and ``plancherel_ratio`` - the two identities used to
      turn the chain into the final inequality;
    * ``sphere_constant_ratio`` - the product against
      ``(2 pi)^(n/2)/2 * sqrt(A) ||f||^2`` with ``A = (2 pi)^n |S^{n-1}| C_psi``.
    """
    _check_axis(f, k)
    n = f.n
    C = admissibility(psi).C_psi if C_psi is None else C_psi
    Z = normalizer(psi, C)
    space = grid.translations
    dV = space.cell_volume
    dxi = frequency_grid(space).cell_volume
    sums = _slice_sums(f, psi, grid, k, threads)

    position_energy = float(_weighted_sum(grid, sums.position))
    frequency_energy = float(_weighted_sum(grid, sums.frequency)) * dxi / dV
    total_energy = float(_weighted_sum(grid, sums.energy))

    f_norm2 = norm_l2(f) ** 2
    xi_f = norm_l2(frequency_multiply(cft_forward(f), k))
    position = math.sqrt(position_energy)
    rhs = 0.5 * math.sqrt(Z) * f_norm2

    with np.errstate(divide="ignore", invalid="ignore"):
        per_slice = np.sqrt(sums.position * dV * sums.frequency * dxi) / (0.5 * sums.energy * dV)
    per_slice = per_slice[np.isfinite(per_slice)]

    A_sphere = (2 * math.pi) ** n * sphere_area(n) * C
    sphere_rhs = (2 * math.pi) ** (n / 2) / 2 * math.sqrt(A_sphere) * f_norm2
    diagnostics = {
        "slice_heisenberg_min": float(per_slice.min()) if per_slice.size else 1.0,
        "chain_ratio": safe_ratio(position_energy * frequency_energy, (0.5 * total_energy) ** 2),
        "lemma_ratio": safe_ratio(frequency_energy, Z * xi_f**2),
        "plancherel_ratio": safe_ratio(total_energy, Z * f_norm2),
        "sphere_constant_ratio": safe_ratio(position * xi_f, sphere_rhs),
        "Z_psi": Z,
        "C_psi": C,
    }
    diagnostics.update(_decay_note(f))
    return UncertaintyReport(
        axis=k,
        lhs_position=position,
        lhs_frequency=xi_f,
        rhs=rhs,
        ratio=safe_ratio(position * xi_f, rhs),
        settings={
            "wavelet": psi.name,
            "scales": [float(grid.scales[0]), float(grid.scales[-1]), len(grid.scales)],
            "spins": len(grid.spins),
            "shape": list(space.shape),
            "spacing": list(space.spacing),
        },
        diagnostics=diagnostics,
    )
