"""Clifford-algebra valued fields, their Fourier and continuous wavelet transforms, and numerical checks of the associated identities and uncertainty inequalities."""

from .algebra import CliffordAlgebra, Multivector, algebra, vector
from .cwt import CWTGrid, CWTTensor, cwt_analyze, hpsi_inner_product, make_daughter, plancherel_check, reconstruct
from .fourier import cft_forward, cft_inverse
from .grid import CliffordField, GridSpec, inner_product, norm_l2
from .spin import SpinQuadrature, Spinor, haar_quadrature
from .uncertainty import fourier_uncertainty, lemma_check, wavelet_uncertainty
from .wavelets import MotherWavelet, NotAdmissible, admissibility, builtin

__version__ = "0.1.0"

__all__ = [
    "CWTGrid",
    "CWTTensor",
    "CliffordAlgebra",
    "CliffordField",
    "GridSpec",
    "MotherWavelet",
    "Multivector",
    "NotAdmissible",
    "SpinQuadrature",
    "Spinor",
    "admissibility",
    "algebra",
    "builtin",
    "cft_forward",
    "cft_inverse",
    "cwt_analyze",
    "fourier_uncertainty",
    "haar_quadrature",
    "hpsi_inner_product",
    "inner_product",
    "lemma_check",
    "make_daughter",
    "norm_l2",
    "plancherel_check",
    "reconstruct",
    "vector",
    "wavelet_uncertainty",
]
