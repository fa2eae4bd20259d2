"""Contains the t-product tubal matrix algebra."""

from .bcirc import bcirc_expand, fold, unfold
from .spectral import WeightPair, fnorm_weighted, is_t_spd, t_pinv, t_sqrt
from .tubal import (
    SpectralTubal,
    TransposeMode,
    TubalMatrix,
    dft_cube,
    from_frontal_slices,
    identity,
    idft_cube,
    random_normal,
    t_kron,
    t_product,
    t_transpose,
    unvec_t,
    vec_t,
    zeros,
)

__all__ = [
    "SpectralTubal",
    "TransposeMode",
    "TubalMatrix",
    "WeightPair",
    "bcirc_expand",
    "dft_cube",
    "fnorm_weighted",
    "fold",
    "from_frontal_slices",
    "identity",
    "idft_cube",
    "is_t_spd",
    "random_normal",
    "t_kron",
    "t_pinv",
    "t_product",
    "t_sqrt",
    "t_transpose",
    "unfold",
    "unvec_t",
    "vec_t",
    "zeros",
]
