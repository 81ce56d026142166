"""Finite time-frequency toolkit: Gabor and Wilson systems, mixed modulation
norms, Kohn-Nirenberg symbols and Schatten-class bounds on C^N."""

from .exceptions import (
    DimensionError,
    NotAFrameError,
    NumericalError,
    ParameterRegionError,
    WilsonGateError,
    ZeroWindowError,
)
from .frames import (
    GaborLattice,
    GaborSystem,
    canonical_system,
    canonical_window,
    frame_bounds,
    frame_operator,
    gabor_analysis,
    gabor_synthesis,
    tensor_frame_coeffs,
)
from .mixednorms import (
    MixedNormSpec,
    Permutation,
    Weight,
    check_weight_laws,
    embedding_constant,
    is_slice_permutation,
    mixed_norm,
    modulation_norm_full,
    modulation_norm_lattice,
    permute_axes,
    weight_eval,
)
from .operators import (
    apply_operator,
    build_counterexample,
    kernel_to_kn,
    kn_tf_magnitude_check,
    kn_to_kernel,
    schatten_bound_rhs,
    schatten_norm,
    singular_values,
)
from .tfcore import (
    Axis,
    CoeffArray,
    dft,
    gaussian_window,
    istft_full,
    modulate,
    stft_full,
    stft_kernel,
    tf_shift,
    translate,
)
from .wilson import (
    WilsonBasis,
    build_wilson_basis,
    tensor_wilson_coefficients,
    wilson_coefficients,
    wilson_synthesis,
)

__version__ = "0.1.0"
