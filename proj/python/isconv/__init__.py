"""Direct, im2col+GEMM and inverse sparse convolution for CPUs.

Tensors are float32 numpy arrays: inputs (C, H, W), kernels (K, C, R, S),
outputs (K, H_out, W_out).
"""

from ._core import (
    ConvParams,
    CorrectnessError,
    IscCounters,
    LayerSpec,
    MeasurementError,
    ParseError,
    ShapeError,
    SparseInput,
    ValidationError,
    compress,
    default_layer_specs,
    dense_macs,
    direct_conv,
    effective_macs,
    gemm_conv,
    gen_kernel,
    gen_sparse_input,
    isc_conv,
    measure_sparsity,
    output_dims,
    parse_layer_specs,
    relu,
    run_suite,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
