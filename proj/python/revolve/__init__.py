from ._core import (
    __version__,
    curve_eval,
    equilibrium,
    kernel_value,
    kernel_value_3d,
    log_trig_integral,
    optimize,
    reduced_k_quadrature,
    verify,
)

__all__ = [
    "__version__",
    "curve_eval",
    "equilibrium",
    "kernel_value",
    "kernel_value_3d",
    "log_trig_integral",
    "optimize",
    "reduced_k_quadrature",
    "verify",
]
