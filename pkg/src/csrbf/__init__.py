"""Landmark-based image registration with compactly supported radial basis functions."""

from .errors import (
    ConditioningError,
    CSRBFError,
    DomainError,
    InputError,
    LandmarkParseError,
    SingularConfigurationError,
)
from .kernels import (
    ALL_FAMILIES,
    GNEITING_5,
    GNEITING_7_2,
    WENDLAND31,
    WU12,
    Kernel,
    KernelFamily,
    gneiting,
    kernel_deriv,
    kernel_value,
)
from .registration import (
    JacobianField,
    LandmarkCorrespondence,
    Region,
    Transformation,
    det_field,
    fit,
)
from .support import SupportBound, min_support, support_bound

__all__ = [
    "ConditioningError",
    "CSRBFError",
    "DomainError",
    "InputError",
    "LandmarkParseError",
    "SingularConfigurationError",
    "ALL_FAMILIES",
    "GNEITING_5",
    "GNEITING_7_2",
    "WENDLAND31",
    "WU12",
    "Kernel",
    "KernelFamily",
    "gneiting",
    "kernel_deriv",
    "kernel_value",
    "JacobianField",
    "LandmarkCorrespondence",
    "Region",
    "Transformation",
    "det_field",
    "fit",
    "SupportBound",
    "min_support",
    "support_bound",
]

__version__ = "0.1.0"
