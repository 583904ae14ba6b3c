"""Exact p-adic computations with Wach modules, log matrices and Coleman images."""
from .errors import PadicError
from .padic import PadicScalar, PrecisionProfile
from .series import PiSeries, XSeries
from .phi_module import FilteredPhiModule, build_modular
from .wach import LogMatrix, WachModuleData, build_wach, hodge_filtration, log_matrix
from .interpolation import InterpolationModule, build_module
from .coleman import ColemanImageData, image, image_conditions

__all__ = [
    "ColemanImageData", "FilteredPhiModule", "InterpolationModule", "LogMatrix", "PadicError",
    "PadicScalar", "PiSeries", "PrecisionProfile", "WachModuleData", "XSeries", "build_modular",
    "build_module", "build_wach", "hodge_filtration", "image", "image_conditions", "log_matrix",
]
__version__ = "0.1.0"
