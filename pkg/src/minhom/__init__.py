"""Minimum homotopy area of closed normal polygonal curves.

The main entry points are :func:`min_homotopy_area`, which returns the
minimum area swept by a null-homotopy together with an optimal decomposition
into self-overlapping pieces, and :func:`is_self_overlapping`.
"""

from .arrangement import analyze
from .curve import ClosedPolyCurve, load_curve, perturb_to_normal
from .errors import CapExceeded, InputError, MinhomError
from .homotopy import (
    enumerate_valid_anchor_sets,
    induced_homotopy_frames,
    metric_check,
    min_homotopy_area,
)
from .selfoverlap import is_self_overlapping

__all__ = [
    "CapExceeded", "ClosedPolyCurve", "InputError", "MinhomError", "analyze",
    "enumerate_valid_anchor_sets", "induced_homotopy_frames", "is_self_overlapping",
    "load_curve", "metric_check", "min_homotopy_area", "perturb_to_normal",
]
__version__ = "0.1.0"
