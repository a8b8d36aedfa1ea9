"""Left/right gait symmetry from 2D keypoint time series."""

__version__ = "0.1.0"
