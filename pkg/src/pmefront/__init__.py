"""Sharp fronts and the logarithmic front shift of the porous-medium Fisher-KPP equation."""

__version__ = "0.1.0"

from . import pmesim, shiftfit, wavekit  # noqa: E402

__all__ = ["__version__", "pmesim", "shiftfit", "wavekit"]
