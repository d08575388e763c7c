"""Verification lab for 1-D time-fractional diffusion with Dirichlet boundary data."""

from .special_functions import gamma_fn, mittag_leffler

__version__ = "0.1.0"

__all__ = ["gamma_fn", "mittag_leffler", "__version__"]
