"""Steepest descent under layer-wise norms, with the optimizers it explains."""

__version__ = "0.3.0"
