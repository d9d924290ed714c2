"""Double-double evaluation of cosecant-weighted Dirichlet series."""

__version__ = "0.1.0"
