"""High-precision Stieltjes-Bethe solver and semiclassical orthogonality verifier."""

__version__ = "0.1.0"
