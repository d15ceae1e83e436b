"""dualprec: dual-precision point-cloud rendering benchmark suite."""

__version__ = "0.1.0"
