"""polydecay - Fourier multipliers, solitary-wave profiles and their algebraic decay."""

__version__ = "0.1.0"
