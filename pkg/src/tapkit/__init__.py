"""Twisted Alexander polynomials of tunnel-number-one Montesinos knots."""

__version__ = "0.1.0"
