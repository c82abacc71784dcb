"""Bound quiver algebras: quadratic duals, trivial extensions, covers,
McKay relation families and Loewy-matrix classification."""

__version__ = "0.1.0"
