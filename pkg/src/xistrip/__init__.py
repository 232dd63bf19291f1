"""Numerical verification toolkit for the monotonicity of Im Xi(a + bi) in b on the critical strip."""

__version__ = "0.1.0"
