"""Hessian-nilpotent polynomials and their inversion pairs, computed exactly."""
