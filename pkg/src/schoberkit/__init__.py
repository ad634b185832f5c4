"""Exact verification engine for a spherical hyperplane functor on projective
space, perverse disk data, toric skeleton combinatorics and a cellular model
of the coherent-constructible correspondence on the circle."""

__version__ = "0.1.0"
