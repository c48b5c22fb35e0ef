"""Exact computer algebra for central hyperplane arrangements.

Computes Bernstein-Sato data, top Milnor-fiber cohomology dimensions,
combinatorial singularity ideals, and holonomic localization lengths for
central (especially generic) arrangements, entirely in rational arithmetic.
"""

__all__ = ["__version__"]

__version__ = "0.1.0"
