"""
Affine Lab - numerical laboratory for affine maximal type hypersurfaces and
Monge-Ampere regularity inequalities.
"""

__version__ = "0.1.0"
