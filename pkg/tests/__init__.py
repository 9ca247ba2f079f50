"""
Test suite for Affine Lab.
"""
