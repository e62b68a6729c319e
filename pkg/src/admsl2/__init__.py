"""Exact computations for admissible-level affine sl2, its Virasoro and
N=2 relatives: level data, singular vectors, module catalogs, fusion and
branching rules, and free-field C1 checks."""

__version__ = "0.1.0"
