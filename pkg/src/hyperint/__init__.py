"""Exact intersection numbers for twisted (co)homology of hyperplane
arrangements, and contiguity-relation matrices for hypergeometric integrals."""

__version__ = "0.1.0"
