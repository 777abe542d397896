"""Exact lattice computations for K3 surfaces with Shioda-Inose structure and their Kummer partners."""

__version__ = "0.1.0"
