"""Exact pole-order, Jacobian-ring and universal-family computations for hypersurfaces in P^n."""

__version__ = "0.1.0"
