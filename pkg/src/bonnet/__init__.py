"""
Bonnet - integral identities of closed hypersurfaces in space forms

Fundamental forms, principal curvatures, mean curvatures and Newton tensors
of parametrized hypersurfaces in Euclidean, spherical and hyperbolic space,
with quadrature checks of the moment identities for the Gauss-Kronecker
curvature and calibration of the Gauss-Bonnet constants.
"""

__version__ = "0.1.0"

from .cli import app

__all__ = ["app"]
