"""Q-operators for the six-vertex model built from Borel-subalgebra traces.

Subpackages
-----------
laurent
    Sparse Laurent polynomials and formal delta series.
repmod
    Evaluation modules, the Borel module M(z, s), submodule structure.
intertwine
    R-matrix, the W intertwiner, phi coefficients, generic intertwiner solver.
qtransfer
    Sector-resolved transfer matrices and Q-operators plus relation checks.
harness
    ``qoplab`` command line front-end.
"""
from .kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
