"""Quantum geometry of causal fermion systems with four-dimensional spin spaces.

The subpackages split along the natural layers of the construction:

``spin_algebra``
    Indefinite inner-product (signature (2,2)) linear algebra: spin adjoints,
    spectra with definiteness bookkeeping, principal inverse square roots.
``clifford``
    Five-dimensional Clifford subspaces of signature (1,4), sign operators,
    synchronization of Clifford extensions, identification maps.
``geometry``
    Causal classification of closed chains, spin and metric connections,
    tangent vectors, splice maps and the three curvature notions.
``ambient_system``
    Finite ensembles of Hermitian operators on a big Hilbert space: local
    spin spaces, physical wave-function bases, kernel extraction.
``dirac_sea``
    The regularized Dirac-sea vacuum in Minkowski space: closed-form kernel
    coefficients, chain analysis, modified Bessel evaluation.
``transport``
    Parallel transport along timelike curves, curved-space correction terms.
``cli``
    Reproducible reporting commands (CSV/JSON) built on the layers above.
"""

from .errors import CfsGeomError
from .spin_algebra import (
    Tolerances,
    DEFAULT_TOL,
    SpinSpace,
    SpinOperator,
    EigenSystem,
    spin_adjoint,
    trace_inner,
    operator_norm,
    spectrum,
    principal_inv_sqrt,
)

__version__ = "0.1.0"

__all__ = [
    "CfsGeomError",
    "Tolerances",
    "DEFAULT_TOL",
    "SpinSpace",
    "SpinOperator",
    "EigenSystem",
    "spin_adjoint",
    "trace_inner",
    "operator_norm",
    "spectrum",
    "principal_inv_sqrt",
    "__version__",
]
