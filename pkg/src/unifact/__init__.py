"""Lie-algebraic factorization of unitary evolution and entanglement-change measures."""
from .errors import (
    ClosureOverflow,
    CutoffLeakage,
    DimensionError,
    FactorizationBreakdown,
    InvalidStateError,
    NotHermitianError,
    OracleTooLarge,
    QuadratureError,
    StepTooLarge,
    UnifactError,
)
from .lie import LieBasis, close_algebra, expand_in_basis
from .linalg import commutator, expm, partial_trace, propagator, tensor
from .measures import bures, check_measure_axioms, delta_d, entanglement_report, relative_entropy
from .perturbation import perturb_case_a, perturb_case_b
from .trotter import BipartiteSystem, SplitSchedule, evolve_scaled, trotter_error
from .wei_norman import FactoredPropagator, TimeDependentHamiltonian, integrate_wn

__version__ = "0.1.0"
