"""Exception hierarchy shared by all modules."""


class UnifactError(Exception):
    """Base class for library errors."""

    code = "error"

    def to_dict(self) -> dict:
        return {"error": self.code, "message": str(self)}


class DimensionError(UnifactError, ValueError):
    code = "dimension_mismatch"


class InvalidStateError(UnifactError, ValueError):
    code = "invalid_state"


class NotHermitianError(UnifactError, ValueError):
    code = "not_hermitian"


class ClosureOverflow(UnifactError):
    """Commutator closure exceeded ``max_dim``.

    The partially built basis is kept on ``partial``. A Hamiltonian whose
    algebra overflows should be evolved with the splitting in
    :mod:`unifact.trotter` instead.
    """

    code = "closure_overflow"

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class FactorizationBreakdown(UnifactError):
    code = "factorization_breakdown"

    def __init__(self, message, time=None, condition=None):
        super().__init__(message)
        self.time = time
        self.condition = condition

    def to_dict(self) -> dict:
        d = super().to_dict()
        d.update(time=self.time, condition=self.condition)
        return d


class StepTooLarge(UnifactError):
    code = "step_too_large"

    def __init__(self, message, discrepancy=None):
        super().__init__(message)
        self.discrepancy = discrepancy


class CutoffLeakage(UnifactError):
    code = "cutoff_leakage"

    def __init__(self, message, population=None, suggested_cutoff=None):
        super().__init__(message)
        self.population = population
        self.suggested_cutoff = suggested_cutoff

    def to_dict(self) -> dict:
        d = super().to_dict()
        d.update(population=self.population, suggested_cutoff=self.suggested_cutoff)
        return d


class OracleTooLarge(UnifactError):
    code = "oracle_too_large"


class QuadratureError(UnifactError):
    code = "quadrature_nonconvergence"
