"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class SpectralError(Exception):
    """Base class. ``code`` is the short machine-readable name used by the CLI."""

    code = "spectral_error"

    def to_dict(self) -> dict:
        return {"error": self.code, "message": str(self)}


class DegenerateRoots(SpectralError):
    code = "degenerate_roots"


class RootOutOfDomain(SpectralError):
    code = "root_out_of_domain"


class PoleInput(SpectralError):
    code = "pole_input"


class SymPointAtInfinity(SpectralError):
    code = "sym_point_at_infinity"


class BranchPointCollision(SpectralError):
    code = "branch_point_collision"


class CycleCollision(SpectralError):
    code = "cycle_collision"


class QuadratureFailure(SpectralError):
    code = "quadrature_failure"


class NotInBa(SpectralError):
    code = "not_in_ba"


class RankDeficiency(SpectralError):
    code = "rank_deficiency"


class OnS2Locus(SpectralError):
    code = "on_s2_locus"


class NoPositiveOrientation(SpectralError):
    code = "no_positive_orientation"


class RootBracketFailure(SpectralError):
    code = "root_bracket_failure"


class SingularSystem(SpectralError):
    code = "singular_system"


class DivisionResidual(SpectralError):
    code = "division_residual"


class PeriodDrift(SpectralError):
    code = "period_drift"


class Unclassifiable(SpectralError):
    code = "unclassifiable"


class DomainError(SpectralError):
    code = "domain_error"


class ManifoldEscape(SpectralError):
    code = "manifold_escape"


class BoundaryHit(SpectralError):
    """Raised when a flow reaches the numerical boundary of the moduli space.

    Carries the partial trajectory and the boundary classification so callers
    can extrapolate limits.
    """

    code = "boundary_hit"

    def __init__(self, message: str, trajectory=None, classification=None, state=None):
        super().__init__(message)
        self.trajectory = trajectory or []
        self.classification = classification
        self.state = state

    def to_dict(self) -> dict:
        d = super().to_dict()
        if self.classification is not None:
            d["classification"] = self.classification
        return d
