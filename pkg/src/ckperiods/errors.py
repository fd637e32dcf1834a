"""Error taxonomy shared by every module.

Each error carries a stable ``name`` (used in reports) and the process exit
code the command line maps it to.
"""

from __future__ import annotations

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_PROPERTY = 3
EXIT_PRECISION = 4
EXIT_SIZE = 5


class ArtifactError(Exception):
    name = "ERROR"
    exit_code = EXIT_VALIDATION

    def __init__(self, message: str = "", witness: dict | None = None):
        super().__init__(message or self.name)
        self.witness = witness or {}

    def to_json(self) -> dict:
        out = {"error": self.name, "message": str(self)}
        if self.witness:
            out["witness"] = self.witness
        return out


class ValidationError(ArtifactError):
    name = "VALIDATION_FAILED"


class DomainMismatchError(ArtifactError, TypeError):
    name = "DOMAIN_MISMATCH"


class NoSolutionError(ArtifactError):
    name = "NO_SOLUTION"


class PrecisionExhaustedError(ArtifactError):
    name = "PRECISION_EXHAUSTED"
    exit_code = EXIT_PRECISION


class SpectraNotDisjointError(ArtifactError):
    name = "SPECTRA_NOT_DISJOINT"


class BesserConditionError(ArtifactError):
    name = "BESSER_CONDITION_FAILED"


class CompositionNonzeroError(ArtifactError):
    name = "COMPOSITION_NONZERO"


class InputsNotSplittingsError(ArtifactError):
    name = "INPUTS_NOT_SPLITTINGS"


class DepthOverflowError(ArtifactError):
    name = "DEPTH_OVERFLOW"
    exit_code = EXIT_SIZE


class RelationsViolatedError(ArtifactError):
    name = "RELATIONS_VIOLATED"


class NotEffectiveError(ArtifactError):
    name = "NOT_EFFECTIVE"


class FNotSubalgebraError(ArtifactError):
    name = "F_NOT_SUBALGEBRA"


class NotInImageError(ArtifactError):
    name = "NOT_IN_IMAGE"


class NoF0LiftError(ArtifactError):
    name = "NO_F0_LIFT"


class IdentityViolationError(ArtifactError):
    name = "IDENTITY_VIOLATION"
    exit_code = EXIT_PROPERTY


class DiagramViolationError(ArtifactError):
    name = "DIAGRAM_VIOLATION"
    exit_code = EXIT_PROPERTY


class SizeLimitError(ArtifactError):
    name = "SIZE_LIMIT"
    exit_code = EXIT_SIZE
