from enum import StrEnum

class Verdict(StrEnum):
    PASS: str = "PASS"
    FAIL: str = "FAIL"

    SATISFIED: str = "SATISFIED"
    VIOLATED: str = "VIOLATED"
    BOUNDARY: str = "BOUNDARY"

    BOUNDED: str = "BOUNDED"
    UNBOUNDED: str = "UNBOUNDED"

    POSITIVE_GAP: str = "POSITIVE-GAP"
    NO_GAP: str = "NO-GAP"

    INCONCLUSIVE: str = "INCONCLUSIVE"

    @property
    def is_failure(self) -> bool:
        return self in (Verdict.FAIL, Verdict.VIOLATED, Verdict.NO_GAP, Verdict.INCONCLUSIVE)

class Provenance(StrEnum):
    ANALYTIC: str = "analytic"
    QUADRATURE: str = "quadrature"
    MONTE_CARLO: str = "monte-carlo"

class Domain(StrEnum):
    SPHERE: str = "sphere"
    HEISENBERG: str = "heisenberg"

class Side(StrEnum):
    SPHERE: str = "sphere"
    WEIGHTED_HEISENBERG: str = "weighted-heisenberg"

class InequalityForm(StrEnum):
    LINEAR: str = "linear"
    POWER: str = "power"

class ConstraintClass(StrEnum):
    ZERO_AVERAGE: str = "zero-average"
    ORTHOGONAL_TO_Y: str = "orthogonal-to-y"

class Experiment(StrEnum):
    VOLUME: str = "volume"
    VERIFY_CAYLEY: str = "verify-cayley"
    SEMINORM: str = "seminorm"
    THRESHOLDS: str = "thresholds"
    SCAN_ENDPOINT: str = "scan-endpoint"
    SCALAR_LEMMAS: str = "scalar-lemmas"
    POINCARE: str = "poincare"
    ADMISSIBILITY: str = "admissibility"
    SUBCRITICAL: str = "subcritical"
    CONSTRAINTS: str = "constraints"
    REPORT: str = "report"
