class CRSobolevError(Exception):
    pass

class DimensionMismatchError(CRSobolevError, ValueError):
    def __init__(self, expected: int, received: int, what: str = "point"):
        self.expected = expected
        self.received = received

        super().__init__(f"Dimension mismatch for {what}: n={received} (expected: n={expected})")

class PoleProximityError(CRSobolevError):
    def __init__(self, distance: float, guard: float):
        self.distance = distance
        self.guard = guard

        super().__init__(f"Point is within the pole guard of the south pole: |1 + zeta_(n+1)| = {distance!r} (guard: {guard!r})")

class SingularEvaluationError(CRSobolevError):
    pass

class QuadratureError(CRSobolevError):
    def __init__(self, achieved: float, tolerance: float, what: str = "integral"):
        self.achieved = achieved
        self.tolerance = tolerance

        super().__init__(f"Quadrature of {what} did not converge: achieved error {achieved!r} (tolerance: {tolerance!r})")

class DegenerateInputError(CRSobolevError):
    pass

class ConfigurationError(CRSobolevError):
    pass

class RangeError(CRSobolevError, OverflowError):
    pass

class PositivityError(CRSobolevError, ValueError):
    pass

class UnknownExperimentError(CRSobolevError):
    def __init__(self, name: str, known: list[str] | None = None):
        self.name = name
        self.known = known or []

        super().__init__(f"Unknown experiment: {self.name!r} (known: {', '.join(self.known)})")
