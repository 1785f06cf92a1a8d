import math
from typing import Any, NamedTuple, Self

from .enums import Provenance, Verdict

# Width of the band, in combined standard errors, that separates the verdicts.
SIGMA_BAND: float = 3.0

class Quantity(NamedTuple):
    name: str
    value: float
    std_error: float = 0.0
    provenance: Provenance = Provenance.ANALYTIC

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "value": _json_float(self.value),
            "std_error": _json_float(self.std_error),
            "provenance": self.provenance.value
            }

def _json_float(value: float) -> float | str:
    return value if math.isfinite(value) else str(value)

def classify_slack(slack: float, std_error: float, band: float = SIGMA_BAND) -> Verdict:
    """
    Verdict for an inequality written as ``slack >= 0``.

    Slack outside the band is SATISFIED or VIOLATED. Anything within ``band``
    standard errors of zero is BOUNDARY, including an exact zero with no
    sampling error.
    """
    margin: float = band * std_error
    if slack > margin:
        return Verdict.SATISFIED
    elif slack < -margin:
        return Verdict.VIOLATED

    return Verdict.BOUNDARY

def agreement(first: float, second: float, combined_error: float, band: float = SIGMA_BAND, atol: float = 1e-12) -> Verdict:
    return Verdict.PASS if abs(first - second) <= band * combined_error + atol else Verdict.FAIL

def residual_holds(value: float, std_error: float, band: float = SIGMA_BAND, atol: float = 1e-12) -> bool:
    """True when a residual written as ``value >= 0`` is not below the band."""
    return value >= -band * std_error - atol

class ExperimentReport:
    def __init__(
        self: Self,
        name: str,
        params: dict[str, Any] | None = None
        ) -> None:
        self.name = name
        self.params: dict[str, Any] = dict(params or {})

        self.quantities: list[Quantity] = []
        self.verdicts: dict[str, Verdict] = {}
        self.flags: dict[str, bool] = {}
        self.notes: list[str] = []

        self.columns: list[str] = []
        self.rows: list[dict[str, Any]] = []

    def add_quantity(self: Self, name: str, value: float, std_error: float = 0.0, provenance: Provenance = Provenance.ANALYTIC) -> Quantity:
        quantity: Quantity = Quantity(name, float(value), float(std_error), provenance)
        self.quantities.append(quantity)
        return quantity

    def add_estimate(self: Self, name: str, estimate: Any, provenance: Provenance = Provenance.MONTE_CARLO) -> Quantity:
        return self.add_quantity(name, estimate.value, estimate.std_error, provenance)

    def get_quantity(self: Self, name: str) -> Quantity:
        for quantity in self.quantities:
            if quantity.name == name:
                return quantity

        raise KeyError(f"Quantity not found: {name}")

    def set_verdict(self: Self, key: str, verdict: Verdict) -> None:
        self.verdicts[key] = verdict

    def add_row(self: Self, **row: Any) -> None:
        for column in row:
            if column not in self.columns:
                self.columns.append(column)

        self.rows.append(row)

    def merge(self: Self, other: Self, prefix: str | None = None) -> None:
        label: str = f"{prefix or other.name}."
        self.quantities.extend(quantity._replace(name=label + quantity.name) for quantity in other.quantities)
        self.verdicts.update({label + key: verdict for key, verdict in other.verdicts.items()})
        self.flags.update({label + key: flag for key, flag in other.flags.items()})
        self.notes.extend(other.notes)

    @property
    def failed(self: Self) -> bool:
        return any(verdict.is_failure for verdict in self.verdicts.values())

    @property
    def overall(self: Self) -> Verdict:
        return Verdict.FAIL if self.failed else Verdict.PASS

    def to_dict(self: Self) -> dict[str, Any]:
        return {
            "name": self.name,
            "params": self.params,
            "overall": self.overall.value,
            "verdicts": {key: verdict.value for key, verdict in self.verdicts.items()},
            "flags": self.flags,
            "quantities": [quantity.to_dict() for quantity in self.quantities],
            "notes": self.notes
            }

    def __repr__(self: Self) -> str:
        return (
            f"ExperimentReport("
            f"name={self.name}, "
            f"quantities={len(self.quantities)}, "
            f"verdicts={ {key: verdict.value for key, verdict in self.verdicts.items()} })"
            )
