"""Outcome record shared by every inequality verifier."""

import json
import math
from dataclasses import dataclass, field

FEASIBILITY_TOL = 1e-10
EQUALITY_TOL = 1e-8


def to_plain(value):
    """Coerce numpy scalars / complex values into JSON-friendly objects."""
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    if isinstance(value, complex):
        return [float(value.real), float(value.imag)]
    if hasattr(value, "tolist"):
        return to_plain(value.tolist())
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


@dataclass
class InequalityReport:
    """lhs <= rhs, measured.

    ``holds`` means slack >= -tolerance; ``equality`` additionally requires
    |slack| <= equality_tolerance.
    """

    name: str
    lhs: float
    rhs: float
    tolerance: float = FEASIBILITY_TOL
    equality_tolerance: float = EQUALITY_TOL
    context: dict = field(default_factory=dict)

    def __post_init__(self):
        self.lhs = float(self.lhs)
        self.rhs = float(self.rhs)

    @property
    def slack(self):
        return self.rhs - self.lhs

    @property
    def holds(self):
        return self.slack >= -self.tolerance

    @property
    def equality(self):
        return self.holds and abs(self.slack) <= self.equality_tolerance

    def to_dict(self):
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "holds": self.holds,
            "equality": self.equality,
            "context": to_plain(self.context),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)
