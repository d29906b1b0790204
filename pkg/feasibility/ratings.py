# feasibility/ratings.py

from enum import Enum


class OrdinalEnum(str, Enum):
    """
    String-valued enum ordered by declaration, lowest first.
    Serializes to its value; comparisons follow the declared order.
    """

    @property
    def rank(self) -> int:
        return list(type(self)).index(self)

    def shifted(self, steps: int):
        """Move `steps` ordinal positions, clamped to the domain."""
        members = list(type(self))
        index = min(max(self.rank + steps, 0), len(members) - 1)
        return members[index]

    def _check(self, other):
        return type(other) is type(self)

    def __lt__(self, other):
        if not self._check(other):
            return NotImplemented
        return self.rank < other.rank

    def __le__(self, other):
        if not self._check(other):
            return NotImplemented
        return self.rank <= other.rank

    def __gt__(self, other):
        if not self._check(other):
            return NotImplemented
        return self.rank > other.rank

    def __ge__(self, other):
        if not self._check(other):
            return NotImplemented
        return self.rank >= other.rank

    def __str__(self) -> str:
        return self.value


class FeasibilityRating(OrdinalEnum):
    VERY_LOW = "very_low"
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"

    def step_up(self, steps: int) -> "FeasibilityRating":
        return self.shifted(max(steps, 0))


class AttackVector(OrdinalEnum):
    # ordered by remoteness
    PHYSICAL = "physical"
    LOCAL = "local"
    ADJACENT = "adjacent"
    NETWORK = "network"


class ImpactRating(OrdinalEnum):
    NEGLIGIBLE = "negligible"
    MODERATE = "moderate"
    MAJOR = "major"
    SEVERE = "severe"


class CalLevel(OrdinalEnum):
    CAL1 = "CAL1"
    CAL2 = "CAL2"
    CAL3 = "CAL3"
    CAL4 = "CAL4"
