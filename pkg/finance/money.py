# finance/money.py

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_FLOOR, ROUND_HALF_UP, Decimal
from functools import total_ordering

from domain.errors import CurrencyMismatchError, FinancialValidationError

CENT = Decimal("0.01")
WHOLE = Decimal("1")


def to_decimal(value) -> Decimal:
    """Decimal from int/str/Decimal; floats go through their shortest repr."""
    if isinstance(value, Decimal):
        return value
    if isinstance(value, float):
        return Decimal(repr(value))
    return Decimal(value)


@total_ordering
@dataclass(frozen=True)
class Money:
    """Fixed-point amount with two fractional digits in a single currency."""
    amount: Decimal
    currency: str

    def __post_init__(self):
        amount = to_decimal(self.amount)
        if not amount.is_finite():
            raise FinancialValidationError(f"amount {self.amount!r} is not finite")
        object.__setattr__(self, "amount", amount.quantize(CENT, rounding=ROUND_HALF_UP))
        currency = str(self.currency).upper()
        if len(currency) != 3 or not currency.isalpha():
            raise FinancialValidationError(f"currency {self.currency!r} is not an ISO-4217 code")
        object.__setattr__(self, "currency", currency)

    @classmethod
    def zero(cls, currency: str) -> "Money":
        return cls(Decimal(0), currency)

    def _same(self, other: "Money") -> None:
        if not isinstance(other, Money):
            raise TypeError(f"expected Money, got {type(other).__name__}")
        if other.currency != self.currency:
            raise CurrencyMismatchError(f"{self.currency} vs {other.currency}")

    def __add__(self, other: "Money") -> "Money":
        self._same(other)
        return Money(self.amount + other.amount, self.currency)

    def __sub__(self, other: "Money") -> "Money":
        self._same(other)
        return Money(self.amount - other.amount, self.currency)

    def __mul__(self, factor) -> "Money":
        if isinstance(factor, Money):
            raise TypeError("cannot multiply Money by Money")
        return Money(self.amount * to_decimal(factor), self.currency)

    __rmul__ = __mul__

    def __lt__(self, other: "Money") -> bool:
        self._same(other)
        return self.amount < other.amount

    def floor_whole(self) -> "Money":
        return Money(self.amount.quantize(WHOLE, rounding=ROUND_FLOOR), self.currency)

    def is_negative(self) -> bool:
        return self.amount < 0

    def __str__(self) -> str:
        return f"{self.amount:,.2f} {self.currency}"

    def to_json(self) -> dict:
        return {"amount": str(self.amount), "currency": self.currency}
