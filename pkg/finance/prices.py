# finance/prices.py
# Price mining from post text and robust PPIA estimation.

from __future__ import annotations

import re
from decimal import Decimal, InvalidOperation
from typing import Iterable

from domain.errors import CurrencyMismatchError, InsufficientDataError
from domain.schemas import SocialPost
from finance.money import Money

SYMBOLS = {"€": "EUR", "$": "USD", "£": "GBP", "¥": "JPY", "₹": "INR"}
CODES = ("EUR", "USD", "GBP", "JPY", "CHF", "SEK", "NOK", "DKK", "PLN", "CZK", "CAD", "AUD", "INR")

_NUMBER = r"\d{1,3}(?:[.,  ]\d{3})+(?:[.,]\d{1,2})?|\d+(?:[.,]\d{1,2})?"
_MARKER = "|".join(
    [re.escape(s) for s in SYMBOLS] + [rf"(?<![A-Za-z]){code}(?![A-Za-z])" for code in CODES]
)
PRICE_RE = re.compile(
    rf"(?P<pre>{_MARKER})\s?(?P<num1>{_NUMBER})(?!\d)"
    rf"|(?<![\d.,])(?P<num2>{_NUMBER})\s?(?P<post>{_MARKER})",
    flags=re.IGNORECASE,
)


def _currency(marker: str) -> str:
    return SYMBOLS.get(marker, marker.upper())


def parse_amount(raw: str) -> Decimal:
    """
    Accept both separator conventions: "1.200,50" and "1,200.50".
    The last separator is decimal when followed by one or two digits.
    """
    raw = raw.replace(" ", "").replace(" ", "")
    last = max(raw.rfind("."), raw.rfind(","))
    if last != -1 and len(raw) - last - 1 in (1, 2):
        integer, fraction = raw[:last], raw[last + 1:]
    else:
        integer, fraction = raw, ""
    integer = integer.replace(".", "").replace(",", "")
    try:
        return Decimal(f"{integer}.{fraction}" if fraction else integer)
    except InvalidOperation as exc:
        raise ValueError(f"unparseable amount {raw!r}") from exc


def extract_prices(posts: Iterable[SocialPost], currency: str) -> list[Money]:
    """All amount+currency parses in `currency`, in post order."""
    wanted = currency.upper()
    prices: list[Money] = []
    for post in posts:
        for match in PRICE_RE.finditer(post.text):
            marker = match.group("pre") or match.group("post")
            if _currency(marker) != wanted:
                continue
            number = match.group("num1") or match.group("num2")
            prices.append(Money(parse_amount(number), wanted))
    return prices


def _quantile(ordered: list[Decimal], numerator: int, denominator: int) -> Decimal:
    # empirical inverse CDF: smallest sample whose cumulative share >= p
    n = len(ordered)
    index = -(-numerator * n // denominator)
    return ordered[max(index, 1) - 1]


def estimate_ppia(price_samples: list[Money]) -> Money:
    """
    Median (lower median for even counts) of the samples that survive
    the 1.5 * IQR fence.
    """
    if not price_samples:
        raise InsufficientDataError("no price samples to estimate PPIA")
    currency = price_samples[0].currency
    if any(p.currency != currency for p in price_samples):
        raise CurrencyMismatchError("price samples mix currencies")

    ordered = sorted(p.amount for p in price_samples)
    q1 = _quantile(ordered, 1, 4)
    q3 = _quantile(ordered, 3, 4)
    fence = Decimal("1.5") * (q3 - q1)
    survivors = [a for a in ordered if q1 - fence <= a <= q3 + fence]
    return Money(_quantile(survivors, 1, 2), currency)
