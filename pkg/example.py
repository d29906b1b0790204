from decimal import Decimal

from finance.financial_model import (
    FinancialScenario,
    assess_financials,
    break_even,
    fixed_cost,
    market_value,
    max_adversary_investment,
)
from finance.money import Money

ppia = Money(360, "EUR")
vcu = Money(50, "EUR")

print(market_value(1406, ppia))  # 506,160.00 EUR
print(max_adversary_investment(1406, ppia, vcu, n=3))  # 145,286.00 EUR

fc = fixed_cost(Decimal(2000), Money(60, "EUR"), Money(25286, "EUR"))
print(fc, break_even(fc, 3, ppia, vcu))

scenario = FinancialScenario(pae=1406, ppia=360, vcu=50, fteh=2000, ch=60, sld=25286, n=3)
print(assess_financials("dpf_tampering", scenario).to_json())
