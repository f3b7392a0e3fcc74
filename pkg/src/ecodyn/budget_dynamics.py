"""Yearly wage pool dynamics driven by taxation, spending, and investment.

The yearly change in the wage pool splits into a government flow balance
(tax revenue net of re-spent outlays) and an investment inflow. Both are
linear in the current wage level, so the year-over-year map is a
first-order linear recurrence. Everything else here is consequences:
the closed-form trajectory, the pole that decides stability, the interval
of tax rates that keeps the pole inside the unit circle, and adjustments
for collection and spending inefficiencies.

Two recurrence conventions are supported. In "direct" mode next year's
pool is the yearly change itself; in "incremental" mode the change is
added onto the current pool, which shifts the pole by exactly one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import DomainError, InvariantViolation

MODES = ("direct", "incremental")

WEIGHT_SUM_TOL = 1e-12


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise InvariantViolation(f"mode must be one of {MODES}, got {mode!r}")


def _check_unit(name: str, x: float) -> None:
    if not (math.isfinite(x) and 0.0 <= x <= 1.0):
        raise InvariantViolation(f"{name} must lie in [0, 1], got {x}")


def _check_nonneg(name: str, x: float) -> None:
    if not (math.isfinite(x) and x >= 0.0):
        raise InvariantViolation(f"{name} must be finite and >= 0, got {x}")


@dataclass(frozen=True)
class BudgetParams:
    """Inputs of the wage pool recurrence.

    tax_rate: fraction of wages collected as tax.
    spending_split: share of government outlays paid straight back out
        as public wages; the rest returns through the private loop.
    private_fraction: share of after-tax wages kept out of domestic
        consumption (saved or spent abroad).
    invest_share: fraction of the wage pool channeled into investment.
    foreign_multiplier: relative boost on investment from external demand.
    gov_spending: fixed yearly government outlay level.
    initial_wages: wage pool at year zero, must be positive.
    """

    tax_rate: float
    spending_split: float
    private_fraction: float
    invest_share: float
    foreign_multiplier: float
    gov_spending: float
    initial_wages: float

    def __post_init__(self) -> None:
        _check_unit("tax_rate", self.tax_rate)
        _check_unit("spending_split", self.spending_split)
        _check_unit("private_fraction", self.private_fraction)
        _check_nonneg("invest_share", self.invest_share)
        _check_nonneg("foreign_multiplier", self.foreign_multiplier)
        _check_nonneg("gov_spending", self.gov_spending)
        if not (math.isfinite(self.initial_wages) and self.initial_wages > 0):
            raise InvariantViolation(
                f"initial_wages must be finite and > 0, got {self.initial_wages}"
            )


@dataclass(frozen=True)
class RecurrenceCoefficients:
    """Linear map of one budget year: next = pole * current + constant_flow.

    balance_gain multiplies the wage pool inside the government flow
    balance, invest_gain inside the investment inflow; constant_flow is
    the wage-independent part (government outlays paid as public wages,
    entering with a minus sign on the balance side).
    """

    balance_gain: float
    invest_gain: float
    constant_flow: float

    @property
    def pole(self) -> float:
        """Multiplier of the direct-mode recurrence."""
        return self.balance_gain + self.invest_gain

    def pole_in_mode(self, mode: str) -> float:
        """Recurrence multiplier; incremental mode shifts it by one."""
        _check_mode(mode)
        if mode == "incremental":
            return 1.0 + self.pole
        return self.pole


@dataclass(frozen=True)
class DegenerateRange:
    """Marker: leverage at or below -1 flips the interval algebra, so no
    open interval of tax rates in (0, 1) can be reported."""

    leverage: float


@dataclass(frozen=True)
class DivergentFixedPoint:
    """Marker: the pole sits exactly at 1 with a nonzero constant flow,
    so the trajectory drifts linearly and no fixed point exists."""


@dataclass(frozen=True)
class DeficiencyFactors:
    """Fractional losses applied to the ideal model, each in [0, 1].

    tax_collection: share of owed tax never collected.
    work_effort: share of potential wages lost to underemployment.
    spending_efficiency: share of planned outlays that evaporates.
    currency_value: erosion applied to the resulting flow balance.

    A factor of exactly 1 is a total loss: the corresponding adjusted
    quantity is zero.
    """

    tax_collection: float = 0.0
    work_effort: float = 0.0
    spending_efficiency: float = 0.0
    currency_value: float = 0.0

    def __post_init__(self) -> None:
        for name in (
            "tax_collection",
            "work_effort",
            "spending_efficiency",
            "currency_value",
        ):
            _check_unit(name, getattr(self, name))


@dataclass(frozen=True)
class DeficiencyAdjusted:
    """Loss-adjusted levels, plus the residual scale factor that still
    has to hit the flow balance itself.

    Kept as bare numbers rather than a parameter set: a total work
    deficiency zeroes the wage pool, which no valid parameter set can
    carry. Use :meth:`as_params` to fold the levels back into one.
    """

    tax_rate: float
    initial_wages: float
    gov_spending: float
    balance_scale: float

    def scale_balance(self, balance: float) -> float:
        """Apply the currency-erosion factor to a computed flow balance."""
        return balance * self.balance_scale

    def as_params(self, base: BudgetParams) -> BudgetParams:
        """Rebuild a parameter set around the adjusted levels.

        Re-validates on construction, so a wage pool eroded to zero is
        rejected rather than silently producing a degenerate recurrence.
        """
        return replace(
            base,
            tax_rate=self.tax_rate,
            initial_wages=self.initial_wages,
            gov_spending=self.gov_spending,
        )


@dataclass(frozen=True)
class SpendingInputs:
    """Weighted government spending categories; weights sum to 1."""

    weights: tuple[float, ...]
    levels: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        object.__setattr__(self, "levels", tuple(float(g) for g in self.levels))
        if len(self.weights) != len(self.levels):
            raise InvariantViolation("weights and levels must have equal length")
        if not self.weights:
            raise InvariantViolation("at least one spending category is required")
        for w in self.weights:
            _check_unit("spending weight", w)
        for g in self.levels:
            _check_nonneg("spending level", g)
        if abs(sum(self.weights) - 1.0) > WEIGHT_SUM_TOL:
            raise InvariantViolation(
                f"spending weights must sum to 1, got {sum(self.weights)!r}"
            )


@dataclass(frozen=True)
class WelfareInputs:
    """Weighted hardship indicators, each in [0, 1]; weights sum to 1."""

    weights: tuple[float, ...]
    hardships: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        object.__setattr__(self, "hardships", tuple(float(h) for h in self.hardships))
        if len(self.weights) != len(self.hardships):
            raise InvariantViolation("weights and hardships must have equal length")
        if not self.weights:
            raise InvariantViolation("at least one welfare indicator is required")
        for w in self.weights:
            _check_unit("welfare weight", w)
        for h in self.hardships:
            _check_unit("hardship level", h)
        if abs(sum(self.weights) - 1.0) > WEIGHT_SUM_TOL:
            raise InvariantViolation(
                f"welfare weights must sum to 1, got {sum(self.weights)!r}"
            )


@dataclass(frozen=True)
class StabilityReport:
    """Everything the stability analysis of one parameter set produces.

    ``stable`` means the pole magnitude is at most 1: responses stay
    bounded, with the tie at exactly 1 marginal rather than growing.
    A marginal pole with nonzero constant flow still drifts linearly,
    which the ``fixed_point`` field reports separately.
    """

    mode: str
    coefficients: RecurrenceCoefficients
    pole: float
    stable: bool
    fixed_point: float | DivergentFixedPoint
    leverage: float
    stable_tax_range: tuple[float, float] | DegenerateRange | None
    tax_rate: float
    shrinking: bool

    @property
    def t_lower(self) -> float | None:
        if isinstance(self.stable_tax_range, tuple):
            return self.stable_tax_range[0]
        return None

    @property
    def t_upper(self) -> float | None:
        if isinstance(self.stable_tax_range, tuple):
            return self.stable_tax_range[1]
        return None

    @property
    def range_degenerate(self) -> bool:
        return isinstance(self.stable_tax_range, DegenerateRange)

    @property
    def tax_in_stable_range(self) -> bool | None:
        """Whether the configured tax rate falls in the stable interval.

        Boundary ties count as inside, mirroring the pole-magnitude tie
        in the ``stable`` flag. None when no interval exists (degenerate
        leverage or an empty incremental-mode intersection).
        """
        if not isinstance(self.stable_tax_range, tuple):
            return None
        lo, hi = self.stable_tax_range
        return lo <= self.tax_rate <= hi


def spending_index(inputs: SpendingInputs) -> float:
    """Aggregate government spending level across weighted categories."""
    return sum(w * g for w, g in zip(inputs.weights, inputs.levels))


def welfare_index(inputs: WelfareInputs) -> float:
    """Aggregate welfare level: weighted average of one minus hardship."""
    return sum(w * (1.0 - h) for w, h in zip(inputs.weights, inputs.hardships))


def apply_deficiencies(
    params: BudgetParams, factors: DeficiencyFactors
) -> DeficiencyAdjusted:
    """Scale the levels a lossy economy actually realizes.

    Collection losses scale the tax rate, effort losses the wage pool,
    spending losses the outlay level. Currency erosion cannot be folded
    into any single parameter, so it is kept as a scale factor to apply
    to the flow balance afterwards.
    """
    return DeficiencyAdjusted(
        tax_rate=params.tax_rate * (1.0 - factors.tax_collection),
        initial_wages=params.initial_wages * (1.0 - factors.work_effort),
        gov_spending=params.gov_spending * (1.0 - factors.spending_efficiency),
        balance_scale=1.0 - factors.currency_value,
    )


def flow_balance(params: BudgetParams) -> float:
    """Government flow balance for the starting year.

    Tax revenue on the wage pool, minus the after-tax consumption that
    returns through the private loop, minus outlays paid as public wages.
    """
    w = params.initial_wages
    recirculated = (
        (1.0 - params.spending_split)
        * (1.0 - params.tax_rate)
        * (1.0 - params.private_fraction)
        * w
    )
    return w * params.tax_rate - recirculated - params.gov_spending * params.spending_split


def investments(params: BudgetParams) -> float:
    """Investment inflow for the starting year."""
    return (
        params.invest_share
        * params.initial_wages
        * (1.0 - params.tax_rate)
        * (1.0 + params.foreign_multiplier)
    )


def annual_change(params: BudgetParams) -> float:
    """Yearly change of the wage pool: flow balance plus investments."""
    return flow_balance(params) + investments(params)


def coefficients(params: BudgetParams) -> RecurrenceCoefficients:
    """Collect the wage-linear gains and the constant flow term.

    By construction annual_change(params) equals
    (balance_gain + invest_gain) * initial_wages + constant_flow.
    """
    balance_gain = params.tax_rate - (
        (1.0 - params.spending_split)
        * (1.0 - params.tax_rate)
        * (1.0 - params.private_fraction)
    )
    invest_gain = (
        params.invest_share
        * (1.0 - params.tax_rate)
        * (1.0 + params.foreign_multiplier)
    )
    constant_flow = -params.gov_spending * params.spending_split
    return RecurrenceCoefficients(balance_gain, invest_gain, constant_flow)


def iterate(params: BudgetParams, n: int, mode: str = "direct") -> list[float]:
    """Roll the recurrence forward n years; returns n + 1 pool levels.

    The first entry is the initial pool, so iterate(p, 0) is [W0].
    """
    _check_mode(mode)
    if n < 0:
        raise InvariantViolation(f"year count must be >= 0, got {n}")
    coeffs = coefficients(params)
    pole = coeffs.pole_in_mode(mode)
    levels = [params.initial_wages]
    for _ in range(n):
        levels.append(pole * levels[-1] + coeffs.constant_flow)
    return levels


def fixed_point(
    params: BudgetParams, mode: str = "direct"
) -> float | DivergentFixedPoint:
    """Stationary pool level of the recurrence, when one exists.

    A pole of exactly 1 makes every level stationary if the constant flow
    vanishes (the initial pool is reported) and none otherwise.
    """
    _check_mode(mode)
    coeffs = coefficients(params)
    pole = coeffs.pole_in_mode(mode)
    if pole == 1.0:
        if coeffs.constant_flow == 0.0:
            return params.initial_wages
        return DivergentFixedPoint()
    return coeffs.constant_flow / (1.0 - pole)


def closed_form(params: BudgetParams, n: int, mode: str = "direct") -> float:
    """Pool level after n years, evaluated without iterating.

    W_n = pole**n * (W_0 - b) + b with b the fixed point; at a pole of
    exactly 1 the limit form W_0 + n * constant_flow applies.
    """
    _check_mode(mode)
    if n < 0:
        raise InvariantViolation(f"year count must be >= 0, got {n}")
    coeffs = coefficients(params)
    pole = coeffs.pole_in_mode(mode)
    if pole == 1.0:
        return params.initial_wages + n * coeffs.constant_flow
    base = coeffs.constant_flow / (1.0 - pole)
    return pole**n * (params.initial_wages - base) + base


def impulse_response(params: BudgetParams, n: int, mode: str = "direct") -> float:
    """Response at year n to a unit-impulse outlay pattern.

    Starting the recurrence from an empty pool, one round of constant
    flow injected at year zero echoes as constant_flow * pole**n.
    """
    _check_mode(mode)
    if n < 0:
        raise InvariantViolation(f"year count must be >= 0, got {n}")
    coeffs = coefficients(params)
    return coeffs.constant_flow * coeffs.pole_in_mode(mode) ** n


def tax_leverage(params: BudgetParams) -> float:
    """Sensitivity of the pole to the tax rate, minus one.

    The pole regroups as tax_rate * (1 + leverage) - leverage, so this
    single number fixes which tax rates keep the system stable.
    """
    return (1.0 - params.spending_split) * (
        1.0 - params.private_fraction
    ) - params.invest_share * (1.0 + params.foreign_multiplier)


def taxation_range(
    params: BudgetParams, mode: str = "direct"
) -> tuple[float, float] | DegenerateRange | None:
    """Open interval of tax rates with the pole inside the unit circle.

    Derived by solving |pole| < 1 for the tax rate using the regrouped
    form pole = t * (1 + leverage) - leverage, then intersecting with
    the admissible [0, 1]. Leverage at or below -1 flips the direction
    of both inequalities and is reported as DegenerateRange. In
    incremental mode the unit-circle condition lands on a different
    interval, which can be empty (None).
    """
    _check_mode(mode)
    lev = tax_leverage(params)
    denom = 1.0 + lev
    if denom <= 0.0:
        return DegenerateRange(lev)
    if mode == "direct":
        lo = max(0.0, (lev - 1.0) / denom)
        hi = 1.0
    else:
        lo = max(0.0, (lev - 2.0) / denom)
        hi = min(1.0, lev / denom)
    if not lo < hi:
        return None
    return (lo, hi)


def shrink_condition(params: BudgetParams) -> bool:
    """Formal predicate for a pole below -1 at a zero tax rate.

    Requires leverage above 1, which the admissible parameter box can
    never reach (the product of two numbers in [0, 1] caps the positive
    part at 1 and the investment term only subtracts). Exposed so the
    unreachability can be scanned and documented rather than assumed.
    """
    return tax_leverage(params) > 1.0


def stability_report(params: BudgetParams, mode: str = "direct") -> StabilityReport:
    """Full stability analysis of one parameter set in one mode."""
    _check_mode(mode)
    coeffs = coefficients(params)
    pole = coeffs.pole_in_mode(mode)
    return StabilityReport(
        mode=mode,
        coefficients=coeffs,
        pole=pole,
        stable=abs(pole) <= 1.0,
        fixed_point=fixed_point(params, mode),
        leverage=tax_leverage(params),
        stable_tax_range=taxation_range(params, mode),
        tax_rate=params.tax_rate,
        shrinking=shrink_condition(params),
    )
