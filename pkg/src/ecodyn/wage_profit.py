"""Net profit per production unit as a function of total labor cost.

The unit cost is a convex weighted sum of cost factors with labor singled
out; net profit per sold unit is the margin against the maximum market
price, normalized by labor cost. The resulting profit curve is strictly
decreasing and convex in the wage, so a legislated wage floor is the one
and only constrained optimum, and with no floor at all the profit ratio
diverges as the wage goes to zero.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, InvariantViolation, NonpositiveMargin

WEIGHT_SUM_TOL = 1e-12


@dataclass(frozen=True)
class CostStructure:
    """Market price ceiling plus convex cost-factor weights.

    ``other_factors`` holds (weight, unit value) pairs for every non-labor
    cost factor. Weights, labor included, must sum to 1; inputs are never
    renormalized silently.
    """

    max_market_price: float
    labor_weight: float
    other_factors: tuple[tuple[float, float], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "other_factors",
            tuple((float(w), float(z)) for w, z in self.other_factors),
        )
        if not self.max_market_price > 0:
            raise InvariantViolation(
                f"max_market_price must be > 0, got {self.max_market_price}"
            )
        weights = [self.labor_weight] + [w for w, _ in self.other_factors]
        for w in weights:
            if not 0.0 <= w <= 1.0:
                raise InvariantViolation(f"weight {w} outside [0, 1]")
        for _, z in self.other_factors:
            if z < 0:
                raise InvariantViolation(f"factor value {z} must be >= 0")
        total = sum(weights)
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise InvariantViolation(
                f"cost weights must sum to 1 within {WEIGHT_SUM_TOL}, got {total!r}"
            )


@dataclass(frozen=True)
class WageBound:
    """Minimum allowable total labor cost (the legislated floor)."""

    floor: float

    def __post_init__(self) -> None:
        if self.floor < 0:
            raise InvariantViolation(f"wage floor must be >= 0, got {self.floor}")


@dataclass(frozen=True)
class ProfitPoint:
    """A wage and the net profit ratio attained there."""

    wage: float
    net_profit: float

    def __post_init__(self) -> None:
        if not self.wage > 0:
            raise InvariantViolation(f"wage must be > 0, got {self.wage}")


@dataclass(frozen=True)
class UnboundedProfit:
    """Marker: with a zero wage floor the profit ratio has no maximum;
    it grows without bound as the wage approaches zero."""


def gross_margin(cs: CostStructure) -> float:
    """Selling-price margin left after all non-labor cost, per unit.

    This is the constant numerator of the profit curve. A nonpositive
    margin means the configuration can never turn a profit at any wage,
    which downstream monotonicity arguments rely on excluding.
    """
    margin = cs.max_market_price - sum(w * z for w, z in cs.other_factors)
    if margin <= 0:
        raise NonpositiveMargin(
            f"non-labor cost absorbs the whole selling price (margin {margin!r})"
        )
    return margin


def total_cost(cs: CostStructure, wage: float) -> float:
    """Total cost per production unit at the given total labor cost."""
    if wage < 0:
        raise DomainError(f"wage must be >= 0, got {wage}")
    return cs.labor_weight * wage + sum(w * z for w, z in cs.other_factors)


def net_profit(cs: CostStructure, wage: float) -> float:
    """Net profit ratio per sold unit: margin over wage, minus the labor weight."""
    if wage <= 0:
        raise DomainError(f"wage must be > 0, got {wage}")
    return gross_margin(cs) / wage - cs.labor_weight


def profit_derivatives(cs: CostStructure, wage: float) -> tuple[float, float]:
    """First and second derivatives of the profit curve at ``wage``.

    The first is -margin/wage^2 (never positive) and the second is
    2*margin/wage^3 (never negative), which is what pins the optimum to
    the wage floor.
    """
    if wage <= 0:
        raise DomainError(f"wage must be > 0, got {wage}")
    margin = gross_margin(cs)
    return -margin / wage**2, 2 * margin / wage**3


def optimal_wage(cs: CostStructure, bound: WageBound) -> ProfitPoint | UnboundedProfit:
    """Constrained profit optimum over wages at or above the floor.

    The curve decreases strictly, so the floor itself is the maximizer.
    A zero floor is returned as an explicit :class:`UnboundedProfit`
    marker instead of an infinite float, so callers must handle the
    degenerate no-floor policy deliberately.
    """
    margin = gross_margin(cs)
    if bound.floor == 0:
        return UnboundedProfit()
    return ProfitPoint(bound.floor, margin / bound.floor - cs.labor_weight)


def profit_curve(cs: CostStructure, wages: list[float]) -> list[ProfitPoint]:
    """Pointwise net profit over a strictly increasing wage grid."""
    for w in wages:
        if w <= 0:
            raise DomainError(f"wage grid must be positive, got {w}")
    for a, b in zip(wages, wages[1:]):
        if not a < b:
            raise InvariantViolation("wage grid must be strictly increasing")
    return [ProfitPoint(w, net_profit(cs, w)) for w in wages]
