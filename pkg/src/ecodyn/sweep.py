"""Parameter sweeps over the three models, on one or two axes.

A sweep takes a base parameter set, replaces one or two named parameters
with grid values, evaluates the model at every grid cell in row-major
order (last axis fastest), and collects the outputs into flat records.
Cells where the model rejects the parameter combination are kept in
place but flagged, so grids stay rectangular.
"""

from __future__ import annotations

import datetime as _dt
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from . import budget_dynamics as bd
from . import value_feedback as vf
from . import wage_profit as wp
from .errors import EcodynError, InvariantViolation


@dataclass(frozen=True)
class Axis:
    """One swept parameter: an inclusive range sampled at evenly spaced points."""

    name: str
    lower: float
    upper: float
    points: int

    def __post_init__(self) -> None:
        if not self.name:
            raise InvariantViolation("axis name must be non-empty")
        if self.points < 1:
            raise InvariantViolation(f"axis needs at least 1 point, got {self.points}")
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise InvariantViolation("axis bounds must be finite")
        if self.points > 1 and not self.lower < self.upper:
            raise InvariantViolation(
                f"axis {self.name!r} needs lower < upper, got "
                f"[{self.lower}, {self.upper}]"
            )

    def grid(self) -> list[float]:
        return [float(v) for v in np.linspace(self.lower, self.upper, self.points)]


@dataclass(frozen=True)
class ParamGrid:
    """Cartesian product of one or more axes, row-major."""

    axes: tuple[Axis, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "axes", tuple(self.axes))
        if not self.axes:
            raise InvariantViolation("a sweep needs at least one axis")
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise InvariantViolation(f"duplicate axis names: {names}")

    @property
    def cells(self) -> int:
        n = 1
        for a in self.axes:
            n *= a.points
        return n

    def coords(self) -> list[dict[str, float]]:
        names = [a.name for a in self.axes]
        return [
            dict(zip(names, values))
            for values in itertools.product(*(a.grid() for a in self.axes))
        ]


@dataclass(frozen=True)
class SweepRecord:
    """One grid cell: coordinates, model outputs, and the rejection flag.

    Flagged cells carry empty outputs and the rejection reason in note.
    """

    coords: dict[str, float]
    outputs: dict[str, Any]
    flagged: bool
    note: str = ""


@dataclass(frozen=True)
class SweepResult:
    records: list[SweepRecord]
    metadata: dict[str, Any]


@dataclass(frozen=True)
class ModelBinding:
    """Hooks one model into the sweep engine.

    allowed_axes lists the parameter names a sweep may vary; required
    lists the keys that must be present in the base parameters or as an
    axis; outputs fixes the column set every record reports.
    """

    model: str
    allowed_axes: tuple[str, ...]
    required: tuple[str, ...]
    outputs: tuple[str, ...]
    evaluate: Callable[[dict[str, Any], dict[str, float]], dict[str, Any]]


def _eval_wage(base: dict[str, Any], coords: dict[str, float]) -> dict[str, Any]:
    merged = {**base, **coords}
    cs = wp.CostStructure(
        merged["max_market_price"],
        merged["labor_weight"],
        tuple(tuple(pair) for pair in merged.get("other_factors", ())),
    )
    return {"net_profit": wp.net_profit(cs, merged["wage"])}


def _eval_value(base: dict[str, Any], coords: dict[str, float]) -> dict[str, Any]:
    merged = {**base, **coords}
    exponent = merged["exponent"]
    if "homog_coeff" in merged:
        sol = vf.MarketValueSolution(exponent, merged["homog_coeff"])
    else:
        sol = vf.MarketValueSolution.with_default_coeff(exponent)
    x = merged["true_value"]
    market = vf.analytic_market_value(sol, x)
    return {"market_value": market, "gap": market - x}


def _budget_params(merged: dict[str, Any]) -> bd.BudgetParams:
    return bd.BudgetParams(
        tax_rate=merged["tax_rate"],
        spending_split=merged["spending_split"],
        private_fraction=merged["private_fraction"],
        invest_share=merged["invest_share"],
        foreign_multiplier=merged["foreign_multiplier"],
        gov_spending=merged["gov_spending"],
        initial_wages=merged["initial_wages"],
    )


def _eval_budget(base: dict[str, Any], coords: dict[str, float]) -> dict[str, Any]:
    merged = {**base, **coords}
    mode = merged.get("mode", "direct")
    horizon = int(merged.get("horizon", 10))
    params = _budget_params(merged)
    report = bd.stability_report(params, mode)
    return {
        "pole": report.pole,
        "stable": report.stable,
        "final_pool": bd.closed_form(params, horizon, mode),
    }


BUDGET_AXES = (
    "tax_rate",
    "spending_split",
    "private_fraction",
    "invest_share",
    "foreign_multiplier",
)

BINDINGS: dict[str, ModelBinding] = {
    "wage": ModelBinding(
        model="wage",
        allowed_axes=("wage",),
        required=("max_market_price", "labor_weight", "wage"),
        outputs=("net_profit",),
        evaluate=_eval_wage,
    ),
    "value": ModelBinding(
        model="value",
        allowed_axes=("true_value", "exponent"),
        required=("exponent", "true_value"),
        outputs=("market_value", "gap"),
        evaluate=_eval_value,
    ),
    "budget": ModelBinding(
        model="budget",
        allowed_axes=BUDGET_AXES,
        required=BUDGET_AXES + ("gov_spending", "initial_wages"),
        outputs=("pole", "stable", "final_pool"),
        evaluate=_eval_budget,
    ),
}


def check_binding(
    binding: ModelBinding, base: dict[str, Any], grid: ParamGrid
) -> None:
    """Reject bad sweep setups before any cell is evaluated."""
    for axis in grid.axes:
        if axis.name not in binding.allowed_axes:
            raise InvariantViolation(
                f"model {binding.model!r} cannot sweep {axis.name!r}; "
                f"allowed axes: {binding.allowed_axes}"
            )
    axis_names = {a.name for a in grid.axes}
    missing = [k for k in binding.required if k not in base and k not in axis_names]
    if missing:
        raise InvariantViolation(
            f"model {binding.model!r} is missing parameters {missing}"
        )


def sweep(
    binding: ModelBinding,
    base: dict[str, Any],
    grid: ParamGrid,
    workers: int = 1,
) -> SweepResult:
    """Evaluate the model over the whole grid.

    Records arrive in row-major grid order regardless of the worker
    count; per-cell rejections become flagged records, never exceptions.
    """
    if workers < 1:
        raise InvariantViolation(f"workers must be >= 1, got {workers}")
    check_binding(binding, base, grid)

    def cell(coords: dict[str, float]) -> SweepRecord:
        try:
            outputs = binding.evaluate(base, coords)
        except EcodynError as exc:
            return SweepRecord(coords, {}, True, str(exc))
        return SweepRecord(coords, outputs, False)

    all_coords = grid.coords()
    if workers == 1:
        records = [cell(c) for c in all_coords]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(cell, all_coords))

    metadata = {
        "model": binding.model,
        "kind": "sweep",
        "axes": [
            {"name": a.name, "min": a.lower, "max": a.upper, "points": a.points}
            for a in grid.axes
        ],
        "cells": grid.cells,
        "flagged": sum(1 for r in records if r.flagged),
        "workers": workers,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
    }
    return SweepResult(records, metadata)


def stability_region(
    base: dict[str, Any], grid: ParamGrid, mode: str = "direct", workers: int = 1
) -> SweepResult:
    """Two-axis budget sweep reporting only the pole and the stable mask."""
    if len(grid.axes) != 2:
        raise InvariantViolation(
            f"a stability region needs exactly 2 axes, got {len(grid.axes)}"
        )

    def evaluate(b: dict[str, Any], coords: dict[str, float]) -> dict[str, Any]:
        merged = {**b, **coords}
        report = bd.stability_report(_budget_params(merged), mode)
        return {"pole": report.pole, "stable": report.stable}

    binding = ModelBinding(
        model="budget",
        allowed_axes=BUDGET_AXES,
        required=BUDGET_AXES + ("gov_spending", "initial_wages"),
        outputs=("pole", "stable"),
        evaluate=evaluate,
    )
    result = sweep(binding, {**base, "mode": mode}, grid, workers=workers)
    result.metadata["kind"] = "stability_region"
    result.metadata["mode"] = mode
    return result
