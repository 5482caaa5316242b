"""Behaviour tests for slit packets in the truncated rotor basis."""

from __future__ import annotations

import math
import typing as typ

import pytest
from pytest_bdd import given, parsers, scenarios, then, when

from rotorbell import (
    slit_expectation,
    truncated_violation,
    violation_aperture_threshold,
)
from rotorbell.rotor_operators import CLASSICAL_BOUND, TruncationLevel

if typ.TYPE_CHECKING:
    from rotorbell.states import ViolationRecord

scenarios("../features/slit_convergence.feature")

_ORDERS = (8, 16, 32, 64)


class SlitContext(typ.TypedDict):
    """Shared state for slit scenarios."""

    delta_theta: float | None
    records: list[ViolationRecord]
    threshold: float | None


@pytest.fixture
def slit_context() -> SlitContext:
    """Provide empty slit state."""
    return {"delta_theta": None, "records": [], "threshold": None}


@given(parsers.parse("a slit aperture of {fraction:g} pi"))
def given_aperture(slit_context: SlitContext, fraction: float) -> None:
    """Set the aperture as a fraction of ``pi``."""
    slit_context["delta_theta"] = fraction * math.pi


@when("the truncated expectation is evaluated at truncations 8, 16, 32 and 64")
def when_evaluated(slit_context: SlitContext) -> None:
    """Evaluate the truncated slit expectation at doubling orders."""
    width = slit_context["delta_theta"]
    assert width is not None, "no aperture configured"
    slit_context["records"] = [
        truncated_violation(TruncationLevel(order, ceiling=64), width)
        for order in _ORDERS
    ]


@when("the aperture threshold is computed")
def when_threshold(slit_context: SlitContext) -> None:
    """Solve for the aperture where the slit expectation equals 2."""
    slit_context["threshold"] = violation_aperture_threshold()


@then("the absolute error shrinks at every step")
def then_error_shrinks(slit_context: SlitContext) -> None:
    """The error against the continuum value decreases monotonically."""
    errors = [record.abs_error for record in slit_context["records"]]
    assert all(b < a for a, b in zip(errors, errors[1:], strict=False)), (
        f"errors {errors}"
    )


@then("the largest truncation violates the classical bound")
def then_largest_violates(slit_context: SlitContext) -> None:
    """The ``M = 64`` value is above 2."""
    assert slit_context["records"][-1].value > CLASSICAL_BOUND


@then("no truncation violates the classical bound")
def then_none_violate(slit_context: SlitContext) -> None:
    """Every truncated value is below 2."""
    for record in slit_context["records"]:
        assert record.value < CLASSICAL_BOUND, f"M={record.order}: {record.value}"


@then("the threshold is close to 57.4 degrees")
def then_threshold_degrees(slit_context: SlitContext) -> None:
    """The threshold aperture is about 57.4 degrees."""
    threshold = slit_context["threshold"]
    assert threshold is not None, "threshold not computed"
    assert math.degrees(threshold) == pytest.approx(57.4, abs=0.05)


@then("slits narrower than the threshold violate")
def then_narrow_violate(slit_context: SlitContext) -> None:
    """Just inside the threshold the slit expectation exceeds 2."""
    threshold = slit_context["threshold"]
    assert threshold is not None, "threshold not computed"
    assert slit_expectation(0.99 * threshold) > CLASSICAL_BOUND
    assert slit_expectation(1.01 * threshold) < CLASSICAL_BOUND
