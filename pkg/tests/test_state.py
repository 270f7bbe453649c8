import math
from decimal import Decimal, getcontext

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from radeuler.state import (
    ConservedState,
    DomainError,
    PrimitiveState,
    entropy_pair,
    flux_c,
    four_velocity,
    pressure,
    three_velocity,
    to_conserved,
    to_primitive,
)

pressures = st.floats(1e-6, 1e6)
four_vel = st.floats(-50.0, 50.0)


def test_rest_state():
    c = to_conserved(PrimitiveState(1.0, 0.0))
    assert (c.a, c.b) == (3.0, 0.0)
    assert flux_c(c) == 1.0


def test_unit_outflow_state():
    c = to_conserved(PrimitiveState(1.0, 1.0))
    assert c.a == 7.0
    assert c.b == pytest.approx(4 * math.sqrt(2), rel=1e-15)
    s = to_primitive(ConservedState(7.0, 4 * math.sqrt(2)))
    assert s.p == pytest.approx(1.0, rel=1e-14)
    assert s.u == pytest.approx(1.0, rel=1e-14)
    assert flux_c(ConservedState(7.0, 4 * math.sqrt(2))) == pytest.approx(5.0, rel=1e-14)


def test_vacuum_boundary_rejected():
    with pytest.raises(DomainError):
        to_primitive(ConservedState(1.0, 1.0))
    with pytest.raises(DomainError):
        to_primitive(ConservedState(1.0, -1.5))
    with pytest.raises(DomainError):
        to_conserved(PrimitiveState(0.0, 0.3))


def test_array_inputs():
    c = to_conserved(PrimitiveState(np.array([1.0, 2.0]), np.array([0.0, -1.0])))
    assert c.a.shape == (2,)
    np.testing.assert_allclose(c.a, [3.0, 14.0])


@given(pressures, four_vel)
def test_roundtrip(p, u):
    c = to_conserved(PrimitiveState(p, u))
    back = to_primitive(c)
    # a - b ~ p while a ~ 4 p u^2: the inverse map amplifies rounding by ~ u^2
    tol = 1e-14 * (1.0 + u * u)
    assert back.p == pytest.approx(p, rel=tol)
    assert back.u == pytest.approx(u, rel=tol, abs=1e-12)


@given(pressures, four_vel)
def test_image_in_state_space(p, u):
    c = to_conserved(PrimitiveState(p, u))
    assert abs(c.b) < c.a


@given(pressures, four_vel)
def test_odd_in_velocity(p, u):
    c1 = to_conserved(PrimitiveState(p, u))
    c2 = to_conserved(PrimitiveState(p, -u))
    assert c1.a == c2.a and c1.b == -c2.b


@given(pressures, four_vel)
def test_flux_closure_identity(p, u):
    # c = p (1 + 4u^2)
    c = to_conserved(PrimitiveState(p, u))
    assert flux_c(c) == pytest.approx(p * (1 + 4 * u * u), rel=1e-12)


@given(st.floats(-0.999999, 0.999999))
def test_velocity_inverse(v):
    assert three_velocity(four_velocity(v)) == pytest.approx(v, rel=1e-12, abs=1e-15)


def test_superluminal_velocity_rejected():
    with pytest.raises(DomainError):
        four_velocity(1.0)


def test_entropy_pair_values():
    rho, flux = entropy_pair(to_conserved(PrimitiveState(1.0 / 16.0, 0.0)))
    assert rho == pytest.approx(0.125, rel=1e-15)
    assert flux == 0.0
    rho, flux = entropy_pair(to_conserved(PrimitiveState(1.0, 1.0)))
    assert rho == pytest.approx(math.sqrt(2.0), rel=1e-14)
    assert flux == pytest.approx(1.0, rel=1e-14)


@settings(max_examples=50)
@given(st.floats(1e-15, 1e-3))
def test_pressure_accurate_near_vacuum(gap):
    getcontext().prec = 60
    a, b = 1.0, 1.0 - gap
    da, db = Decimal(a), Decimal(b)
    exact = ((4 * da * da - 3 * db * db).sqrt() - da) / 3
    assert pressure(a, b) == pytest.approx(float(exact), rel=1e-12)
