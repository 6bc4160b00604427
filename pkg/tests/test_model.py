import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import params_strategy
from optolaser.model import FIG1C, ModeState, SystemParams, phase_rotate, phase_rotate_derivative, rhs

amp = st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False)


def test_zero_state_gives_drive_term():
    p = FIG1C.with_drive(6e-3)
    d = rhs(p, ModeState())
    assert d.a1 == -6e-3j
    assert d.a2 == 0 and d.b == 0


def test_undriven_origin_is_fixed_point():
    d = rhs(FIG1C, ModeState())
    assert (d.a1, d.a2, d.b) == (0, 0, 0)


def test_rhs_hand_value():
    # -(4e-3 i + 1e-2) 0.1 - i 1e-2 0.01 - i 6e-3
    d = rhs(FIG1C.with_drive(6e-3), ModeState(0.1, 0.1, 0.1))
    assert d.a1 == pytest.approx(-1e-3 - 6.5e-3j, abs=1e-15)
    # other components, same hand arithmetic
    assert d.a2 == pytest.approx(-(5e-3j + 1e-3) * 0.1 - 1e-2j * 0.01, abs=1e-15)
    assert d.b == pytest.approx(-(5e-3j + 1e-3) * 0.1 - 1e-2j * 0.01, abs=1e-15)


def test_params_validation():
    with pytest.raises(ValueError):
        FIG1C.replace(gamma2=0.0)
    with pytest.raises(ValueError):
        FIG1C.replace(g=-1.0)
    with pytest.raises(ValueError):
        FIG1C.with_drive(-1e-3)
    with pytest.raises(ValueError):
        FIG1C.replace(omega_b=float("nan"))
    with pytest.raises(ValueError):
        ModeState(complex("inf"), 0, 0)


def test_phase_rotate_identity_and_half_turn():
    s = ModeState(0.3 - 0.1j, 1.0, 1.0)
    assert phase_rotate(s, 0.0) == s
    r = phase_rotate(s, math.pi)
    assert r.a1 == s.a1
    assert r.a2 == pytest.approx(-1.0, abs=1e-15)
    assert r.b == pytest.approx(-1.0, abs=1e-15)


@settings(max_examples=200, deadline=None)
@given(params_strategy, amp, amp, amp, st.floats(-10, 10))
def test_u1_equivariance(p, a1, a2, b, theta):
    s = ModeState(a1, a2, b)
    lhs = rhs(p, phase_rotate(s, theta))
    expect = phase_rotate_derivative(rhs(p, s), theta)
    assert abs(lhs.a1 - expect.a1) < 1e-12
    assert abs(lhs.a2 - expect.a2) < 1e-12
    assert abs(lhs.b - expect.b) < 1e-12
    # explicit form of the derivative rotation
    u = cmath.exp(1j * theta)
    assert abs(lhs.a2 - rhs(p, s).a2 * u) < 1e-12
    assert abs(lhs.b - rhs(p, s).b / u) < 1e-12


@settings(max_examples=100, deadline=None)
@given(params_strategy, amp)
def test_zero_manifold_is_invariant(p, a1):
    d = rhs(p, ModeState(a1, 0, 0))
    assert d.a2 == 0 and d.b == 0


def test_linear_damping_rate():
    # g must stay positive; 1e-300 is zero at double precision
    p = SystemParams(3e-3, -2e-3, 4e-3, 1e-2, 2e-3, 5e-3, g=1e-300)
    s = ModeState(0.7 + 0.2j, -0.4j, 1.1)
    d = rhs(p, s)
    for x, dx, gam in ((s.a1, d.a1, p.gamma1), (s.a2, d.a2, p.gamma2), (s.b, d.b, p.gamma_b)):
        # d|x|^2/dt = 2 Re(conj(x) dx/dt)
        assert 2 * (x.conjugate() * dx).real == pytest.approx(-2 * gam * abs(x) ** 2, rel=1e-12)


def test_as_array_layout():
    arr = FIG1C.with_drive(6e-3).as_array()
    np.testing.assert_array_equal(arr, [4e-3, 5e-3, 5e-3, 1e-2, 1e-3, 1e-3, 1e-2, 6e-3])
