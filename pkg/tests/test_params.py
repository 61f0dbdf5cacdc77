import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gljunction.params import (
    ParameterError,
    Params,
    beta_from_am,
    beta_from_ell,
    c1_first_closed,
    derive_constants,
)

positive = st.floats(min_value=1e-6, max_value=1e6, allow_nan=False, allow_infinity=False)


def test_unit_parameters():
    c = derive_constants(Params(1, 1))
    # beta = sqrt2 + sqrt3 and A = (beta - 1)/(beta + 1), substituted by hand
    assert c.ell == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert c.beta == pytest.approx(math.sqrt(2) + math.sqrt(3), rel=1e-15)
    assert c.beta == pytest.approx(3.14626437, abs=1e-8)
    assert c.A == pytest.approx(0.51763809, abs=1e-8)
    assert c.gamma == 1.0
    assert math.isnan(c.c1_quad) and not c.quadrature_set


def test_first_c1_summand_dirichlet_limit():
    assert c1_first_closed(1.0) == pytest.approx(2 * math.sqrt(2) / 3, abs=1e-15)


@pytest.mark.parametrize("field", ["a", "m", "eps"])
@pytest.mark.parametrize("bad", [0.0, -1.0, math.nan, math.inf])
def test_construction_guards(field, bad):
    kw = {"a": 1.0, "m": 1.0, "eps": 1.0, field: bad}
    with pytest.raises(ParameterError, match=f"{field} must be > 0"):
        Params(**kw)


def test_small_a_limit_monotone():
    a_values = [1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-6]
    betas = [derive_constants(Params(a, 1.0)).beta for a in a_values]
    As = [derive_constants(Params(a, 1.0)).A for a in a_values]
    assert all(b1 > b0 for b0, b1 in zip(betas, betas[1:]))
    assert all(A1 > A0 for A0, A1 in zip(As, As[1:]))
    assert As[-1] > 0.998


@settings(max_examples=300, deadline=None)
@given(a=positive, m=positive)
def test_constant_identities(a, m):
    c = derive_constants(Params(a, m))
    assert c.beta > 1
    assert 0 < c.A < 1
    assert c.A == pytest.approx((c.beta - 1) / (c.beta + 1), rel=1e-12, abs=1e-15)
    assert abs(beta_from_am(a, m) - beta_from_ell(c.ell)) / c.beta < 1e-14
    assert c.gamma * c.b == pytest.approx(1.0, rel=1e-15)
    assert c.gamma == pytest.approx(math.sqrt(a / m), rel=1e-15)
