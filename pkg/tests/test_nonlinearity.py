import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from satlab.errors import DomainError
from satlab.nonlinearity import (Kind, NonlinearitySpec, beta, beta_prime,
                                 g_antiderivative)

T1 = NonlinearitySpec(Kind.TYPE1, q=2, p=4)
T2 = NonlinearitySpec(Kind.TYPE2, q=2)


def test_construction_rejects_bad_parameters():
    with pytest.raises(DomainError):
        NonlinearitySpec(Kind.TYPE1, q=2, p=3.0)   # p <= 2 + 4/d
    with pytest.raises(DomainError):
        NonlinearitySpec(Kind.TYPE1, q=-1, p=4)
    with pytest.raises(DomainError):
        NonlinearitySpec(Kind.TYPE1, q=5, p=4)     # q >= p
    with pytest.raises(DomainError):
        NonlinearitySpec(Kind.TYPE1, q=1, p=None)
    with pytest.raises(DomainError):
        NonlinearitySpec(Kind.TYPE2, q=3)          # super-saturated exponent
    with pytest.raises(DomainError):
        NonlinearitySpec(Kind.TYPE2, q=2, p=4)
    with pytest.raises(DomainError):
        NonlinearitySpec(Kind.TYPE1, q=2, p=4, d=2)


def test_strict_mode_enforces_mass_subcriticality():
    with pytest.raises(DomainError):
        NonlinearitySpec(Kind.TYPE1, q=2, p=4, strict=True)
    NonlinearitySpec(Kind.TYPE1, q=1, p=4, strict=True)
    NonlinearitySpec(Kind.TYPE2, q=1, strict=True)


def test_beta_reference_values():
    assert beta(T1, 1.0) == pytest.approx(0.5, abs=1e-15)
    assert beta(T1, 0.0) == 0.0
    assert beta(T2, 0.0) == 0.0
    assert beta(T2, 3.0) == pytest.approx(3.0, abs=1e-14)


def test_beta_negative_argument_rejected():
    with pytest.raises(DomainError):
        beta(T1, -1.0)
    with pytest.raises(DomainError):
        beta_prime(T2, -0.5)
    with pytest.raises(DomainError):
        g_antiderivative(T1, -2.0)


def test_beta_prime_reference_values():
    # d/ds s^2/(1+s) = (s^2 + 2s)/(1+s)^2
    assert beta_prime(T1, 1.0) == pytest.approx(0.75, abs=1e-14)
    assert beta_prime(T1, 0.0) == 0.0
    assert beta_prime(T2, 5.0) == pytest.approx(1.0, abs=1e-14)


def test_small_s_asymptote():
    s = 1e-6
    assert beta(T1, s) / s ** (T1.p / 2) == pytest.approx(1.0, rel=1e-2)
    assert beta(T2, s) / s == pytest.approx(1.0, rel=1e-2)


def test_large_s_asymptote():
    s = 1e8
    assert beta(T1, s) / s ** (T1.q / 2) == pytest.approx(1.0, rel=1e-2)


def test_log_space_evaluation_handles_extreme_s():
    spec = NonlinearitySpec(Kind.TYPE1, q=1, p=12)
    for s in (1e-280, 1e280):
        v = beta(spec, s)
        assert np.isfinite(v) and v >= 0.0
        assert np.isfinite(beta_prime(spec, s))


@pytest.mark.parametrize("spec", [
    T1, T2,
    NonlinearitySpec(Kind.TYPE1, q=1, p=4),
    NonlinearitySpec(Kind.TYPE1, q=0.5, p=7),
    NonlinearitySpec(Kind.TYPE2, q=0.7),
])
def test_beta_prime_matches_central_differences(spec):
    s = np.logspace(-4, 4, 100)
    h = 1e-6 * s
    fd = (beta(spec, s + h) - beta(spec, s - h)) / (2 * h)
    assert np.allclose(beta_prime(spec, s), fd, rtol=1e-6)


def test_g_trivial_cases():
    assert g_antiderivative(T1, 0.0) == 0.0
    assert g_antiderivative(T2, 2.0) == pytest.approx(2.0, abs=1e-14)


def test_g_against_independent_quadrature():
    # high-order Gauss-Kronrod of beta as the oracle (closed form path in G)
    expected, _ = integrate.quad(lambda s: beta(T1, s), 0.0, 1.0,
                                 epsabs=1e-13, epsrel=1e-13)
    assert g_antiderivative(T1, 1.0) == pytest.approx(expected, abs=1e-10)
    # non-integer exponents exercise the quadrature path
    spec = NonlinearitySpec(Kind.TYPE1, q=0.5, p=3.7)
    expected, _ = integrate.quad(lambda s: beta(spec, s), 0.0, 2.5,
                                 epsabs=1e-13, epsrel=1e-13)
    assert g_antiderivative(spec, 2.5) == pytest.approx(expected, abs=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=0.0, max_value=1e6),
       st.floats(min_value=0.0, max_value=1e6))
def test_g_monotone_nondecreasing(t_a, t_b):
    lo, hi = sorted((t_a, t_b))
    assert g_antiderivative(T2, hi) >= g_antiderivative(T2, lo) - 1e-12


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=0.0, max_value=1e12))
def test_beta_nonnegative(s):
    assert beta(T1, s) >= 0.0
    assert beta(T2, s) >= 0.0
