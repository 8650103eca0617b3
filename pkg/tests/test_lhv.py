"""Tests for the factorizable Bell-local baseline."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eprb_lab.lhv import (
    SIGN_MODEL,
    FactorizableModel,
    folded_angle,
    lhv_correlation,
    lhv_joint_distribution,
    sample_lambda,
    sample_lambda_vec,
    sign_model_outcomes,
)
from eprb_lab.quantum import TWO_PI, JointOutcome, correlation

angles = st.floats(min_value=0.0, max_value=TWO_PI, exclude_max=True)


# ---------------------------------------------------------------------------
# sample_lambda
# ---------------------------------------------------------------------------

def test_sample_lambda_deterministic_and_in_range():
    assert sample_lambda(42, 7) == sample_lambda(42, 7)
    lam = sample_lambda_vec(42, np.arange(1_000_000, dtype=np.uint64))
    assert lam.min() >= 0.0
    assert lam.max() < TWO_PI


def test_sample_lambda_scalar_vector_agreement():
    lam = sample_lambda_vec(9, np.arange(1000, dtype=np.uint64))
    for i in (0, 1, 500, 999):
        assert sample_lambda(9, i) == lam[i]


def test_sample_lambda_mean():
    # uniform on [0, 2*pi) has mean pi; 10^6 draws, tolerance ~5.5 sigma
    lam = sample_lambda_vec(3, np.arange(1_000_000, dtype=np.uint64))
    assert abs(float(lam.mean()) - math.pi) <= 0.01


# ---------------------------------------------------------------------------
# sign model
# ---------------------------------------------------------------------------

def test_sign_model_examples():
    assert sign_model_outcomes(0.0, 0.0, 0.0) is JointOutcome.PM
    assert sign_model_outcomes(math.pi, 0.0, 0.0) is JointOutcome.MP


def test_sign_model_tie_break():
    # cos(theta - lambda) == 0 resolves to +1 for A
    out = SIGN_MODEL.rule_a(math.pi / 2, 0.0)
    assert out == 1
    assert SIGN_MODEL.rule_a(0.0, 0.0) == 1
    assert SIGN_MODEL.rule_b(0.0, 0.0) == -1


@given(angles, angles, angles, angles)
@settings(max_examples=1000, deadline=None)
def test_factorization_a_ignores_phi(lam, theta, phi, phi2):
    assert (
        sign_model_outcomes(lam, theta, phi).a
        is sign_model_outcomes(lam, theta, phi2).a
    )


@given(angles, angles, angles, angles)
@settings(max_examples=1000, deadline=None)
def test_factorization_b_ignores_theta(lam, theta, theta2, phi):
    assert (
        sign_model_outcomes(lam, theta, phi).b
        is sign_model_outcomes(lam, theta2, phi).b
    )


def test_custom_model_plugs_in():
    flip = FactorizableModel(
        name="always-anticorrelated",
        rule_a=lambda t, lam: 1,
        rule_b=lambda p, lam: -1,
    )
    assert flip.outcomes(0.3, 1.0, 2.0) is JointOutcome.PM


# ---------------------------------------------------------------------------
# correlation
# ---------------------------------------------------------------------------

@pytest.mark.parametrize(
    "delta,expected",
    [(0.0, -1.0), (math.pi / 2, 0.0), (math.pi / 4, -0.5), (math.pi, 1.0)],
)
def test_analytic_examples(delta, expected):
    assert lhv_correlation(0.0, delta) == pytest.approx(expected, abs=1e-12)


def _quadrature_correlation(theta, phi, n=200_000):
    # midpoint-rule integration oracle over the hidden variable
    lam = (np.arange(n) + 0.5) * (TWO_PI / n)
    a = np.where(np.cos(theta - lam) >= 0, 1.0, -1.0)
    b = -np.where(np.cos(phi - lam) >= 0, 1.0, -1.0)
    return float(np.mean(a * b))


@pytest.mark.parametrize("theta,phi", [(0.0, 0.9), (1.3, 4.0), (5.9, 0.4), (2.2, 2.9)])
def test_analytic_matches_quadrature_oracle(theta, phi):
    assert lhv_correlation(theta, phi) == pytest.approx(
        _quadrature_correlation(theta, phi), abs=1e-4
    )


def test_agreement_with_quantum_at_special_angles():
    for delta in (0.0, math.pi / 2, math.pi):
        assert abs(lhv_correlation(0.3, 0.3 + delta) - correlation(0.3, 0.3 + delta)) <= 1e-9


def test_chsh_bound_random_tuples():
    rng = np.random.default_rng(7)
    tuples = rng.uniform(0.0, TWO_PI, size=(10_000, 4))
    worst = 0.0
    for a, a_p, b, b_p in tuples:
        s = (
            lhv_correlation(a, b)
            - lhv_correlation(a, b_p)
            + lhv_correlation(a_p, b)
            + lhv_correlation(a_p, b_p)
        )
        worst = max(worst, abs(s))
    assert worst <= 2.0 + 1e-9


def test_monte_carlo_converges_to_analytic():
    rng = np.random.default_rng(21)
    for i in range(10):
        theta, phi = rng.uniform(0.0, TWO_PI, size=2)
        mc = lhv_correlation(theta, phi, trials=100_000, seed=1000 + i)
        assert abs(mc - lhv_correlation(theta, phi)) <= 0.02


def test_monte_carlo_rejects_bad_trials():
    with pytest.raises(ValueError):
        lhv_correlation(0.0, 1.0, trials=0)


# ---------------------------------------------------------------------------
# model joint distribution
# ---------------------------------------------------------------------------

@given(angles, angles)
@settings(max_examples=1000, deadline=None)
def test_lhv_joint_distribution_consistency(theta, phi):
    dist = lhv_joint_distribution(theta, phi)
    assert abs(sum(dist.as_tuple()) - 1.0) <= 1e-12
    assert dist.marginal_plus(1) == 0.5
    assert dist.marginal_plus(2) == 0.5
    assert abs(dist.correlation - lhv_correlation(theta, phi)) <= 1e-12


def test_folded_angle():
    assert folded_angle(0.0, math.pi / 4) == pytest.approx(math.pi / 4, abs=1e-15)
    assert folded_angle(0.0, 3 * math.pi / 2) == pytest.approx(math.pi / 2, abs=1e-12)
    assert folded_angle(1.0, 1.0) == 0.0
