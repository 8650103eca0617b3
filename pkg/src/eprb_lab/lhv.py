"""Factorizable (Bell-local) baseline model.

Outcomes here have the factorized form A(theta, lambda), B(phi, lambda):
each party's result depends only on its own magnet angle and a shared
hidden variable lambda drawn independently of both settings. Any such
model obeys |S| <= 2 for the CHSH combination, which is what makes it the
quantitative contrast to the singlet's -cos(theta - phi) correlation.

The default rule pair is the classic anti-correlated sign model

    A = sign(cos(theta - lambda)),   B = -sign(cos(phi - lambda)),

with lambda uniform on [0, 2*pi) and the tie-break sign(0) := +1. Its
correlation integrates to E = -1 + 2*d/pi (d = |theta - phi| folded into
[0, pi]), which agrees with the quantum curve at d in {0, pi/2, pi} and
saturates |S| = 2 at the standard CHSH angles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .quantum import JointDistribution, JointOutcome, Outcome, TWO_PI, normalize_angle
from .rng import MASK64, derive_vec, uniform, uniform_vec

#: A hidden variable is an angle in [0, 2*pi).
HiddenVariable = float

OutcomeRule = Callable[[float, float], int]


@dataclass(frozen=True)
class FactorizableModel:
    """A pair of local outcome rules; each sees one angle plus lambda only.

    The signature is the locality constraint: ``rule_a(theta, lam)`` can
    never read phi, and ``rule_b(phi, lam)`` can never read theta. Rules
    must return +1 or -1. Alternative local models can be plugged in
    without touching the experiment harness.
    """

    name: str
    rule_a: OutcomeRule
    rule_b: OutcomeRule

    def outcomes(self, lam: float, theta: float, phi: float) -> JointOutcome:
        a = Outcome.from_sign(self.rule_a(theta, lam))
        b = Outcome.from_sign(self.rule_b(phi, lam))
        return JointOutcome.from_outcomes(a, b)


def _sign_plus(x: float) -> int:
    """Sign with the documented tie-break sign(0) := +1."""
    return 1 if x >= 0.0 else -1


SIGN_MODEL = FactorizableModel(
    name="sign-cos",
    rule_a=lambda theta, lam: _sign_plus(math.cos(theta - lam)),
    rule_b=lambda phi, lam: -_sign_plus(math.cos(phi - lam)),
)


def sample_lambda(seed: int, index: int) -> HiddenVariable:
    """Hidden variable for trial ``index``: uniform on [0, 2*pi), deterministic.

    Equals ``2*pi * uniform(derive(seed, index))`` (see :mod:`.rng`).
    """
    return TWO_PI * uniform(seed, index)


def sample_lambda_vec(seed: int, indices: np.ndarray) -> np.ndarray:
    """Vectorized :func:`sample_lambda` over an array of trial indices."""
    return TWO_PI * uniform_vec(derive_vec(seed & MASK64, indices.astype(np.uint64)))


def sign_model_outcomes(lam: float, theta: float, phi: float) -> JointOutcome:
    """Joint outcome of the default sign model at hidden variable ``lam``."""
    return SIGN_MODEL.outcomes(lam, theta, phi)


def folded_angle(theta: float, phi: float) -> float:
    """|theta - phi| folded into [0, pi]."""
    d = normalize_angle(normalize_angle(theta) - normalize_angle(phi))
    return d if d <= math.pi else TWO_PI - d


def lhv_correlation(
    theta: float,
    phi: float,
    *,
    trials: int | None = None,
    seed: int = 0,
) -> float:
    """Correlation of the sign model: analytic, or Monte Carlo when ``trials`` is set.

    Analytic value: -1 + 2*d/pi with d = |theta - phi| folded into [0, pi].
    Monte Carlo averages A*B over ``trials`` hidden variables drawn with
    :func:`sample_lambda_vec`; it converges to the analytic value.
    """
    if trials is None:
        return -1.0 + 2.0 * folded_angle(theta, phi) / math.pi
    if trials < 1:
        raise ValueError("trials must be >= 1")
    lam = sample_lambda_vec(seed, np.arange(trials, dtype=np.uint64))
    a = np.where(np.cos(theta - lam) >= 0.0, 1.0, -1.0)
    b = -np.where(np.cos(phi - lam) >= 0.0, 1.0, -1.0)
    return float(np.mean(a * b))


def lhv_joint_distribution(theta: float, phi: float) -> JointDistribution:
    """Joint outcome distribution of the sign model under uniform lambda.

    P(+,+) = P(-,-) = d/(2*pi) and P(+,-) = P(-,+) = 1/2 - d/(2*pi), with
    d = |theta - phi| folded into [0, pi]; marginals are exactly 1/2.
    """
    q = folded_angle(theta, phi) / TWO_PI
    r = 0.5 - q
    return JointDistribution(p_pp=q, p_pm=r, p_mp=r, p_mm=q)
