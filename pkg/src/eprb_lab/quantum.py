"""Closed-form singlet statistics for two Stern-Gerlach magnet angles.

A spin-singlet pair measured along in-plane magnet directions theta
(particle 1) and phi (particle 2) has joint outcome probabilities

    P(+,+) = P(-,-) = (1/2) sin^2((theta - phi)/2)
    P(+,-) = P(-,+) = (1/2) cos^2((theta - phi)/2)

and correlation E = -cos(theta - phi). Everything here is a pure function
of the two angles; angles are normalized into [0, 2*pi) before any
trigonometry so results depend on the inputs only mod 2*pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum, IntEnum

TWO_PI = 2.0 * math.pi

#: Absolute tolerance for analytic identities (double-precision headroom).
ANALYTIC_TOL = 1e-12


def normalize_angle(x: float) -> float:
    """Fold a finite angle in radians into [0, 2*pi).

    Adding any integer multiple of 2*pi to ``x`` yields the same result
    (up to the single rounding of the addition itself).
    """
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"angle must be finite, got {x!r}")
    r = math.fmod(x, TWO_PI)
    if r < 0.0:
        r += TWO_PI
    if r >= TWO_PI:  # fmod/addition can round up to exactly 2*pi
        r = 0.0
    return r


class Outcome(IntEnum):
    """Single-particle measurement outcome along the local magnet axis."""

    PLUS = +1
    MINUS = -1

    @property
    def symbol(self) -> str:
        return "+" if self is Outcome.PLUS else "-"

    def __str__(self) -> str:
        return self.symbol

    @classmethod
    def from_sign(cls, value: int) -> "Outcome":
        if value == 1:
            return cls.PLUS
        if value == -1:
            return cls.MINUS
        raise ValueError(f"outcome must be +1 or -1, got {value!r}")


class JointOutcome(Enum):
    """One of the four joint outcomes, in the fixed order ++, +-, -+, --.

    The enum value is the outcome's index in that order; every sampler and
    count table in the package uses the same indexing.
    """

    PP = 0
    PM = 1
    MP = 2
    MM = 3

    @property
    def code(self) -> int:
        return self.value

    @property
    def a(self) -> Outcome:
        return Outcome.PLUS if self.value in (0, 1) else Outcome.MINUS

    @property
    def b(self) -> Outcome:
        return Outcome.PLUS if self.value in (0, 2) else Outcome.MINUS

    @property
    def symbols(self) -> str:
        return self.a.symbol + self.b.symbol

    def __str__(self) -> str:
        return self.symbols

    @classmethod
    def from_code(cls, code: int) -> "JointOutcome":
        return _JOINT_BY_CODE[code]

    @classmethod
    def from_outcomes(cls, a: Outcome, b: Outcome) -> "JointOutcome":
        return _JOINT_BY_CODE[(0 if a is Outcome.PLUS else 2) + (0 if b is Outcome.PLUS else 1)]


_JOINT_BY_CODE = {m.value: m for m in JointOutcome}

#: Canonical cell order used by distributions, counts and samplers.
OUTCOME_ORDER: tuple[JointOutcome, ...] = (
    JointOutcome.PP,
    JointOutcome.PM,
    JointOutcome.MP,
    JointOutcome.MM,
)


@dataclass(frozen=True)
class SingletAmplitudes:
    """Expansion amplitudes of the singlet in the product basis at (theta, phi)."""

    c_pp: complex
    c_pm: complex
    c_mp: complex
    c_mm: complex

    def squared_magnitudes(self) -> tuple[float, float, float, float]:
        return (
            abs(self.c_pp) ** 2,
            abs(self.c_pm) ** 2,
            abs(self.c_mp) ** 2,
            abs(self.c_mm) ** 2,
        )


@dataclass(frozen=True)
class JointDistribution:
    """Probabilities of the four joint outcomes, in OUTCOME_ORDER.

    ``theoretical`` distinguishes closed-form distributions (which must
    satisfy the exact singlet symmetries p_pp == p_mm and p_pm == p_mp)
    from empirical frequency tables, where finite-sample asymmetry is
    expected and only range/normalization are enforced.
    """

    p_pp: float
    p_pm: float
    p_mp: float
    p_mm: float
    theoretical: bool = field(default=True, compare=False)

    def __post_init__(self) -> None:
        cells = self.as_tuple()
        for p in cells:
            if not (0.0 <= p <= 1.0):
                raise ValueError(f"probability out of range: {p!r}")
        if abs(sum(cells) - 1.0) > ANALYTIC_TOL:
            raise ValueError(f"probabilities must sum to 1, got {sum(cells)!r}")
        if self.theoretical and (self.p_pp != self.p_mm or self.p_pm != self.p_mp):
            raise ValueError("theoretical distribution violates singlet symmetry")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p_pp, self.p_pm, self.p_mp, self.p_mm)

    def probability(self, outcome: JointOutcome) -> float:
        return self.as_tuple()[outcome.code]

    @property
    def correlation(self) -> float:
        """Expected product of the two +-1 outcomes."""
        return (self.p_pp + self.p_mm) - (self.p_pm + self.p_mp)

    def marginal_plus(self, party: int) -> float:
        """Probability that the given party (1 or 2) measures +."""
        if party == 1:
            return self.p_pp + self.p_pm
        if party == 2:
            return self.p_pp + self.p_mp
        raise ValueError(f"party must be 1 or 2, got {party!r}")


def singlet_amplitudes(theta: float, phi: float) -> SingletAmplitudes:
    """Amplitudes of the singlet in the product basis at magnet angles (theta, phi).

    Phase convention (fixed; only squared magnitudes are observable):

        c_pp = -i sin(d/2)/sqrt(2),   c_pm = +cos(d/2)/sqrt(2),
        c_mp = -cos(d/2)/sqrt(2),     c_mm = +i sin(d/2)/sqrt(2),

    with d = (theta - phi) normalized into [0, 2*pi).
    """
    d = normalize_angle(normalize_angle(theta) - normalize_angle(phi))
    s = math.sin(0.5 * d) / math.sqrt(2.0)
    c = math.cos(0.5 * d) / math.sqrt(2.0)
    return SingletAmplitudes(
        c_pp=complex(0.0, -s),
        c_pm=complex(c, 0.0),
        c_mp=complex(-c, 0.0),
        c_mm=complex(0.0, s),
    )


def joint_distribution(theta: float, phi: float) -> JointDistribution:
    """Joint outcome distribution of the singlet at magnet angles (theta, phi).

    The same-outcome cells are q = sin^2(d/2)/2; the opposite-outcome cells
    are computed as 1/2 - q so each party's marginal is exactly 1/2 in
    floating point, not just analytically.
    """
    d = normalize_angle(normalize_angle(theta) - normalize_angle(phi))
    q = 0.5 * math.sin(0.5 * d) ** 2
    r = 0.5 - q
    return JointDistribution(p_pp=q, p_pm=r, p_mp=r, p_mm=q)


def correlation(theta: float, phi: float) -> float:
    """Correlation E(theta, phi) = -cos(theta - phi) of the singlet."""
    d = normalize_angle(normalize_angle(theta) - normalize_angle(phi))
    return -math.cos(d)


def marginal(theta: float, phi: float, party: int, outcome: Outcome) -> float:
    """Single-party outcome probability; exactly 1/2 for every input.

    Computed from the joint distribution rather than returned as a
    constant, so the no-signaling property is genuinely exercised.
    """
    dist = joint_distribution(theta, phi)
    p_plus = dist.marginal_plus(party)
    return p_plus if outcome is Outcome.PLUS else 1.0 - p_plus


def conditional(theta: float, phi: float, given_b: Outcome, a: Outcome) -> float:
    """P(A = a | B = given_b) at magnet angles (theta, phi), by Bayes' rule.

    The conditioning event always has probability 1/2 here, but a zero
    denominator is still rejected defensively.
    """
    dist = joint_distribution(theta, phi)
    p_b = dist.p_pp + dist.p_mp if given_b is Outcome.PLUS else dist.p_pm + dist.p_mm
    if p_b == 0.0:
        raise ZeroDivisionError("conditioning event has probability zero")
    joint = dist.probability(JointOutcome.from_outcomes(a, given_b))
    return joint / p_b
