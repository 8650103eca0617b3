"""Contextual pre-existing-outcome ledgers for the singlet experiment.

The realist model simulated here posits that, before any measurement, one
joint outcome already exists for *every* possible pair of magnet angles,
distributed according to the singlet probabilities for that pair; measuring
a pair merely reveals its entry. A :class:`Ledger` is that assignment for a
declared finite set of angle-pair contexts.

Ledger entries are drawn independently per context from a counter-based
stream, so a ledger is a pure function of ``(seed, contexts, order)`` and
is reproducible across platforms and worker counts. The derivation for
context index ``i`` is ``uniform(derive(seed, LEDGER_STREAM, i))`` mapped
through the context's cumulative joint distribution (see :mod:`.rng`).
"""

from __future__ import annotations

import itertools
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .quantum import JointOutcome, joint_distribution, normalize_angle
from .rng import MASK64, derive_vec, uniform, uniform_vec

#: Stream tag separating ledger-entry draws from other consumers of a seed.
LEDGER_STREAM = 0x4C

#: Identifier of the documented draw algorithm, recorded on every ledger.
GENERATOR_ID = "splitmix64-fold-v1"

Context = tuple[float, float]


class UnknownContextError(LookupError):
    """Raised when a context (angle pair) is not present in a ledger."""

    def __init__(self, context: Context):
        self.context = context
        super().__init__(f"unknown context (theta={context[0]!r}, phi={context[1]!r})")


@dataclass(frozen=True)
class ContextSet:
    """Ordered, duplicate-free set of normalized angle-pair contexts."""

    contexts: tuple[Context, ...]

    def __post_init__(self) -> None:
        if not self.contexts:
            raise ValueError("ContextSet must be nonempty")
        seen: set[Context] = set()
        for pair in self.contexts:
            if pair in seen:
                raise ValueError(f"duplicate context after normalization: {pair!r}")
            seen.add(pair)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, float]]) -> "ContextSet":
        normalized = tuple(
            (normalize_angle(t), normalize_angle(p)) for t, p in pairs
        )
        return cls(normalized)

    def index_of(self, context: tuple[float, float]) -> int:
        key = (normalize_angle(context[0]), normalize_angle(context[1]))
        try:
            return self.contexts.index(key)
        except ValueError:
            raise UnknownContextError(key) from None

    def __len__(self) -> int:
        return len(self.contexts)

    def __iter__(self) -> Iterator[Context]:
        return iter(self.contexts)


@dataclass(frozen=True)
class SystemSpinState:
    """The product state revealed at one context: its angle pair plus outcome."""

    context: Context
    state: JointOutcome


@dataclass(frozen=True)
class Ledger:
    """Immutable map from every context to its pre-existing joint outcome."""

    contexts: ContextSet
    states: tuple[JointOutcome, ...]
    seed: int
    generator_id: str = GENERATOR_ID

    def __post_init__(self) -> None:
        if len(self.states) != len(self.contexts):
            raise ValueError("one state required per context")

    @property
    def entries(self) -> dict[Context, SystemSpinState]:
        return {
            ctx: SystemSpinState(context=ctx, state=st)
            for ctx, st in zip(self.contexts, self.states)
        }

    def entry(self, context: tuple[float, float]) -> SystemSpinState:
        i = self.contexts.index_of(context)
        return SystemSpinState(context=self.contexts.contexts[i], state=self.states[i])


@dataclass(frozen=True)
class RunRecord:
    """One experimental run: the chosen context and the outcome it revealed."""

    seed: int
    contexts: ContextSet
    chosen: Context
    revealed: JointOutcome

    @classmethod
    def from_measurement(cls, ledger: Ledger, chosen: tuple[float, float]) -> "RunRecord":
        outcome = measure(ledger, chosen)
        key = (normalize_angle(chosen[0]), normalize_angle(chosen[1]))
        return cls(seed=ledger.seed, contexts=ledger.contexts, chosen=key, revealed=outcome)


def _cumulative(context: Context) -> tuple[float, float, float, float]:
    p = joint_distribution(context[0], context[1]).as_tuple()
    c0 = p[0]
    c1 = c0 + p[1]
    c2 = c1 + p[2]
    return (c0, c1, c2, 1.0)


def generate_ledger(contexts: ContextSet | Iterable[tuple[float, float]], seed: int) -> Ledger:
    """Draw one pre-existing outcome per context, singlet-distributed.

    Deterministic in ``(seed, contexts, order)``; entries for distinct
    contexts are independent draws.
    """
    if not isinstance(contexts, ContextSet):
        contexts = ContextSet.from_pairs(contexts)
    states = []
    for i, ctx in enumerate(contexts):
        u = uniform(seed, LEDGER_STREAM, i)
        code = bisect_right(_cumulative(ctx), u)
        states.append(JointOutcome.from_code(min(code, 3)))
    return Ledger(contexts=contexts, states=tuple(states), seed=seed)


def measure(ledger: Ledger, chosen: tuple[float, float]) -> JointOutcome:
    """Reveal the stored outcome for ``chosen``; pure, repeatable lookup."""
    return ledger.entry(chosen).state


def sample_state_codes(
    contexts: ContextSet, seeds: np.ndarray | Iterable[int]
) -> np.ndarray:
    """Outcome codes of ``generate_ledger(contexts, s)`` for many seeds at once.

    Returns an int array of shape ``(len(seeds), len(contexts))`` whose row
    ``k`` equals the state codes of the ledger generated from ``seeds[k]``
    (verified cell-for-cell against :func:`generate_ledger` in the tests).
    """
    if isinstance(seeds, np.ndarray) and seeds.dtype == np.uint64:
        seed_arr = seeds
    else:
        seed_arr = np.asarray([int(s) & MASK64 for s in seeds], dtype=np.uint64)
    out = np.empty((seed_arr.size, len(contexts)), dtype=np.int64)
    for i, ctx in enumerate(contexts):
        u = uniform_vec(derive_vec(seed_arr, LEDGER_STREAM, i))
        cum = np.asarray(_cumulative(ctx))
        out[:, i] = np.minimum(np.searchsorted(cum, u, side="right"), 3)
    return out


@dataclass(frozen=True)
class FactorizabilityWitness:
    """Whether a ledger restricted to a 2x2 grid has product form (f(theta), g(phi))."""

    decomposable: bool
    counterexample: tuple[Context, Context] | None = None


def factorizability_witness(
    ledger: Ledger,
    thetas: tuple[float, float],
    phis: tuple[float, float],
) -> FactorizabilityWitness:
    """Test whether ledger entries on ``thetas x phis`` factorize per party.

    Decomposable means there are functions f on the thetas and g on the phis
    with entry(theta, phi) = (f(theta), g(phi)) at all four grid points.
    When not, the returned counterexample is a pair of contexts on which a
    single party's outcome takes two different values.
    """
    t1, t2 = (normalize_angle(t) for t in thetas)
    p1, p2 = (normalize_angle(p) for p in phis)
    get = {
        (t, p): measure(ledger, (t, p)) for t, p in itertools.product((t1, t2), (p1, p2))
    }
    for t in (t1, t2):
        if get[(t, p1)].a is not get[(t, p2)].a:
            return FactorizabilityWitness(False, ((t, p1), (t, p2)))
    for p in (p1, p2):
        if get[(t1, p)].b is not get[(t2, p)].b:
            return FactorizabilityWitness(False, ((t1, p), (t2, p)))
    return FactorizabilityWitness(True, None)


def _grid_context_set(thetas: tuple[float, float], phis: tuple[float, float]) -> ContextSet:
    return ContextSet.from_pairs(
        (t, p) for t, p in itertools.product(thetas, phis)
    )


def decomposable_fraction(
    thetas: tuple[float, float],
    phis: tuple[float, float],
    n_ledgers: int,
    seed: int,
) -> float:
    """Fraction of freshly sampled ledgers on the grid that are decomposable.

    Ledger ``k`` uses seed ``derive(seed, k)``, so the estimate is
    deterministic and each ledger matches ``generate_ledger`` exactly.
    """
    if n_ledgers < 1:
        raise ValueError("n_ledgers must be >= 1")
    grid = _grid_context_set(thetas, phis)
    ledger_seeds = derive_vec(seed, np.arange(n_ledgers, dtype=np.uint64))
    codes = sample_state_codes(grid, ledger_seeds)
    # grid order is (t1,p1), (t1,p2), (t2,p1), (t2,p2)
    a_plus = codes < 2
    b_plus = codes % 2 == 0
    decomposable = (
        (a_plus[:, 0] == a_plus[:, 1])
        & (a_plus[:, 2] == a_plus[:, 3])
        & (b_plus[:, 0] == b_plus[:, 2])
        & (b_plus[:, 1] == b_plus[:, 3])
    )
    return float(np.mean(decomposable))


def enumerate_decomposable_probability(
    thetas: tuple[float, float], phis: tuple[float, float]
) -> float:
    """Exact decomposable probability by enumerating all 4^4 grid ledgers."""
    grid = _grid_context_set(thetas, phis)
    probs = [joint_distribution(t, p).as_tuple() for t, p in grid]
    total = 0.0
    for s in itertools.product(range(4), repeat=4):
        a_plus = [code < 2 for code in s]
        b_plus = [code % 2 == 0 for code in s]
        if (
            a_plus[0] == a_plus[1]
            and a_plus[2] == a_plus[3]
            and b_plus[0] == b_plus[2]
            and b_plus[1] == b_plus[3]
        ):
            total += probs[0][s[0]] * probs[1][s[1]] * probs[2][s[2]] * probs[3][s[3]]
    return total


def render_table1(ledger: Ledger) -> str:
    """Plain-text table of the ledger: one row per context, in context order."""
    header = ("theta_rad", "phi_rad", "state")
    rows = [header]
    for ctx, state in zip(ledger.contexts, ledger.states):
        rows.append((repr(ctx[0]), repr(ctx[1]), state.symbols))
    widths = [max(len(row[c]) for row in rows) for c in range(3)]
    lines = [
        "  ".join(cell.ljust(widths[c]) for c, cell in enumerate(row)).rstrip()
        for row in rows
    ]
    return "\n".join(lines) + "\n"


def render_table1_csv(ledger: Ledger) -> str:
    """CSV rendering of the ledger with columns theta_rad, phi_rad, state."""
    lines = ["theta_rad,phi_rad,state"]
    for ctx, state in zip(ledger.contexts, ledger.states):
        lines.append(f"{ctx[0]!r},{ctx[1]!r},{state.symbols}")
    return "\n".join(lines) + "\n"
