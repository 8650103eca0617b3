"""Tests for the contextual pre-existing-outcome ledger model."""

import itertools
import math

import numpy as np
import pytest

from eprb_lab.ledger import (
    ContextSet,
    FactorizabilityWitness,
    Ledger,
    RunRecord,
    UnknownContextError,
    decomposable_fraction,
    enumerate_decomposable_probability,
    factorizability_witness,
    generate_ledger,
    measure,
    render_table1,
    render_table1_csv,
    sample_state_codes,
)
from eprb_lab.quantum import JointOutcome, joint_distribution
from eprb_lab.stats import CountTable, chi_square_gof, chi_square_two_sample

CHSH_GRID = ((0.0, math.pi / 2), (math.pi / 4, 3 * math.pi / 4))

#: Exhaustive 256-ledger enumeration at the CHSH grid, computed before the
#: build: exactly 3/64.
FROZEN_DECOMPOSABLE_P = 0.046875


# ---------------------------------------------------------------------------
# ContextSet
# ---------------------------------------------------------------------------

def test_context_set_normalizes_and_orders():
    cs = ContextSet.from_pairs([(-math.pi / 2, 0.0), (0.3, 1.1)])
    assert cs.contexts[0] == (3 * math.pi / 2, 0.0)
    assert cs.index_of((0.3, 1.1)) == 1
    # keying is exact binary equality of normalized values; 2*pi folds to
    # exactly 0, so this lookup is guaranteed
    cs2 = ContextSet.from_pairs([(0.0, 1.1)])
    assert cs2.index_of((2 * math.pi, 1.1)) == 0


def test_context_set_rejects_empty_and_duplicates():
    with pytest.raises(ValueError):
        ContextSet.from_pairs([])
    with pytest.raises(ValueError):
        ContextSet.from_pairs([(0.0, 1.0), (2 * math.pi, 1.0)])


def test_unknown_context_error_names_pair():
    cs = ContextSet.from_pairs([(0.3, 1.1)])
    with pytest.raises(UnknownContextError) as err:
        cs.index_of((0.3, 1.2))
    assert "1.2" in str(err.value)


# ---------------------------------------------------------------------------
# generate_ledger / measure
# ---------------------------------------------------------------------------

def test_generate_is_deterministic():
    cs = ContextSet.from_pairs([(0.0, 1.0), (2.0, 3.0)])
    led1 = generate_ledger(cs, 42)
    led2 = generate_ledger(cs, 42)
    assert led1 == led2
    assert render_table1(led1) == render_table1(led2)


def test_equal_angle_context_yields_opposite_outcomes():
    cs = ContextSet.from_pairs([(0.9, 0.9)])
    codes = sample_state_codes(cs, np.arange(100_000, dtype=np.uint64))[:, 0]
    assert set(np.unique(codes)) <= {1, 2}  # only +- and -+
    freq_pm = float(np.mean(codes == 1))
    assert abs(freq_pm - 0.5) <= 0.01


def test_quarter_turn_context_uniform_over_states():
    cs = ContextSet.from_pairs([(0.0, math.pi / 2)])
    codes = sample_state_codes(cs, np.arange(100_000, dtype=np.uint64))[:, 0]
    for code in range(4):
        assert abs(float(np.mean(codes == code)) - 0.25) <= 0.01


def test_vectorized_matches_generate_ledger():
    cs = ContextSet.from_pairs([(0.0, math.pi / 2), (0.3, 1.1), (4.0, 5.5)])
    codes = sample_state_codes(cs, np.arange(300, dtype=np.uint64))
    for seed in range(300):
        led = generate_ledger(cs, seed)
        assert tuple(s.code for s in led.states) == tuple(codes[seed])


def test_measure_semantics():
    led = Ledger(
        contexts=ContextSet.from_pairs([(0.3, 1.1)]),
        states=(JointOutcome.PM,),
        seed=0,
    )
    assert measure(led, (0.3, 1.1)) is JointOutcome.PM
    assert measure(led, (0.3, 1.1)) is JointOutcome.PM  # repeated, unchanged
    with pytest.raises(UnknownContextError):
        measure(led, (0.3, 1.2))


def test_measure_matches_entries_exhaustively():
    cs = ContextSet.from_pairs([(0.0, 0.5), (1.0, 1.5), (2.0, 2.5), (3.0, 3.5)])
    for seed in range(20):
        led = generate_ledger(cs, seed)
        for ctx in cs:
            assert measure(led, ctx) is led.entry(ctx).state


def test_run_record_consistency():
    cs = ContextSet.from_pairs([(0.1, 0.2), (0.3, 0.4)])
    led = generate_ledger(cs, 5)
    record = RunRecord.from_measurement(led, (0.3, 0.4))
    assert record.revealed is measure(led, (0.3, 0.4))
    assert record.chosen == (0.3, 0.4)
    assert record.seed == 5


def test_per_context_state_law():
    # empirical state distribution over many seeds matches the joint law
    ctx = (0.3, 1.1)
    cs = ContextSet.from_pairs([ctx])
    codes = sample_state_codes(cs, np.arange(100_000, dtype=np.uint64))[:, 0]
    counts = CountTable.from_sequence(np.bincount(codes, minlength=4))
    _, p = chi_square_gof(counts, joint_distribution(*ctx))
    assert p > 0.01


def test_realist_pipeline_indistinguishable_from_direct_sampling():
    # fresh ledger per trial + measure vs direct joint-distribution sampling
    ctx = (0.2, 1.9)
    cs = ContextSet.from_pairs([ctx])
    codes = sample_state_codes(cs, np.arange(100_000, dtype=np.uint64))[:, 0]
    realist_counts = CountTable.from_sequence(np.bincount(codes, minlength=4))

    from eprb_lab.experiment import sample_pair_counts

    direct_counts = sample_pair_counts("quantum", 77, 0, ctx[0], ctx[1], 100_000)
    _, p = chi_square_two_sample(realist_counts, direct_counts)
    assert p > 0.01


# ---------------------------------------------------------------------------
# factorizability witness
# ---------------------------------------------------------------------------

def _ledger_with_states(states):
    grid = [(t, p) for t in CHSH_GRID[0] for p in CHSH_GRID[1]]
    return Ledger(
        contexts=ContextSet.from_pairs(grid),
        states=tuple(states),
        seed=0,
    )


def test_witness_accepts_product_form():
    # A = + on row theta1, - on row theta2; B = + on phi1, - on phi2
    led = _ledger_with_states(
        [JointOutcome.PP, JointOutcome.PM, JointOutcome.MP, JointOutcome.MM]
    )
    result = factorizability_witness(led, *CHSH_GRID)
    assert result == FactorizabilityWitness(True, None)


def test_witness_rejects_row_contradiction():
    # A differs across the first row: f(theta1) cannot take two values
    led = _ledger_with_states(
        [JointOutcome.PP, JointOutcome.MM, JointOutcome.MP, JointOutcome.MM]
    )
    result = factorizability_witness(led, *CHSH_GRID)
    assert not result.decomposable
    t1 = CHSH_GRID[0][0]
    p1, p2 = CHSH_GRID[1]
    assert result.counterexample == ((t1, p1), (t1, p2))


def test_witness_requires_grid_contexts():
    led = generate_ledger(ContextSet.from_pairs([(0.0, 1.0)]), 1)
    with pytest.raises(UnknownContextError):
        factorizability_witness(led, (0.0, 0.5), (1.0, 2.0))


def _oracle_decomposable_probability(thetas, phis):
    # independent reduction: a product-form ledger is determined by the four
    # cell sign products s_i = a*b, which satisfy s1*s2*s3*s4 = +1; each of
    # the 8 admissible sign patterns covers exactly two (a1,a2,b1,b2)
    # assignments, and a cell weighs p_pp when s=+1, p_pm when s=-1
    grid = [(t, p) for t in thetas for p in phis]
    weights = []
    for t, p in grid:
        dist = joint_distribution(t, p)
        weights.append({+1: dist.p_pp, -1: dist.p_pm})
    total = 0.0
    for s1, s2, s3 in itertools.product((+1, -1), repeat=3):
        s4 = s1 * s2 * s3
        total += weights[0][s1] * weights[1][s2] * weights[2][s3] * weights[3][s4]
    return 2.0 * total


def test_enumeration_matches_frozen_fixture():
    value = enumerate_decomposable_probability(*CHSH_GRID)
    assert abs(value - FROZEN_DECOMPOSABLE_P) <= 1e-12
    assert abs(value - 3 / 64) <= 1e-12


@pytest.mark.parametrize(
    "thetas,phis",
    [CHSH_GRID, ((0.3, 1.2), (0.7, 2.9)), ((0.0, 2.0), (1.0, 4.0))],
)
def test_enumeration_matches_independent_oracle(thetas, phis):
    assert abs(
        enumerate_decomposable_probability(thetas, phis)
        - _oracle_decomposable_probability(thetas, phis)
    ) <= 1e-12


def test_decomposable_fraction_tracks_enumeration():
    exact = enumerate_decomposable_probability(*CHSH_GRID)
    frac = decomposable_fraction(*CHSH_GRID, n_ledgers=20_000, seed=9)
    assert abs(frac - exact) <= 0.02


def test_some_sampled_ledgers_are_not_decomposable():
    grid = [(t, p) for t in CHSH_GRID[0] for p in CHSH_GRID[1]]
    cs = ContextSet.from_pairs(grid)
    seen = set()
    for seed in range(200):
        led = generate_ledger(cs, seed)
        seen.add(factorizability_witness(led, *CHSH_GRID).decomposable)
    assert seen == {True, False}


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def test_render_revealed_product_states():
    # entries render their revealed product state compactly: +, - per party
    theta_p, phi_p = 0.4, 1.3
    theta_pp, phi_pp = 2.2, 0.9
    led = Ledger(
        contexts=ContextSet.from_pairs([(theta_p, phi_p), (theta_pp, phi_pp)]),
        states=(JointOutcome.PM, JointOutcome.MM),
        seed=0,
    )
    text = render_table1(led)
    lines = text.splitlines()
    assert lines[0].split() == ["theta_rad", "phi_rad", "state"]
    assert lines[1].split() == ["0.4", "1.3", "+-"]
    assert lines[2].split() == ["2.2", "0.9", "--"]

    csv_text = render_table1_csv(led)
    assert csv_text.splitlines() == [
        "theta_rad,phi_rad,state",
        "0.4,1.3,+-",
        "2.2,0.9,--",
    ]


def test_render_is_byte_deterministic():
    cs = ContextSet.from_pairs([(0.0, math.pi / 2), (math.pi / 4, 3 * math.pi / 4)])
    led = generate_ledger(cs, 123)
    assert render_table1(led).encode() == render_table1(generate_ledger(cs, 123)).encode()
    assert render_table1_csv(led) == render_table1_csv(generate_ledger(cs, 123))
