"""Built-in verification suite: every release-gating check in one place.

Each check returns a :class:`CheckResult`; ``run_checks`` executes them in
order. All statistical checks use fixed seeds, so the whole suite is
deterministic and its stated false-alarm budgets were spent once, at
development time.

Quick mode (``quick=True``) drops sample sizes from 10^6/10^5 to 10^4 and
widens tolerances proportionally (documented per check); it exists for
smoke-testing, not for acceptance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import quantum
from .experiment import (
    DEFAULT_CHSH_ANGLES,
    RunConfig,
    run_experiment,
    sample_pair_counts,
)
from .ledger import (
    ContextSet,
    decomposable_fraction,
    enumerate_decomposable_probability,
    generate_ledger,
    measure,
    sample_state_codes,
)
from .lhv import lhv_correlation, sign_model_outcomes
from .quantum import Outcome, TWO_PI
from .reporting import report_bytes
from .stats import (
    CountTable,
    chi_square_gof,
    chi_square_sf,
    chi_square_two_sample,
    empirical_correlation,
    wilson_interval,
)

#: Exact probability that a singlet-sampled ledger on the default CHSH grid
#: {0, pi/2} x {pi/4, 3pi/4} is (f(theta), g(phi))-decomposable. Frozen
#: fixture from the exhaustive 256-ledger enumeration (equals 3/64).
DECOMPOSABLE_P_CHSH_GRID = 3.0 / 64.0

_CHSH_GRID_THETAS = (0.0, math.pi / 2)
_CHSH_GRID_PHIS = (math.pi / 4, 3 * math.pi / 4)

_BASE_SEED = 20_2408


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _result(name: str, passed: bool, detail: str) -> CheckResult:
    return CheckResult(name=name, passed=bool(passed), detail=detail)


# ---------------------------------------------------------------------------
# individual checks
# ---------------------------------------------------------------------------

def check_joint_analytic(quick: bool = False) -> CheckResult:
    """Closed-form joint distribution matches the half-angle forms to 1e-12."""
    deltas = (0.0, math.pi / 6, math.pi / 4, math.pi / 2, 2 * math.pi / 3, math.pi)
    worst = 0.0
    for d in deltas:
        dist = quantum.joint_distribution(d, 0.0)
        q = 0.5 * math.sin(d / 2) ** 2
        c = 0.5 * math.cos(d / 2) ** 2
        worst = max(
            worst,
            abs(dist.p_pp - q),
            abs(dist.p_mm - q),
            abs(dist.p_pm - c),
            abs(dist.p_mp - c),
        )
    return _result("joint-analytic", worst <= 1e-12, f"max cell error {worst:.3e}")


def check_joint_montecarlo(quick: bool = False) -> CheckResult:
    """Quantum-mode cell frequencies match the joint distribution (~4 sigma)."""
    n = 10_000 if quick else 1_000_000
    tol = 0.02 if quick else 0.002
    deltas = (0.0, math.pi / 6, math.pi / 4, math.pi / 2, 2 * math.pi / 3, math.pi)
    worst = 0.0
    for i, d in enumerate(deltas):
        counts = sample_pair_counts("quantum", _BASE_SEED + i, 0, d, 0.0, n)
        expected = quantum.joint_distribution(d, 0.0).as_tuple()
        for obs, p in zip(counts.as_tuple(), expected):
            worst = max(worst, abs(obs / n - p))
    return _result(
        "joint-montecarlo",
        worst <= tol,
        f"max |freq - p| {worst:.5f} (tol {tol}) at N={n}",
    )


def check_correlation_law(quick: bool = False) -> CheckResult:
    """Empirical E tracks -cos(delta) over 12 evenly spaced deltas."""
    n = 10_000 if quick else 1_000_000
    tol = 0.04 if quick else 0.004
    worst = 0.0
    for k in range(12):
        d = k * TWO_PI / 12
        counts = sample_pair_counts("quantum", _BASE_SEED + 100 + k, 0, d, 0.0, n)
        e_hat, _ = empirical_correlation(counts)
        worst = max(worst, abs(e_hat - (-math.cos(d))))
    return _result(
        "correlation-law",
        worst <= tol,
        f"max |E_hat + cos(delta)| {worst:.5f} (tol {tol}) at N={n}",
    )


def _empirical_s(model: str, seed: int, trials: int) -> tuple[float, float]:
    report = run_experiment(
        RunConfig(model=model, trials_per_pair=trials, seed=seed)
    )
    return report.chsh.s_value, report.chsh.std_error


def check_chsh_separation(quick: bool = False) -> CheckResult:
    """Quantum/realist S near -2*sqrt(2); Bell-local S = -2; models separated.

    Separation criterion: |S_quantum| - |S_lhv| > 0.7 with the two
    estimates' 3-sigma intervals disjoint.
    """
    n = 10_000 if quick else 1_000_000
    tol = 0.1 if quick else 0.01
    s_target = -2.0 * math.sqrt(2.0)
    s_q, err_q = _empirical_s("quantum", _BASE_SEED + 200, n)
    s_r, _ = _empirical_s("realist", _BASE_SEED + 201, n)
    s_l, err_l = _empirical_s("lhv", _BASE_SEED + 202, n)
    a, a_p, b, b_p = DEFAULT_CHSH_ANGLES
    s_l_theory = (
        lhv_correlation(a, b)
        - lhv_correlation(a, b_p)
        + lhv_correlation(a_p, b)
        + lhv_correlation(a_p, b_p)
    )
    gap = abs(s_q) - abs(s_l)
    disjoint = abs(s_q) - 3.0 * err_q > abs(s_l) + 3.0 * err_l
    ok = (
        abs(s_q - s_target) <= tol
        and abs(s_r - s_target) <= tol
        and abs(s_l_theory + 2.0) <= 1e-12
        and abs(s_l + 2.0) <= tol
        and gap > 0.7
        and disjoint
    )
    return _result(
        "chsh-separation",
        ok,
        f"S_quantum={s_q:.4f} S_realist={s_r:.4f} (target {s_target:.4f} +- {tol}); "
        f"S_lhv_analytic={s_l_theory:.12f} S_lhv={s_l:.4f} (target -2 +- {tol}); "
        f"gap={gap:.3f} (>0.7), 3-sigma disjoint={disjoint} at N={n}",
    )


def check_realist_quantum_equivalence(quick: bool = False) -> CheckResult:
    """Two-sample chi-square cannot tell realist from quantum counts.

    Four CHSH pairs per seed; p > 0.01 expected, with at most one failure
    allowed across all seeds (false-alarm budget).
    """
    n = 10_000 if quick else 100_000
    n_seeds = 5 if quick else 20
    failures = 0
    worst_p = 1.0
    pairs = RunConfig().pair_list()[:4]
    contexts = RunConfig().context_set()
    for s in range(n_seeds):
        for j, (theta, phi) in enumerate(pairs):
            ctx = contexts.index_of((theta, phi))
            c_r = sample_pair_counts("realist", _BASE_SEED + 300 + s, j, theta, phi, n, ctx_index=ctx)
            c_q = sample_pair_counts("quantum", _BASE_SEED + 400 + s, j, theta, phi, n, ctx_index=ctx)
            _, p = chi_square_two_sample(c_r, c_q)
            worst_p = min(worst_p, p)
            if p <= 0.01:
                failures += 1
    return _result(
        "realist-quantum-equivalence",
        failures <= 1,
        f"{failures} failures (allowed 1) over {n_seeds} seeds x 4 pairs at N={n}; min p={worst_p:.4f}",
    )


def check_no_signaling(quick: bool = False) -> CheckResult:
    """Each party's '+' frequency within tolerance of 1/2, all models and pairs."""
    n = 10_000 if quick else 1_000_000
    tol = 0.05 if quick else 0.005
    worst = 0.0
    pairs = RunConfig().pair_list()[:4]
    contexts = RunConfig().context_set()
    for model in ("quantum", "realist", "lhv"):
        for j, (theta, phi) in enumerate(pairs):
            counts = sample_pair_counts(
                model, _BASE_SEED + 500, j, theta, phi, n,
                ctx_index=contexts.index_of((theta, phi)),
            )
            freq_a = (counts.n_pp + counts.n_pm) / n
            freq_b = (counts.n_pp + counts.n_mp) / n
            worst = max(worst, abs(freq_a - 0.5), abs(freq_b - 0.5))
    return _result(
        "no-signaling",
        worst <= tol,
        f"max |marginal - 1/2| {worst:.5f} (tol {tol}) at N={n}",
    )


def check_factorizability_witness(quick: bool = False) -> CheckResult:
    """Decomposable-ledger rate matches the exact enumeration on the CHSH grid."""
    n = 10_000 if quick else 100_000
    tol = 0.03 if quick else 0.01
    exact = enumerate_decomposable_probability(_CHSH_GRID_THETAS, _CHSH_GRID_PHIS)
    frac = decomposable_fraction(_CHSH_GRID_THETAS, _CHSH_GRID_PHIS, n, _BASE_SEED + 600)
    enum_ok = abs(exact - DECOMPOSABLE_P_CHSH_GRID) <= 1e-12
    mc_ok = abs(frac - DECOMPOSABLE_P_CHSH_GRID) <= tol
    return _result(
        "factorizability-witness",
        enum_ok and mc_ok,
        f"enumeration {exact:.12f} vs fixture {DECOMPOSABLE_P_CHSH_GRID:.12f}; "
        f"MC fraction {frac:.5f} (tol {tol}) over {n} ledgers",
    )


def check_stats_oracle(quick: bool = False) -> CheckResult:
    """Chi-square survival function against tabulated critical values."""
    p_critical = chi_square_sf(7.815, 3)
    p_tail = chi_square_sf(20.0, 3)
    ok = abs(p_critical - 0.05) <= 1e-3 and abs(p_tail / 1.7e-4 - 1.0) <= 0.10
    return _result(
        "stats-oracle",
        ok,
        f"sf(7.815, 3)={p_critical:.6f} (target 0.05 +- 1e-3); "
        f"sf(20, 3)={p_tail:.6e} (target 1.7e-4 +- 10%)",
    )


def check_determinism(quick: bool = False) -> CheckResult:
    """Identical config at 1 and 8 workers produces identical report bytes."""
    trials = 50_000 if quick else 100_000
    workers_b = 4 if quick else 8
    ok = True
    details = []
    for fmt in ("json", "csv"):
        for model in ("quantum", "realist", "lhv"):
            cfg = RunConfig(model=model, trials_per_pair=trials, seed=7, out_format=fmt)
            b1 = report_bytes(run_experiment(cfg, workers=1), fmt)
            b2 = report_bytes(run_experiment(cfg, workers=workers_b), fmt)
            if b1 != b2:
                ok = False
                details.append(f"{model}/{fmt} differs")
    return _result(
        "determinism",
        ok,
        "byte-identical at 1 vs "
        f"{workers_b} workers for all models/formats at N={trials}"
        + ("" if ok else "; " + ", ".join(details)),
    )


def check_invariant_sweeps(quick: bool = False) -> CheckResult:
    """Randomized sweeps of the per-module invariants (>= 1000 cases each)."""
    cases = 200 if quick else 1000
    rng = np.random.default_rng(913)
    problems: list[str] = []

    thetas = rng.uniform(-4 * math.pi, 4 * math.pi, size=cases)
    phis = rng.uniform(-4 * math.pi, 4 * math.pi, size=cases)
    for t, p in zip(thetas, phis):
        dist = quantum.joint_distribution(t, p)
        if abs(sum(dist.as_tuple()) - 1.0) > 1e-12:
            problems.append("joint normalization")
            break
        if dist.p_pp != dist.p_mm or dist.p_pm != dist.p_mp:
            problems.append("singlet symmetry")
            break
        if quantum.marginal(t, p, 1, Outcome.PLUS) != 0.5:
            problems.append("marginal != 1/2")
            break
        if abs(quantum.correlation(t, p) + math.cos(t - p)) > 1e-9:
            problems.append("correlation identity")
            break
        mags = quantum.singlet_amplitudes(t, p).squared_magnitudes()
        if max(abs(m - c) for m, c in zip(mags, dist.as_tuple())) > 1e-12:
            problems.append("amplitude/distribution consistency")
            break
        shifted = quantum.joint_distribution(t + TWO_PI, p)
        if max(abs(a - b) for a, b in zip(shifted.as_tuple(), dist.as_tuple())) > 1e-12:
            problems.append("periodicity")
            break

    lams = rng.uniform(0.0, TWO_PI, size=cases)
    alt_phis = rng.uniform(0.0, TWO_PI, size=cases)
    for lam, t, p, p2 in zip(lams, thetas, phis, alt_phis):
        if sign_model_outcomes(lam, t, p).a is not sign_model_outcomes(lam, t, p2).a:
            problems.append("lhv factorization (A reads phi)")
            break
        if sign_model_outcomes(lam, t, p).b is not sign_model_outcomes(lam, p2, p).b:
            problems.append("lhv factorization (B reads theta)")
            break

    tuples = rng.uniform(0.0, TWO_PI, size=(10_000, 4))
    s_max = 0.0
    for a, a_p, b, b_p in tuples:
        s = (
            lhv_correlation(a, b)
            - lhv_correlation(a, b_p)
            + lhv_correlation(a_p, b)
            + lhv_correlation(a_p, b_p)
        )
        s_max = max(s_max, abs(s))
    if s_max > 2.0 + 1e-9:
        problems.append(f"lhv CHSH bound violated: {s_max}")

    counts = rng.integers(0, 500, size=(cases, 4))
    counts[counts.sum(axis=1) == 0] = 1
    for row in counts:
        table = CountTable.from_sequence(row)
        e_hat, _ = empirical_correlation(table)
        if not -1.0 <= e_hat <= 1.0:
            problems.append("E_hat out of range")
            break
        products = (row[0] + row[3] - row[1] - row[2]) / row.sum()
        if abs(e_hat - products) > 1e-12:
            problems.append("E_hat vs product average")
            break

    ks = rng.integers(0, 1000, size=cases)
    ns = rng.integers(1, 1000, size=cases)
    for k, n in zip(ks, ns):
        k = int(min(k, n))
        lo, hi = wilson_interval(k, int(n), 1.96)
        if not (0.0 <= lo <= k / n <= hi <= 1.0):
            problems.append("wilson interval containment")
            break

    # gof invariance under a common permutation of cells
    perm_cases = min(cases, 200)
    for _ in range(perm_cases):
        row = rng.integers(1, 400, size=4)
        probs = rng.dirichlet(np.ones(4))
        dist = quantum.JointDistribution(*probs, theoretical=False)
        stat1, _ = chi_square_gof(CountTable.from_sequence(row), dist)
        perm = rng.permutation(4)
        dist2 = quantum.JointDistribution(*(probs[perm]), theoretical=False)
        stat2, _ = chi_square_gof(CountTable.from_sequence(row[perm]), dist2)
        if abs(stat1 - stat2) > 1e-9 * max(1.0, stat1):
            problems.append("gof permutation invariance")
            break

    # p monotone nonincreasing in the statistic at fixed dof
    for dof in (1, 2, 3, 5, 10):
        grid = [chi_square_sf(x, dof) for x in np.linspace(0.0, 50.0, 101)]
        if any(b > a + 1e-12 for a, b in zip(grid, grid[1:])):
            problems.append(f"sf monotonicity dof={dof}")
            break

    # ledger determinism + scalar/vector agreement + revelation consistency
    ctxs = ContextSet.from_pairs([(0.3, 1.1), (0.0, math.pi / 2), (2.0, 5.0)])
    seeds = np.arange(200, dtype=np.uint64)
    codes = sample_state_codes(ctxs, seeds)
    for k in range(0, 200, 10):
        led = generate_ledger(ctxs, k)
        led2 = generate_ledger(ctxs, k)
        if led.states != led2.states:
            problems.append("ledger determinism")
            break
        if tuple(s.code for s in led.states) != tuple(codes[k]):
            problems.append("scalar/vector ledger mismatch")
            break
        for ctx in ctxs:
            if measure(led, ctx) is not led.entry(ctx).state:
                problems.append("revelation consistency")
                break

    passed = not problems
    return _result(
        "invariant-sweeps",
        passed,
        f"{cases}+ cases per property, all invariants hold"
        if passed
        else "violations: " + "; ".join(problems),
    )


CHECKS: tuple[tuple[str, Callable[[bool], CheckResult]], ...] = (
    ("joint-analytic", check_joint_analytic),
    ("joint-montecarlo", check_joint_montecarlo),
    ("correlation-law", check_correlation_law),
    ("chsh-separation", check_chsh_separation),
    ("realist-quantum-equivalence", check_realist_quantum_equivalence),
    ("no-signaling", check_no_signaling),
    ("factorizability-witness", check_factorizability_witness),
    ("stats-oracle", check_stats_oracle),
    ("determinism", check_determinism),
    ("invariant-sweeps", check_invariant_sweeps),
)


def run_checks(
    quick: bool = False, names: Sequence[str] | None = None
) -> list[CheckResult]:
    """Run the verification suite (optionally a named subset), in order."""
    selected = []
    known = {name for name, _ in CHECKS}
    if names:
        unknown = set(names) - known
        if unknown:
            raise ValueError(f"unknown check names: {sorted(unknown)}")
    for name, fn in CHECKS:
        if names and name not in names:
            continue
        selected.append(fn(quick))
    return selected
