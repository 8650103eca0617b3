"""Monte Carlo laboratory for the canonical EPR-Bohm singlet experiment.

Three models of the same two-magnet spin experiment:

* ``quantum``  - closed-form singlet statistics, sampled directly;
* ``realist``  - a contextual ledger assigning one pre-existing joint
  outcome to every angle-pair context, revealed by measurement;
* ``lhv``      - a factorizable (Bell-local) hidden-variable baseline.

Plus the statistics to tell them apart: correlation estimates, CHSH values
with errors, chi-square goodness-of-fit, no-signaling marginals, and a
seeded, byte-reproducible experiment harness exposed as a FastAPI service
and a thin CLI.
"""

__version__ = "0.1.0"

from .experiment import Report, RunConfig, run_experiment
from .ledger import (
    ContextSet,
    FactorizabilityWitness,
    Ledger,
    RunRecord,
    SystemSpinState,
    UnknownContextError,
    decomposable_fraction,
    enumerate_decomposable_probability,
    factorizability_witness,
    generate_ledger,
    measure,
    render_table1,
    render_table1_csv,
)
from .lhv import (
    SIGN_MODEL,
    FactorizableModel,
    lhv_correlation,
    lhv_joint_distribution,
    sample_lambda,
    sign_model_outcomes,
)
from .quantum import (
    JointDistribution,
    JointOutcome,
    Outcome,
    SingletAmplitudes,
    conditional,
    correlation,
    joint_distribution,
    marginal,
    normalize_angle,
    singlet_amplitudes,
)
from .reporting import emit_report, parse_report, report_bytes
from .stats import (
    ChshEstimate,
    CountTable,
    chi_square_gof,
    chi_square_sf,
    chi_square_two_sample,
    chsh_value,
    empirical_correlation,
    empirical_distribution,
    wilson_interval,
)

__all__ = [
    "__version__",
    "ChshEstimate",
    "ContextSet",
    "CountTable",
    "FactorizabilityWitness",
    "FactorizableModel",
    "JointDistribution",
    "JointOutcome",
    "Ledger",
    "Outcome",
    "Report",
    "RunConfig",
    "RunRecord",
    "SIGN_MODEL",
    "SingletAmplitudes",
    "SystemSpinState",
    "UnknownContextError",
    "chi_square_gof",
    "chi_square_sf",
    "chi_square_two_sample",
    "chsh_value",
    "conditional",
    "correlation",
    "decomposable_fraction",
    "emit_report",
    "empirical_correlation",
    "empirical_distribution",
    "enumerate_decomposable_probability",
    "factorizability_witness",
    "generate_ledger",
    "joint_distribution",
    "lhv_correlation",
    "lhv_joint_distribution",
    "marginal",
    "measure",
    "normalize_angle",
    "parse_report",
    "render_table1",
    "render_table1_csv",
    "report_bytes",
    "run_experiment",
    "sample_lambda",
    "sign_model_outcomes",
    "singlet_amplitudes",
    "wilson_interval",
]
