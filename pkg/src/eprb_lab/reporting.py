"""Deterministic report serialization (JSON and CSV).

Reports contain no timestamps, hostnames, or other environment data, so
serializing the same report twice yields byte-identical output. Floats are
rendered with ``repr`` (shortest round-trip form) and JSON keys appear in a
fixed, documented order:

    config, pairs[] {theta, phi, counts{pp,pm,mp,mm}, freq, expected,
    chi2{stat,p}, e_hat, e_err, e_theory}, chsh{s_hat, s_err, s_theory,
    angles}, verdicts{gof_pass, no_signaling_pass, chsh_side}

Provenance metadata (creation time, package version) is available as a
separate sidecar document and never enters the report payload.
"""

from __future__ import annotations

import json
import sys
from datetime import datetime, timezone

from .experiment import PairResult, Report, RunConfig, Verdicts
from .quantum import JointDistribution
from .stats import ChshEstimate, CountTable

PACKAGE_VERSION = "0.1.0"


class ReportWriteError(OSError):
    """An output file could not be written; message names the path."""


def _dist_dict(dist: JointDistribution) -> dict:
    return {"pp": dist.p_pp, "pm": dist.p_pm, "mp": dist.p_mp, "mm": dist.p_mm}


def _pair_dict(pair: PairResult) -> dict:
    return {
        "theta": pair.theta,
        "phi": pair.phi,
        "counts": {
            "pp": pair.counts.n_pp,
            "pm": pair.counts.n_pm,
            "mp": pair.counts.n_mp,
            "mm": pair.counts.n_mm,
        },
        "freq": _dist_dict(pair.freq),
        "expected": _dist_dict(pair.expected),
        "chi2": {"stat": pair.chi2_stat, "p": pair.chi2_p},
        "e_hat": pair.e_hat,
        "e_err": pair.e_err,
        "e_theory": pair.e_theory,
    }


def report_to_dict(report: Report) -> dict:
    cfg = report.config
    return {
        "config": {
            "model": cfg.model,
            "chsh_angles": list(cfg.chsh_angles),
            "extra_contexts": [list(c) for c in cfg.extra_contexts],
            "trials_per_pair": cfg.trials_per_pair,
            "seed": cfg.seed,
            "format": cfg.out_format,
            "out": cfg.out_path,
            "lhv_rule": report.lhv_rule,
            "gof_alpha": cfg.gof_alpha,
            "no_signaling_tolerance": cfg.no_signaling_tolerance,
        },
        "pairs": [_pair_dict(p) for p in report.pairs],
        "chsh": {
            "s_hat": report.chsh.s_value,
            "s_err": report.chsh.std_error,
            "s_theory": report.chsh_theory,
            "angles": list(report.chsh.angles),
        },
        "verdicts": {
            "gof_pass": report.verdicts.gof_pass,
            "no_signaling_pass": report.verdicts.no_signaling_pass,
            "chsh_side": report.verdicts.chsh_side,
        },
    }


def _dist_from_dict(d: dict, theoretical: bool) -> JointDistribution:
    return JointDistribution(
        p_pp=d["pp"], p_pm=d["pm"], p_mp=d["mp"], p_mm=d["mm"], theoretical=theoretical
    )


def report_from_dict(data: dict) -> Report:
    """Inverse of :func:`report_to_dict`; ``report_from_dict(report_to_dict(r)) == r``."""
    cfg_d = data["config"]
    config = RunConfig(
        model=cfg_d["model"],
        chsh_angles=tuple(cfg_d["chsh_angles"]),
        extra_contexts=tuple(tuple(c) for c in cfg_d["extra_contexts"]),
        trials_per_pair=cfg_d["trials_per_pair"],
        seed=cfg_d["seed"],
        out_format=cfg_d["format"],
        out_path=cfg_d["out"],
        gof_alpha=cfg_d["gof_alpha"],
        no_signaling_tolerance=cfg_d["no_signaling_tolerance"],
    )
    pairs = []
    for p in data["pairs"]:
        counts = CountTable(
            n_pp=p["counts"]["pp"],
            n_pm=p["counts"]["pm"],
            n_mp=p["counts"]["mp"],
            n_mm=p["counts"]["mm"],
        )
        pairs.append(
            PairResult(
                theta=p["theta"],
                phi=p["phi"],
                counts=counts,
                freq=_dist_from_dict(p["freq"], theoretical=False),
                expected=_dist_from_dict(p["expected"], theoretical=True),
                chi2_stat=p["chi2"]["stat"],
                chi2_p=p["chi2"]["p"],
                e_hat=p["e_hat"],
                e_err=p["e_err"],
                e_theory=p["e_theory"],
            )
        )
    chsh_d = data["chsh"]
    chsh = ChshEstimate(
        s_value=chsh_d["s_hat"],
        std_error=chsh_d["s_err"],
        angles=tuple(chsh_d["angles"]),
    )
    verdicts_d = data["verdicts"]
    return Report(
        config=config,
        pairs=tuple(pairs),
        chsh=chsh,
        chsh_theory=chsh_d["s_theory"],
        verdicts=Verdicts(
            gof_pass=verdicts_d["gof_pass"],
            no_signaling_pass=verdicts_d["no_signaling_pass"],
            chsh_side=verdicts_d["chsh_side"],
        ),
        lhv_rule=cfg_d["lhv_rule"],
    )


def render_json(report: Report) -> str:
    return json.dumps(report_to_dict(report), indent=2) + "\n"


def render_csv(report: Report) -> str:
    """One row per pair plus a trailing CHSH summary comment line."""
    lines = ["theta,phi,n_pp,n_pm,n_mp,n_mm,e_hat,e_err,e_theory,chi2,p"]
    for p in report.pairs:
        c = p.counts
        lines.append(
            f"{p.theta!r},{p.phi!r},{c.n_pp},{c.n_pm},{c.n_mp},{c.n_mm},"
            f"{p.e_hat!r},{p.e_err!r},{p.e_theory!r},{p.chi2_stat!r},{p.chi2_p!r}"
        )
    lines.append(
        f"# S_hat={report.chsh.s_value!r},S_err={report.chsh.std_error!r},"
        f"S_theory={report.chsh_theory!r}"
    )
    return "\n".join(lines) + "\n"


def report_bytes(report: Report, out_format: str) -> bytes:
    if out_format == "json":
        return render_json(report).encode("utf-8")
    if out_format == "csv":
        return render_csv(report).encode("utf-8")
    raise ValueError(f"format must be 'json' or 'csv', got {out_format!r}")


def parse_report(data: bytes | str) -> Report:
    """Parse JSON report bytes back into a :class:`Report`."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return report_from_dict(json.loads(data))


def emit_report(report: Report, out_format: str, path: str) -> None:
    """Write the serialized report to ``path``; same report, same bytes."""
    content = report_bytes(report, out_format)
    try:
        with open(path, "wb") as fh:
            fh.write(content)
    except OSError as exc:
        raise ReportWriteError(f"cannot write report to {path!r}: {exc}") from exc


def sidecar_metadata() -> dict:
    """Provenance block kept out of the report payload for byte-determinism."""
    return {
        "created_utc": datetime.now(timezone.utc).isoformat(),
        "package": "eprb-lab",
        "version": PACKAGE_VERSION,
        "python": sys.version.split()[0],
    }


def write_sidecar(path: str) -> None:
    sidecar_path = path + ".sidecar.json"
    try:
        with open(sidecar_path, "w", encoding="utf-8") as fh:
            json.dump(sidecar_metadata(), fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        raise ReportWriteError(f"cannot write sidecar to {sidecar_path!r}: {exc}") from exc
