"""FastAPI service exposing the simulation laboratory.

Endpoints wrap the pure engine one-to-one:

* ``POST /simulate`` - run one seeded experiment; the response body is the
  canonical report (JSON or CSV bytes, per the requested format), exactly
  what the CLI writes to ``--out``.
* ``POST /table1``   - render a pre-existing-outcome ledger as text + CSV.
* ``POST /chsh``     - analytic CHSH value for given angles and model.
* ``POST /verify``   - run the built-in verification suite.

Run standalone with ``uvicorn eprb_lab.service:app``; the bundled CLI
talks to the same app in-process by default.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException, Response

from .experiment import RunConfig, run_experiment
from .ledger import ContextSet, generate_ledger, render_table1, render_table1_csv
from .lhv import lhv_correlation
from .quantum import correlation
from .reporting import PACKAGE_VERSION, report_bytes
from .schemas import (
    ChshRequest,
    ChshResponse,
    CheckResultModel,
    ServiceInfo,
    SimulateRequest,
    Table1Request,
    Table1Response,
    VerifyRequest,
    VerifyResponse,
)
from .verification import run_checks

_MEDIA_TYPES = {"json": "application/json", "csv": "text/csv"}


def create_app() -> FastAPI:
    app = FastAPI(
        title="eprb-lab",
        version=PACKAGE_VERSION,
        description=(
            "Monte Carlo laboratory for the EPR-Bohm singlet experiment: "
            "quantum, contextual-ledger, and Bell-local models with a CHSH "
            "verification harness."
        ),
    )

    @app.get("/", response_model=ServiceInfo)
    def info() -> ServiceInfo:
        return ServiceInfo(
            name="eprb-lab",
            version=PACKAGE_VERSION,
            endpoints=["/simulate", "/table1", "/chsh", "/verify"],
        )

    @app.post("/simulate")
    def simulate(request: SimulateRequest) -> Response:
        a, a_prime, b, b_prime = request.angles
        config = RunConfig(
            model=request.model,
            chsh_angles=(a, a_prime, b, b_prime),
            extra_contexts=tuple(tuple(c) for c in request.contexts),
            trials_per_pair=request.trials_per_pair,
            seed=request.seed,
            out_format=request.format,
            out_path=request.out,
            gof_alpha=request.gof_alpha,
            no_signaling_tolerance=request.no_signaling_tolerance,
        )
        report = run_experiment(config, workers=request.workers)
        return Response(
            content=report_bytes(report, request.format),
            media_type=_MEDIA_TYPES[request.format],
        )

    @app.post("/table1", response_model=Table1Response)
    def table1(request: Table1Request) -> Table1Response:
        try:
            contexts = ContextSet.from_pairs(request.contexts)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        ledger = generate_ledger(contexts, request.seed)
        return Table1Response(table=render_table1(ledger), csv=render_table1_csv(ledger))

    @app.post("/chsh", response_model=ChshResponse)
    def chsh(request: ChshRequest) -> ChshResponse:
        a, a_prime, b, b_prime = request.angles
        e_of = correlation if request.model in ("quantum", "realist") else lhv_correlation
        es = [e_of(a, b), e_of(a, b_prime), e_of(a_prime, b), e_of(a_prime, b_prime)]
        return ChshResponse(
            model=request.model,
            angles=list(request.angles),
            pair_correlations=es,
            s_value=es[0] - es[1] + es[2] + es[3],
        )

    @app.post("/verify", response_model=VerifyResponse)
    def verify(request: VerifyRequest) -> VerifyResponse:
        try:
            results = run_checks(quick=request.quick, names=request.checks)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return VerifyResponse(
            passed=all(r.passed for r in results),
            checks=[
                CheckResultModel(name=r.name, passed=r.passed, detail=r.detail)
                for r in results
            ],
        )

    return app


app = create_app()


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(app, host="127.0.0.1", port=8000)
