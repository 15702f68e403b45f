"""FastAPI service wrapping the simulator.

Every computation the CLI exposes is available here as a POST endpoint;
the CLI itself is just a client of this app (in process by default).
Domain validation errors surface as HTTP 400 with the original message.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__, checks, circuit, deutsch, noise
from ..gates import OracleFunction
from ..noise import ErrorModel, GateSemantics, NoiseParams
from . import schemas


def create_app() -> FastAPI:
    app = FastAPI(title="pevsim", version=__version__)

    @app.get("/health", response_model=schemas.HealthResponse)
    def health() -> schemas.HealthResponse:
        return schemas.HealthResponse(status="ok")

    @app.post("/run", response_model=schemas.RunResponse, response_model_exclude_none=True)
    def run(request: schemas.RunRequest) -> schemas.RunResponse:
        completed = deutsch.run(OracleFunction.from_name(request.oracle))
        steps = None
        if request.dump_steps:
            steps = [
                schemas.StepState(
                    tau=step.tau,
                    rho_re=step.state.matrix.real.tolist(),
                    rho_im=step.state.matrix.imag.tolist(),
                )
                for step in completed.trace.steps
            ]
        return schemas.RunResponse(
            oracle=request.oracle,
            steps=steps,
            outcome=completed.outcome,
            classification=completed.classification,
        )

    @app.post("/sweep", response_model=schemas.SweepResponse)
    def sweep(request: schemas.SweepRequest) -> schemas.SweepResponse:
        try:
            rows = noise.sweep(request.alpha2_from, request.alpha2_to, request.steps)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return schemas.SweepResponse(
            rows=[
                schemas.SweepRowOut(
                    alpha2=row.alpha2,
                    prob0=row.prob0,
                    prob1=row.prob1,
                    single_gate_err=row.single_gate_err,
                    ratio=row.ratio,
                )
                for row in rows
            ]
        )

    @app.post("/mc", response_model=schemas.McResponse)
    def mc(request: schemas.McRequest) -> schemas.McResponse:
        try:
            params = NoiseParams.identical_gates(request.alpha2)
            model = ErrorModel(kind=request.model, phase_angle=request.phase_angle)
            result = noise.mc_run(
                OracleFunction.from_name(request.oracle),
                params,
                GateSemantics(request.semantics),
                model,
                trials=request.trials,
                seed=request.seed,
            )
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return schemas.McResponse(
            oracle=request.oracle,
            semantics=request.semantics,
            model=request.model,
            trials=result.trials,
            seed=result.seed,
            empirical=result.empirical,
            exact=result.exact,
            std_error=result.std_error,
            within_four_sigma=result.within(4.0),
        )

    @app.post("/verify", response_model=schemas.VerifyResponse)
    def verify(request: schemas.VerifyRequest) -> schemas.VerifyResponse:
        try:
            results = checks.run_checks(only=request.only)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return schemas.VerifyResponse(
            passed=all(r.passed for r in results),
            checks=[
                schemas.CheckOut(
                    name=r.name,
                    passed=r.passed,
                    max_deviation=r.max_deviation,
                    detail=r.detail,
                )
                for r in results
            ],
        )

    @app.post("/circuit", response_model=schemas.CircuitResponse, response_model_exclude_none=True)
    def run_circuit(request: schemas.CircuitRequest) -> schemas.CircuitResponse:
        try:
            parsed = circuit.parse_circuit(request.text)
            outcome = circuit.execute(parsed, seed=request.seed)
        except circuit.CircuitError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        distribution = None
        if outcome.distribution is not None:
            distribution = {label: p for label, p in outcome.distribution}
        return schemas.CircuitResponse(
            steps=[step.render() for step in parsed.steps],
            outcome=outcome.outcome,
            distribution=distribution,
        )

    return app


app = create_app()
