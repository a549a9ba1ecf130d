"""HTTP front end: a small FastAPI app wrapping the solver."""

from fastapi import FastAPI, HTTPException

from .errors import ProblemError
from .runner import run_problem
from .schemas import ProblemSpec, SolveResponse

app = FastAPI(
    title="rootrefine",
    description="Certified refinement of isolated complex polynomial roots",
)


@app.get("/health")
def health():
    return {"status": "ok"}


@app.post("/solve", response_model=SolveResponse)
def solve(problem: ProblemSpec) -> SolveResponse:
    try:
        return run_problem(problem)
    except ProblemError as exc:
        raise HTTPException(status_code=422, detail=str(exc))


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(app, host="0.0.0.0", port=8000)
