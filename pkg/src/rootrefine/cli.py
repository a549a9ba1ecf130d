"""Batch command line: a thin client over the solver (local or remote).

Reads a JSON problem file, runs it through the same code path as the HTTP
service (or POSTs it to a running service with --server), and writes the
results as JSON lines: one record per disc plus a trailing summary.

Exit codes: 0 full success, 1 malformed input, 2 per-disc failures.
"""

from __future__ import annotations

import argparse
import json
import sys

from pydantic import ValidationError

from .errors import ProblemError
from .runner import run_problem
from .schemas import ProblemSpec, SolveResponse


def _arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rootrefine",
        description="Refine isolated complex polynomial roots to a target accuracy",
    )
    ap.add_argument("--input", required=True, help="JSON problem file")
    ap.add_argument(
        "--mode",
        choices=["refine", "all", "factor", "oracle"],
        help="override the mode tag of the problem file",
    )
    ap.add_argument("--eps-bits", type=int, help="override the target accuracy (bits)")
    ap.add_argument(
        "--precision-bits", type=int, help="override the working precision (bits)"
    )
    ap.add_argument("--output", help="write JSON-lines results to this path")
    ap.add_argument(
        "--json", action="store_true", help="print JSON-lines results to stdout"
    )
    ap.add_argument(
        "--server", help="POST the problem to a running service at this base URL"
    )
    return ap


def _load_problem(path: str, args) -> ProblemSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ProblemError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ProblemError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(raw, dict):
        raise ProblemError(f"{path}: problem document must be a JSON object")
    if args.mode:
        raw["mode"] = args.mode
    if args.eps_bits is not None:
        raw["eps_bits"] = args.eps_bits
    if args.precision_bits is not None:
        raw["precision_bits"] = args.precision_bits
    try:
        return ProblemSpec.model_validate(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        loc = ".".join(str(x) for x in first["loc"])
        raise ProblemError(f"{path}: field {loc}: {first['msg']}") from exc


def _solve_remote(problem: ProblemSpec, base_url: str) -> SolveResponse:
    import httpx

    resp = httpx.post(
        base_url.rstrip("/") + "/solve", json=problem.model_dump(), timeout=None
    )
    if resp.status_code == 422:
        raise ProblemError(resp.json().get("detail", "invalid problem"))
    resp.raise_for_status()
    return SolveResponse.model_validate(resp.json())


def _emit(result: SolveResponse, args) -> None:
    lines = [
        json.dumps(rec.model_dump(exclude_none=True), separators=(",", ":"))
        for rec in result.records
    ]
    lines.append(
        json.dumps({"summary": result.summary.model_dump()}, separators=(",", ":"))
    )
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    if args.json:
        sys.stdout.write(text)
    else:
        s = result.summary
        print(
            f"mode={s.mode} degree={s.degree} lambda={s.lambda_bits} "
            f"ok={s.n_ok} failed={s.n_failed} in {s.total_ms:.1f} ms"
        )
        for rec in result.records:
            if rec.error:
                print(f"  [{rec.index}] FAILED: {rec.error}")
            elif rec.root is not None:
                print(f"  [{rec.index}] root=({rec.root[0]}, {rec.root[1]}) "
                      f"err<=2^{rec.err_exp}")
            elif rec.factor is not None:
                print(f"  [{rec.index}] factor degree {len(rec.factor) - 1} "
                      f"residual<=2^{rec.err_exp}")


def main(argv=None) -> int:
    args = _arg_parser().parse_args(argv)
    try:
        problem = _load_problem(args.input, args)
        if args.server:
            result = _solve_remote(problem, args.server)
        else:
            result = run_problem(problem)
    except ProblemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(result, args)
    return 2 if result.summary.n_failed else 0


if __name__ == "__main__":
    sys.exit(main())
