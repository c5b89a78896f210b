"""Command-line front end.

    brouncker eval    --rep gamma --s 1 --r 1
    brouncker compare --s 2 --r 3/2
    brouncker series  --r 2 --order 3
    brouncker table   --s 1:10:0.5 --r 2 --rep cf,gamma --format csv
    brouncker check   --s 2 --r 1.5 --tol 1e-8

Results go to stdout, diagnostics to stderr.  Exit status is 0 on success,
1 when a requested check fails and 2 when the arguments violate the
hypothesis of the formula being evaluated.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import logderiv, representations
from .asymptotic import asym_coeffs, exp_compose, y_asymptotic
from .domain import DomainPoint
from .errors import BrounckerError, DomainError

log = logging.getLogger("brouncker")

Y_REPRESENTATIONS = ("cf", "product", "gamma", "exponential", "asymptotic")
REPRESENTATIONS = Y_REPRESENTATIONS + ("dlog", "d2log")
CSV_COLUMNS = ("s", "r", "representation", "value", "err_estimate", "iterations")
FIRST_DIFF_STEP, FIRST_DIFF_TOL = 1e-4, 1e-6
SECOND_DIFF_STEP, SECOND_DIFF_TOL = 1e-3, 1e-5


@dataclass(frozen=True)
class Request:
    command: str
    s: tuple[float, ...]
    r: Fraction | None
    representation: tuple[str, ...] = ("gamma",)
    tol: float = 1e-10
    order: int = 3
    terms: int = representations.DEFAULT_PRODUCT_TERMS
    format: str = "text"
    jobs: int = 1
    s_text: str = ""
    r_text: str = ""


def parse_range(text: str) -> tuple[float, ...]:
    """``"x"`` or ``"start:stop:step"`` (stop included when hit up to rounding)."""
    parts = text.split(":")
    if len(parts) == 1:
        return (float(parts[0]),)
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected value or start:stop:step, got {text!r}")
    start, stop, step = (float(x) for x in parts)
    if not step > 0 or not math.isfinite(stop - start) or stop < start:
        raise argparse.ArgumentTypeError(f"range {text!r} needs step > 0 and start <= stop")
    count = math.floor((stop - start) / step + 1e-9) + 1
    return tuple(start + i * step for i in range(count))


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _json(obj) -> str:
    """JSON with every float written to 17 significant digits."""
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_json(v) for v in obj) + "]"
    if isinstance(obj, float):
        return format(obj, ".17g") if math.isfinite(obj) else "null"
    return json.dumps(obj)


def _row(s, r, rep, ev_value, err, iterations, converged=True, method=""):
    return {
        "s": s,
        "r": r,
        "representation": rep,
        "value": float(ev_value),
        "err_estimate": float(err),
        "iterations": int(iterations),
        "converged": bool(converged),
        "method": method,
    }


def evaluate(rep: str, s: float, r: Fraction, req: Request) -> dict:
    p = DomainPoint(s, float(r))
    if rep == "cf":
        ev = representations.y_cf(p, req.tol)
    elif rep == "product":
        ev = representations.y_product(p, req.terms)
    elif rep == "gamma":
        value = representations.y_gamma(p)
        return _row(s, float(r), rep, value, 1e-12 * value, 0, True, representations.CLOSED_FORM)
    elif rep == "exponential":
        ev = representations.y_exponential_evaluation(p, req.tol)
    elif rep == "asymptotic":
        p.require_base()
        value, hint = y_asymptotic(DomainPoint(s, r), M=req.order)
        return _row(s, float(r), rep, value, hint, req.order, True, "asymptotic")
    elif rep == "dlog":
        ev = logderiv.dlog_y_evaluation(p, req.tol)
    elif rep == "d2log":
        ev = logderiv.d2log_y_evaluation(p, req.tol)
    else:
        raise ValueError(f"unknown representation {rep!r}")
    return _row(s, float(r), rep, ev.value, ev.err_estimate, ev.iterations, ev.converged, ev.method)


def _sweep(req: Request, reps) -> list[dict]:
    tasks = [(rep, s) for s in req.s for rep in reps]
    if req.jobs > 1:
        with ThreadPoolExecutor(max_workers=req.jobs) as pool:
            return list(pool.map(lambda t: evaluate(t[0], t[1], req.r, req), tasks))
    return [evaluate(rep, s, req.r, req) for rep, s in tasks]


def _residual(name, s, r, value, tolerance, informational=False):
    return {
        "name": name,
        "s": s,
        "r": r,
        "value": float(value),
        "tolerance": tolerance,
        "passed": None if informational else bool(value <= tolerance),
    }


def _skipped(name, s, r, reason):
    return {"name": name, "s": s, "r": r, "value": None, "tolerance": None, "passed": None, "skipped": reason}


def run_compare(req: Request) -> tuple[list, list]:
    results, residuals = [], []
    for s in req.s:
        rows = [evaluate(rep, s, req.r, req) for rep in Y_REPRESENTATIONS]
        results.extend(rows)
        for i, x in enumerate(rows):
            for y in rows[i + 1 :]:
                delta = abs(x["value"] - y["value"])
                bound = x["err_estimate"] + y["err_estimate"]
                residuals.append(
                    _residual(f"|{x['representation']} - {y['representation']}|", s, float(req.r), delta, bound, True)
                )
    return results, residuals


def check_point(s: float, r: float, tol: float) -> list[dict]:
    """Functional-equation residuals and finite-difference consistency at one point."""
    p = DomainPoint(s, r)
    p.require_base()
    shifted = DomainPoint(s + 2 * r, r)
    inner = 0.01 * tol
    out = [_residual("y(s)y(s+2r) = (s+1)(s+2r-1)", s, r, representations.check_functional(p), tol)]

    def pair(name, fn, rhs):
        value = abs(fn(p, inner) + fn(shifted, inner) - rhs)
        out.append(_residual(name, s, r, value, tol))

    pair("f1(s) + f1(s+2r) = 1/(s+1)", logderiv.f1, 1 / (s + 1))
    pair("f2(s) + f2(s+2r) = 1/(s+2r-1)", logderiv.f2, 1 / (s + 2 * r - 1))
    second = p.in_second_derivative_domain
    for name, fn, rhs in (
        ("h1(s) + h1(s+2r) = 1/(s+1)^2", logderiv.h1, 1 / (s + 1) ** 2),
        ("h2(s) + h2(s+2r) = 1/(s+2r-1)^2", logderiv.h2, 1 / (s + 2 * r - 1) ** 2),
    ):
        if second:
            pair(name, fn, rhs)
        else:
            out.append(_skipped(name, s, r, logderiv.SECOND_HYPOTHESIS))

    h = FIRST_DIFF_STEP
    if s - h > 0:
        fd = (math.log(representations.y_gamma(DomainPoint(s + h, r)))
              - math.log(representations.y_gamma(DomainPoint(s - h, r)))) / (2 * h)
        out.append(_residual("dlog_y vs central difference of ln y", s, r, abs(logderiv.dlog_y(p) - fd), FIRST_DIFF_TOL))
    else:
        out.append(_skipped("dlog_y vs central difference of ln y", s, r, "s must exceed the difference step"))

    h = SECOND_DIFF_STEP
    name = "d2log_y vs second difference of ln y"
    if second and s - h > 0:
        ln = [math.log(representations.y_gamma(DomainPoint(s + k * h, r))) for k in (-1, 0, 1)]
        fd = (ln[0] - 2 * ln[1] + ln[2]) / (h * h)
        out.append(_residual(name, s, r, abs(logderiv.d2log_y(p) - fd), SECOND_DIFF_TOL))
    else:
        out.append(_skipped(name, s, r, logderiv.SECOND_HYPOTHESIS))
    return out


def run(req: Request) -> tuple[int, str]:
    """Execute a request; returns the exit status and the formatted output."""
    results: list = []
    residuals: list = []
    if req.command in ("eval", "table"):
        results = _sweep(req, req.representation)
    elif req.command == "compare":
        results, residuals = run_compare(req)
    elif req.command == "series":
        DomainPoint(1.0, float(req.r)).require_base()
        series = exp_compose(asym_coeffs(req.r, max(req.order, 1)), req.order)
        results = [{
            "r": str(req.r),
            "A": [str(a) for a in series.A[: req.order]],
            "laurent": [str(c) for c in series.laurent],
        }]
    elif req.command == "check":
        for s in req.s:
            residuals.extend(check_point(s, float(req.r), req.tol))
    else:
        raise ValueError(f"unknown command {req.command!r}")

    failed = any(row.get("passed") is False for row in residuals)
    status = "failed" if failed else "ok"
    inputs = {
        "s": req.s_text,
        "r": req.r_text,
        "representation": list(req.representation),
        "tol": req.tol,
        "order": req.order,
    }
    doc = {"command": req.command, "inputs": inputs, "results": results, "residuals": residuals, "status": status}
    return (1 if failed else 0), render(doc, req.format)


def render(doc: dict, form: str) -> str:
    if form == "json":
        return _json(doc) + "\n"
    if form == "csv":
        return _render_csv(doc)
    return _render_text(doc)


def _render_csv(doc: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if doc["command"] == "series":
        writer.writerow(("kind", "index", "value"))
        row = doc["results"][0]
        for n, a in enumerate(row["A"], 1):
            writer.writerow(("A", n, a))
        for m, c in enumerate(row["laurent"]):
            writer.writerow(("laurent", 2 * m - 1, c))
        return buf.getvalue()
    if doc["results"]:
        writer.writerow(CSV_COLUMNS)
        for row in doc["results"]:
            writer.writerow([fmt(row[c]) for c in CSV_COLUMNS])
    if doc["residuals"]:
        if doc["results"]:
            writer.writerow(())
        writer.writerow(("name", "s", "r", "value", "tolerance", "passed"))
        for row in doc["residuals"]:
            writer.writerow([row["name"], fmt(row["s"]), fmt(row["r"]), fmt(row["value"]),
                             fmt(row["tolerance"]), fmt(row["passed"])])
    return buf.getvalue()


def _render_text(doc: dict) -> str:
    lines = []
    if doc["command"] == "series":
        row = doc["results"][0]
        lines.append(f"A: [{', '.join(row['A'])}]")
        lines.append(f"laurent: [{', '.join(row['laurent'])}]")
    for row in doc["results"] if doc["command"] != "series" else ():
        flag = "" if row["converged"] else "  (not converged)"
        lines.append(
            f"s={fmt(row['s'])} r={fmt(row['r'])} {row['representation']:<11} "
            f"value={fmt(row['value'])} err_estimate={row['err_estimate']:.3g} "
            f"iterations={row['iterations']}{flag}"
        )
    for row in doc["residuals"]:
        if row.get("skipped"):
            lines.append(f"SKIP {row['name']} at s={fmt(row['s'])}: {row['skipped']}")
            continue
        mark = {True: "PASS", False: "FAIL", None: "    "}[row["passed"]]
        lines.append(f"{mark} {row['name']} at s={fmt(row['s'])}: {row['value']:.3e} (tol {row['tolerance']:.1e})")
    lines.append(f"status: {doc['status']}")
    return "\n".join(lines) + "\n"


def _representations(text: str) -> tuple[str, ...]:
    reps = tuple(x.strip() for x in text.split(",") if x.strip())
    bad = [x for x in reps if x not in REPRESENTATIONS]
    if bad or not reps:
        raise argparse.ArgumentTypeError(f"unknown representation(s) {bad}; choose from {', '.join(REPRESENTATIONS)}")
    return reps


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="brouncker", description="Generalized Brouncker continued fraction y(s, r).")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug diagnostics on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, s_required=True, rep=False):
        if s_required:
            p.add_argument("--s", required=True, help="value or start:stop:step")
        p.add_argument("--r", required=True, type=parse_rational, help="r > 1/2, e.g. 2, 1.5 or 3/2")
        p.add_argument("--tol", type=float, default=1e-10)
        p.add_argument("--order", type=int, default=3, help="asymptotic order M")
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")
        if rep:
            p.add_argument("--rep", type=_representations, default=("gamma",),
                           help=f"comma-separated subset of {', '.join(REPRESENTATIONS)}")
            p.add_argument("--terms", type=int, default=representations.DEFAULT_PRODUCT_TERMS,
                           help="number of factors for the product form")

    common(sub.add_parser("eval", help="evaluate one or more representations"), rep=True)
    common(sub.add_parser("compare", help="all representations of y side by side"), rep=False)
    common(sub.add_parser("series", help="exact asymptotic coefficients"), s_required=False)
    table = sub.add_parser("table", help="sweep s over a range")
    common(table, rep=True)
    table.add_argument("--jobs", type=int, default=1, help="worker threads; output order is unchanged")
    common(sub.add_parser("check", help="functional-equation and derivative residuals"))
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(name)s: %(message)s")
    if not args.tol > 0:
        parser.error("--tol must be positive")
    if args.order < 0:
        parser.error("--order must be non-negative")
    s_text = getattr(args, "s", "") or ""
    try:
        s_values = parse_range(s_text) if s_text else ()
    except (argparse.ArgumentTypeError, ValueError) as exc:
        parser.error(str(exc))
    req = Request(
        command=args.command,
        s=s_values,
        r=args.r,
        representation=getattr(args, "rep", Y_REPRESENTATIONS if args.command == "compare" else ()),
        tol=args.tol,
        order=args.order,
        terms=getattr(args, "terms", representations.DEFAULT_PRODUCT_TERMS),
        format=args.format,
        jobs=getattr(args, "jobs", 1),
        s_text=s_text,
        r_text=str(args.r),
    )
    try:
        code, text = run(req)
    except DomainError as exc:
        print(f"brouncker: domain error: {exc}", file=sys.stderr)
        return 2
    except BrounckerError as exc:
        print(f"brouncker: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
