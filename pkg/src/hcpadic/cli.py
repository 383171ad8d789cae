"""Command line front end.

    hcpadic classify --p 5 --lambda 91/16
    hcpadic solve periodic --p 5 --lambda -24
    hcpadic verify --p 5 --lambda -24 --law periodic --n 2
    hcpadic scan lambdas.txt --p 5

Every flag can also be set through an environment variable named
HCPADIC_<FLAG> (for instance HCPADIC_PRECISION=96); explicit flags win.
Exit codes: 0 pass, 1 verification failure, 2 bad input, 3 precision too low
to decide, 4 size cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .gibbs import (
    BoundaryLaw,
    CompatibilityError,
    DegeneratePartitionFunction,
    ModelParams,
    NotInEp,
    boundedness_norms,
    check_consistency,
    detect_transition,
    verify_compatibility,
    verify_partition_recursion,
)
from .padic import (
    DEFAULT_PRECISION,
    DomainError,
    PadicNumber,
    PrecisionError,
    from_rational,
    is_prime,
    parse_rational,
)
from .solvers import (
    PeriodicSolution,
    SolverError,
    UnsolvableByMethod,
    classify,
    lambda_region_ti,
    solutions_for_transition,
    solve_periodic,
    solve_ti_diagonal,
    solve_ti_offdiagonal,
    sqrt_one_minus_lambda_region,
    verify_per_system,
    wand_residuals,
)
from .tree import DEFAULT_ENUMERATION_CAP, CapExceeded

log = logging.getLogger("hcpadic")

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_PRECISION, EXIT_CAP = 0, 1, 2, 3, 4
ENV_PREFIX = "HCPADIC_"
LAWS = ("ti-diagonal", "ti-offdiag", "periodic", "ti-trivial")
MIN_PRECISION = 16


class InputError(ValueError):
    pass


class VerificationFailed(Exception):
    """Carries the report of a run whose checks did not all pass."""

    def __init__(self, report: dict):
        super().__init__("verification failed")
        self.report = report


@dataclass
class RunConfig:
    command: str
    p: int
    k: int
    precision: int
    lam_text: str
    n: int
    cap: int
    seed: int
    fmt: str
    law: str = "ti-diagonal"
    perturb: bool = False
    include_root: bool = True
    which: str = "ti"
    path: str | None = None


# -- parsing ------------------------------------------------------------------

_DIGITS = re.compile(r"^\[\s*([0-9,\s]*)\]\s*@\s*(-?\d+)$")


def parse_lambda(text: str, p: int, prec: int) -> PadicNumber:
    """Rational "n/d" or "n", or a finite digit list "[d0,d1,...]@v" (taken as exact)."""
    text = text.strip()
    m = _DIGITS.match(text)
    if m:
        digits = [int(d) for d in m.group(1).replace(" ", "").split(",") if d]
        if any(not 0 <= d < p for d in digits):
            raise InputError(f"digits must lie in [0, {p - 1}]")
        value = sum(d * p**j for j, d in enumerate(digits))
        x = PadicNumber.from_int(value, p, prec)
        return x * PadicNumber(p, int(m.group(2)), 1, prec, True)
    try:
        q = parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse lambda {text!r}") from exc
    return from_rational(q.numerator, q.denominator, p, prec)


def model_from(cfg: RunConfig, lam_text: str | None = None) -> ModelParams:
    lam = parse_lambda(cfg.lam_text if lam_text is None else lam_text, cfg.p, cfg.precision)
    return ModelParams(lam, cfg.k)


def _value(entry, p: int, prec: int) -> PadicNumber:
    if isinstance(entry, dict):
        return PadicNumber.from_json(entry)
    return parse_lambda(str(entry), p, prec)


def load_table_law(path: str, p: int, prec: int) -> BoundaryLaw:
    """JSON file ``{"pairs": [[z1, z2], ...], "gauge": [...]}`` indexed by vertex.

    Entries are rational strings, digit lists, or serialized p-adic numbers.
    """
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read law table {path}: {exc}") from exc
    pairs = [(_value(a, p, prec), _value(b, p, prec)) for a, b in data["pairs"]]
    gauge = data.get("gauge")
    if gauge is not None:
        gauge = tuple(_value(g, p, prec) for g in gauge)
    return BoundaryLaw.from_table(pairs, gauge=gauge)


def build_law(cfg: RunConfig, m: ModelParams) -> BoundaryLaw:
    if cfg.law.startswith("table:"):
        return load_table_law(cfg.law[len("table:"):], m.p, m.prec)
    if cfg.law == "ti-trivial":
        one = PadicNumber.one(m.p, m.prec)
        return BoundaryLaw.translation_invariant(one, one)
    if cfg.law == "ti-diagonal":
        t = solve_ti_diagonal(m)
        return BoundaryLaw.translation_invariant(t, t)
    if cfg.law == "ti-offdiag":
        pair = solve_ti_offdiagonal(m)
        if pair is None:
            raise VerificationFailed({"law": cfg.law, "error": "no off-diagonal TI solution"})
        return BoundaryLaw.translation_invariant(*pair)
    if cfg.law == "periodic":
        sol = solve_periodic(m)
        if sol is None:
            raise VerificationFailed({"law": cfg.law, "error": "no period-two solution"})
        return sol.law()
    raise InputError(f"unknown law {cfg.law!r}")


# -- reports ------------------------------------------------------------------


def _q(x: Fraction) -> str:
    return str(x)


def _num(x: PadicNumber) -> dict:
    return x.to_json()


def _witness(z1: PadicNumber, z2: PadicNumber, m: ModelParams) -> dict:
    r1, r2 = wand_residuals(z1, z2, m)
    return {
        "z1_digits": z1.digits(),
        "z2_digits": z2.digits(),
        "z1": _num(z1),
        "z2": _num(z2),
        "residual_norm": _q(max(r1.norm(), r2.norm())),
    }


def _periodic_report(sol: PeriodicSolution | None, m: ModelParams) -> dict | None:
    if sol is None:
        return None
    rep = verify_per_system(sol, m)
    vieta = sol.z_plus * sol.z_minus - 1
    return {
        "z_plus_digits": sol.z_plus.digits(),
        "z_minus_digits": sol.z_minus.digits(),
        "z_plus": _num(sol.z_plus),
        "z_minus": _num(sol.z_minus),
        "vieta_ok": vieta.is_zero(),
        "residual_norm": _q(rep.max_residual_norm),
        "per_system_ok": rep.passed,
    }


def cmd_classify(cfg: RunConfig) -> tuple[int, dict]:
    m = model_from(cfg)
    c = classify(m)
    report = {
        "lambda": cfg.lam_text,
        "p": m.p,
        "k": m.k,
        "precheck": c.precheck.value,
        "verdict": c.verdict.value,
        "region": c.region,
        "witnesses": [_witness(z1, z2, m) for z1, z2 in c.witnesses],
    }
    if c.note:
        report["note"] = c.note
    return EXIT_OK, report


def cmd_solve(cfg: RunConfig) -> tuple[int, dict]:
    m = model_from(cfg)
    report: dict = {"lambda": cfg.lam_text, "p": m.p, "k": m.k}
    if cfg.which == "ti":
        c = classify(m)
        report["verdict"] = c.verdict.value
        report["witnesses"] = [_witness(z1, z2, m) for z1, z2 in c.witnesses]
        report["periodic"] = None
        if not c.witnesses:
            report["empty_reason"] = c.note or "no TI solution found"
        ok = all(Fraction(w["residual_norm"]) <= _tol(m) for w in report["witnesses"])
    else:
        sol = solve_periodic(m)
        report["verdict"] = "periodic" if sol is not None else "empty"
        report["witnesses"] = []
        report["periodic"] = _periodic_report(sol, m)
        if sol is None:
            region = False if (1 - m.lam).is_zero() else sqrt_one_minus_lambda_region(m.lam)
            report["empty_reason"] = f"1 - lambda is not a nonzero square (region={region})"
            ok = True
        else:
            ok = report["periodic"]["per_system_ok"] and report["periodic"]["vieta_ok"]
    return (EXIT_OK if ok else EXIT_FAIL), report


def _tol(m: ModelParams) -> Fraction:
    return Fraction(m.p) ** -(m.prec - 8)


def cmd_verify(cfg: RunConfig) -> tuple[int, dict]:
    m = model_from(cfg)
    n = cfg.n
    if n < (1 if cfg.include_root else 2):
        raise InputError("verify needs n >= 1 (n >= 2 without the root)")
    try:
        law = build_law(cfg, m)
    except VerificationFailed as exc:
        exc.report.update({"lambda": cfg.lam_text, "p": m.p, "k": m.k, "n": n})
        raise
    if cfg.perturb:
        law = law.perturbed()
    compat = verify_compatibility(law, m, n)
    cons = check_consistency(m, law, n, cfg.cap, include_root=cfg.include_root)
    try:
        rec_ok = verify_partition_recursion(
            m, law, n - 1, cfg.cap, include_root=cfg.include_root
        ).passed
    except CompatibilityError as exc:
        # a_z(x) is only defined where the recursion holds
        log.info("partition recursion skipped: %s", exc)
        rec_ok = False
    bnd = boundedness_norms(m, law, n, cfg.cap, include_root=cfg.include_root)
    transition = detect_transition(m, *solutions_for_transition(m))
    report = {
        "lambda": cfg.lam_text,
        "p": m.p,
        "k": m.k,
        "n": n,
        "law": cfg.law + (" (perturbed)" if cfg.perturb else ""),
        "znorm": _q(bnd.znorm),
        "munorm": _q(bnd.munorm),
        "max_defect_norm": _q(cons.max_defect_norm),
        "bounded": bnd.bounded,
        "transition": transition.value,
        "checks": {
            "compatibility": compat.passed,
            "consistency": cons.passed,
            "partition_recursion": rec_ok,
        },
        "closed_form": {
            "znorm": _q(bnd.closed_form_znorm),
            "munorm": _q(bnd.closed_form_munorm),
            "matches": bnd.matches_closed_form,
        },
    }
    ok = all(report["checks"].values())
    return (EXIT_OK if ok else EXIT_FAIL), report


def _scan_row(cfg: RunConfig, text: str) -> dict:
    row: dict = {"lambda": text}
    try:
        m = model_from(cfg, text)
        c = classify(m)
        row["verdict"] = c.verdict.value
        row["region_ti"] = lambda_region_ti(m.lam) if m.k == 2 and m.p > 3 else None
        if (1 - m.lam).is_zero():
            row["sqrt_region"] = False
        else:
            row["sqrt_region"] = sqrt_one_minus_lambda_region(m.lam)
        ti, periodic = solutions_for_transition(m)
        row["periodic"] = bool(periodic)
        row["transition"] = detect_transition(m, ti, periodic).value
    except NotInEp as exc:
        row["error"] = str(exc)
    except (PrecisionError, SolverError, DomainError, ValueError, ArithmeticError) as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def cmd_scan(cfg: RunConfig) -> tuple[int, dict]:
    try:
        lines = Path(cfg.path).read_text().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read {cfg.path}: {exc}") from exc
    entries = [ln.split("#", 1)[0].strip() for ln in lines]
    rows = [_scan_row(cfg, e) for e in entries if e]
    return EXIT_OK, {"p": cfg.p, "k": cfg.k, "rows": rows}


COMMANDS = {"classify": cmd_classify, "solve": cmd_solve, "verify": cmd_verify, "scan": cmd_scan}


# -- output -------------------------------------------------------------------


def _text(report: dict, indent: str = "") -> list[str]:
    out = []
    for key, value in report.items():
        if isinstance(value, dict):
            if {"p", "digits"} <= value.keys():
                out.append(f"{indent}{key}: {PadicNumber.from_json(value)}")
                continue
            out.append(f"{indent}{key}:")
            out.extend(_text(value, indent + "  "))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            out.append(f"{indent}{key}:")
            for i, item in enumerate(value):
                out.append(f"{indent}  [{i}]")
                out.extend(_text(item, indent + "    "))
        else:
            out.append(f"{indent}{key}: {value}")
    return out


def _scan_table(report: dict) -> list[str]:
    cols = ["lambda", "verdict", "region_ti", "sqrt_region", "periodic", "transition"]
    rows = [
        [r["lambda"], f"error: {r['error']}"] if "error" in r else [str(r.get(c)) for c in cols]
        for r in report["rows"]
    ]
    full = [r for r in rows if len(r) == len(cols)]
    widths = [max([len(c)] + [len(r[i]) for r in full]) for i, c in enumerate(cols)]
    fmt = lambda cells: "  ".join(s.ljust(w) for s, w in zip(cells, widths)).rstrip()
    return [fmt(cols)] + [fmt(r) if len(r) == len(cols) else f"{r[0].ljust(widths[0])}  {r[1]}" for r in rows]


def emit(report: dict, fmt: str, command: str) -> None:
    if fmt == "json":
        print(json.dumps(report, sort_keys=True, indent=2))
    elif command == "scan":
        print("\n".join(_scan_table(report)))
    else:
        print("\n".join(_text(report)))


# -- argument handling ---------------------------------------------------------


def _env(name: str, default):
    raw = os.environ.get(ENV_PREFIX + name.upper())
    if raw is None:
        return default
    return type(default)(raw) if default is not None else raw


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=_env("p", 5))
    common.add_argument("--k", type=int, default=_env("k", 2))
    common.add_argument("--n", type=int, default=_env("n", 2))
    common.add_argument("--precision", type=int, default=_env("precision", DEFAULT_PRECISION))
    common.add_argument("--lambda", dest="lam", default=_env("lambda", "1"))
    common.add_argument("--law", default=_env("law", "ti-diagonal"))
    common.add_argument("--format", dest="fmt", choices=("text", "json"), default=_env("format", "text"))
    common.add_argument("--cap", type=int, default=_env("cap", DEFAULT_ENUMERATION_CAP))
    common.add_argument("--seed", type=int, default=_env("seed", 0))
    common.add_argument("--perturb", action="store_true", help="multiply z'_1 by 1 + p before verifying")
    common.add_argument(
        "--exclude-root", action="store_true",
        help="use the spheres W_1..W_n as the volume instead of the ball with its root",
    )
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="hcpadic", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[common], help="decide how many TI laws exist")
    solve = sub.add_parser("solve", parents=[common], help="construct TI or period-two laws")
    solve.add_argument("which", choices=("ti", "periodic"))
    sub.add_parser("verify", parents=[common], help="check a law against finite volumes")
    scan = sub.add_parser("scan", parents=[common], help="classify every lambda listed in a file")
    scan.add_argument("path")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    if not is_prime(ns.p):
        raise InputError(f"p = {ns.p} is not prime")
    if ns.k < 1:
        raise InputError("k must be >= 1")
    if ns.precision < MIN_PRECISION:
        raise InputError(f"precision must be at least {MIN_PRECISION}")
    if not (ns.law in LAWS or ns.law.startswith("table:")):
        raise InputError(f"--law must be one of {', '.join(LAWS)} or table:FILE")
    return RunConfig(
        command=ns.command,
        p=ns.p,
        k=ns.k,
        precision=ns.precision,
        lam_text=ns.lam,
        n=ns.n,
        cap=ns.cap,
        seed=ns.seed,
        fmt=ns.fmt,
        law=ns.law,
        perturb=ns.perturb,
        include_root=not ns.exclude_root,
        which=getattr(ns, "which", "ti"),
        path=getattr(ns, "path", None),
    )


def run(cfg: RunConfig) -> tuple[int, dict]:
    try:
        return COMMANDS[cfg.command](cfg)
    except VerificationFailed as exc:
        return EXIT_FAIL, exc.report
    except (NotInEp, InputError, DomainError) as exc:
        return EXIT_INPUT, {"error": str(exc)}
    except PrecisionError as exc:
        return EXIT_PRECISION, {"error": f"undecidable at precision {cfg.precision}: {exc}"}
    except CapExceeded as exc:
        return EXIT_CAP, {"error": str(exc)}
    except (UnsolvableByMethod, CompatibilityError, DegeneratePartitionFunction) as exc:
        return EXIT_FAIL, {"error": f"{type(exc).__name__}: {exc}"}
    except (ValueError, IndexError) as exc:
        return EXIT_INPUT, {"error": str(exc)}


def _glue_negative_lambda(argv: list[str]) -> list[str]:
    # argparse reads "-24/1" as an option; fold it into "--lambda=-24/1"
    out, i = [], 0
    while i < len(argv):
        if argv[i] == "--lambda" and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"--lambda={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(_glue_negative_lambda(sys.argv[1:] if argv is None else list(argv)))
    logging.basicConfig(
        level=logging.DEBUG if ns.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = config_from_args(ns)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    code, report = run(cfg)
    if "error" in report and code != EXIT_FAIL:
        print(f"error: {report['error']}", file=sys.stderr)
    else:
        emit(report, cfg.fmt, cfg.command)
    return code


if __name__ == "__main__":
    sys.exit(main())
