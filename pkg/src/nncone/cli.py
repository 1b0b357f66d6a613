"""Command-line front end.

Exit codes: 0 success/accepted, 2 validation, 3 unresolved regime,
4 oracle mismatch, 5 candidate rejected.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import closedform, cone, projector
from .cone import (
    ConeProblem,
    ExplicitMoments,
    Indicator,
    MonotoneStep,
    Power,
    PowerMixture,
    SignedPower,
)
from .exactmath import as_rational, rational_sqrt

log = logging.getLogger("nncone")

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_UNRESOLVED = 3
EXIT_MISMATCH = 4
EXIT_REJECTED = 5

MODES = ("closed-form", "active-set", "oracle", "auto")
TARGET_KINDS = ("power", "signed-power", "indicator", "power-mixture", "monotone", "moments")
RATIONAL_FLAGS = ("--beta", "--gamma", "--a", "--norm-sq", "--moments", "--atoms")


class ValidationError(ValueError):
    def __init__(self, field: str, message: str):
        super().__init__(f"invalid {field}: {message}")
        self.field = field


class CommandFailed(Exception):
    """Carries a report together with a non-zero exit code."""

    def __init__(self, code: int, message: str, payload=None):
        super().__init__(message)
        self.code = code
        self.payload = payload


def fmt(q: Optional[Fraction]) -> Optional[str]:
    if q is None:
        return None
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def dec(x) -> Optional[str]:
    return None if x is None else format(float(x), ".17g")


def parse_rational(text, field: str) -> Fraction:
    try:
        return as_rational(text if not isinstance(text, float) else str(text))
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ValidationError(field, f"{text!r} is not an exact rational ({exc})") from None


# --------------------------------------------------------------------------
# target serialization


def target_to_dict(target) -> dict:
    if isinstance(target, Power):
        return {"kind": "power", "beta": fmt(target.beta)}
    if isinstance(target, SignedPower):
        return {"kind": "signed-power", "gamma": fmt(target.gamma)}
    if isinstance(target, Indicator):
        return {"kind": "indicator", "a": fmt(target.a)}
    if isinstance(target, PowerMixture):
        return {"kind": "power-mixture", "m": target.m,
                "atoms": [[fmt(al), fmt(w)] for al, w in target.atoms]}
    if isinstance(target, MonotoneStep):
        return {"kind": "monotone", "atoms": [[fmt(a), fmt(w)] for a, w in target.atoms]}
    if isinstance(target, ExplicitMoments):
        return {"kind": "moments", "moments": [fmt(v) for v in target.moments],
                "norm_sq": fmt(target.norm_sq)}
    raise TypeError(target)


def _atoms(raw, field: str):
    try:
        return tuple((parse_rational(p, f"{field}[{i}]"), parse_rational(w, f"{field}[{i}]"))
                     for i, (p, w) in enumerate(raw))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(field, "expected a list of [position, weight] pairs") from None


def target_from_dict(d: dict):
    if not isinstance(d, dict):
        raise ValidationError("target", "expected an object")
    kind = d.get("kind")

    def need(key):
        if d.get(key) is None:
            raise ValidationError(f"target.{key}", f"required for kind {kind!r}")
        return d[key]

    try:
        if kind == "power":
            return Power(parse_rational(need("beta"), "target.beta"))
        if kind == "signed-power":
            return SignedPower(parse_rational(need("gamma"), "target.gamma"))
        if kind == "indicator":
            return Indicator(parse_rational(need("a"), "target.a"))
        if kind == "power-mixture":
            m = need("m")
            if not isinstance(m, int) or isinstance(m, bool):
                raise ValidationError("target.m", "must be a natural number")
            return PowerMixture(m, _atoms(need("atoms"), "target.atoms"))
        if kind == "monotone":
            return MonotoneStep(_atoms(need("atoms"), "target.atoms"))
        if kind == "moments":
            moments = need("moments")
            if not isinstance(moments, list) or not moments:
                raise ValidationError("target.moments", "expected a nonempty list")
            ns = d.get("norm_sq")
            return ExplicitMoments(
                tuple(parse_rational(v, f"target.moments[{i}]") for i, v in enumerate(moments)),
                None if ns is None else parse_rational(ns, "target.norm_sq"))
    except cone.InvalidTarget as exc:
        raise ValidationError(f"target.{exc.field}", str(exc)) from None
    raise ValidationError("target.kind", f"expected one of {', '.join(TARGET_KINDS)}")


@dataclass
class ProblemSpec:
    target: object
    truncation: int = 12
    j_max: int = projector.DEFAULT_J_MAX
    mode: str = "auto"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValidationError("mode", f"expected one of {', '.join(MODES)}")
        for name in ("truncation", "j_max"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                raise ValidationError(name, "must be a positive integer")
        if isinstance(self.target, ExplicitMoments):
            avail = len(self.target.moments) - 1
            if self.truncation > avail:
                raise ValidationError(
                    "truncation", f"only {avail + 1} moments supplied, so truncation <= {avail}")
            self.j_max = min(self.j_max, avail)
        if self.j_max < self.truncation and self.mode in ("active-set", "oracle"):
            raise ValidationError("j_max", "must be at least the truncation")

    def to_dict(self) -> dict:
        return {"target": target_to_dict(self.target), "truncation": self.truncation,
                "j_max": self.j_max, "mode": self.mode}

    @classmethod
    def from_dict(cls, d: dict) -> "ProblemSpec":
        if not isinstance(d, dict) or "target" not in d:
            raise ValidationError("target", "problem document needs a target")
        target = target_from_dict(d["target"])
        kwargs = {k: d[k] for k in ("truncation", "j_max", "mode") if d.get(k) is not None}
        if "mode" in kwargs:
            kwargs["mode"] = str(kwargs["mode"]).replace("_", "-")
        if isinstance(target, ExplicitMoments) and "truncation" not in kwargs:
            kwargs["truncation"] = max(1, len(target.moments) - 1)
        return cls(target, **kwargs)

    @property
    def problem(self) -> ConeProblem:
        return ConeProblem(self.target)


# --------------------------------------------------------------------------
# reports


@dataclass
class ReportDocument:
    problem: dict
    method: str
    coefficients: dict
    verification: dict
    distance_sq: Optional[Fraction] = None
    rel_distance_sq: Optional[Fraction] = None
    certificate: Optional[dict] = None
    certified: bool = False
    regime: Optional[str] = None
    verdict: Optional[str] = None
    timing: Optional[float] = field(default=None, compare=False)

    @property
    def active_set(self) -> list[int]:
        return sorted(self.coefficients)

    def to_dict(self) -> dict:
        d_exact = rel_exact = None
        if self.distance_sq is not None:
            d_exact = rational_sqrt(self.distance_sq)
        if self.rel_distance_sq is not None:
            rel_exact = rational_sqrt(self.rel_distance_sq)
        out = {
            "problem": self.problem,
            "method": self.method,
            "active_set": self.active_set,
            "coefficients": {str(k): fmt(self.coefficients[k]) for k in self.active_set},
            "coefficients_decimal": {str(k): dec(self.coefficients[k]) for k in self.active_set},
            "distance": {
                "squared": fmt(self.distance_sq),
                "exact": fmt(d_exact),
                "decimal": None if self.distance_sq is None else dec(float(self.distance_sq) ** 0.5),
            },
            "relative_distance": {
                "squared": fmt(self.rel_distance_sq),
                "exact": fmt(rel_exact),
                "decimal": None if self.rel_distance_sq is None
                else dec(float(self.rel_distance_sq) ** 0.5),
            },
            "verification": self.verification,
            "certificate": self.certificate,
            "certified": self.certified,
        }
        if self.regime is not None:
            out["regime"] = self.regime
        if self.verdict is not None:
            out["verdict"] = self.verdict
        if self.timing is not None:
            out["timing_seconds"] = self.timing
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "ReportDocument":
        def q(v):
            return None if v is None else Fraction(v)

        return cls(
            problem=d["problem"],
            method=d["method"],
            coefficients={int(k): Fraction(v) for k, v in d["coefficients"].items()},
            verification=d["verification"],
            distance_sq=q(d["distance"]["squared"]),
            rel_distance_sq=q(d["relative_distance"]["squared"]),
            certificate=d.get("certificate"),
            certified=d.get("certified", False),
            regime=d.get("regime"),
            verdict=d.get("verdict"),
            timing=d.get("timing_seconds"),
        )


def verification_to_dict(v: projector.VerificationReport, S) -> dict:
    return {
        "j_max": v.truncation,
        "accepted": v.accepted,
        "equality_ok": v.equality_ok,
        "inequality_ok": v.inequality_ok,
        "positivity_ok": v.positivity_ok,
        "orthogonality_ok": v.orthogonality_ok,
        "certified_all_orders": v.certified_all_orders,
        "first_violation": v.first_violation(S),
        "residuals": [fmt(r) for r in v.residuals],
    }


def certificate_to_dict(c: closedform.TailCertificate) -> dict:
    def plain(v):
        return fmt(v) if isinstance(v, Fraction) else v

    return {
        "family": c.family,
        "parameters": {k: plain(v) for k, v in c.parameters.items()},
        "finite_checks": c.finite_checks,
        "algebraic_ok": c.algebraic_ok,
        "checks": dict(c.checks),
    }


# --------------------------------------------------------------------------
# commands


def _document(spec, method, solution, verification, cert=None, regime=None, verdict=None):
    d_sq, rel = projector.distance(spec.problem, solution)
    if cert is not None and cert.algebraic_ok and verification.accepted:
        verification.certified_all_orders = True
    return ReportDocument(
        problem=spec.to_dict(),
        method=method,
        coefficients=dict(solution.x),
        verification=verification_to_dict(verification, solution.S),
        distance_sq=d_sq,
        rel_distance_sq=rel,
        certificate=None if cert is None else certificate_to_dict(cert),
        certified=verification.certified_all_orders,
        regime=None if regime is None else regime.value,
        verdict=verdict,
    )


def _regime_of(target):
    if isinstance(target, Indicator):
        return closedform.classify_indicator(target.a)
    return None


def _closed_form_if_matching(target, solution):
    if not closedform.has_closed_form(target):
        return None
    cf = closedform.closed_form_projection(target)
    return cf.certificate if cf.solution == solution else None


def cmd_project(spec: ProblemSpec) -> ReportDocument:
    mode = spec.mode
    if mode == "auto":
        mode = "closed-form" if closedform.has_closed_form(spec.target) else "active-set"
    if mode == "closed-form":
        try:
            cf = closedform.closed_form_projection(spec.target)
        except closedform.UnresolvedRegime as exc:
            raise CommandFailed(EXIT_UNRESOLVED, str(exc)) from None
        j_max = max(spec.j_max, max(cf.solution.S, default=0))
        v = projector.verify_candidate(spec.problem, cf.solution, j_max)
        return _document(spec, "closed-form", cf.solution, v, cf.certificate,
                         cf.regime or _regime_of(spec.target))
    if mode == "oracle":
        if spec.truncation > projector.ORACLE_MAX_N:
            raise ValidationError("truncation", f"oracle mode needs truncation <= "
                                                f"{projector.ORACLE_MAX_N}")
        rep = projector.exhaustive_oracle(spec.problem, spec.truncation, spec.j_max)
    else:
        rep = projector.nnls_active_set(spec.problem, spec.truncation, spec.j_max)
    cert = _closed_form_if_matching(spec.target, rep.solution)
    return _document(spec, mode, rep.solution, rep.verification, cert,
                     _regime_of(spec.target))


def cmd_oracle_compare(spec: ProblemSpec) -> ReportDocument:
    if spec.truncation > projector.ORACLE_MAX_N:
        raise ValidationError("truncation", f"must be <= {projector.ORACLE_MAX_N}")
    fast = projector.nnls_active_set(spec.problem, spec.truncation, spec.j_max)
    try:
        slow = projector.exhaustive_oracle(spec.problem, spec.truncation, spec.j_max)
        verdict = "MATCH" if slow.solution == fast.solution else "MISMATCH"
    except projector.UniquenessViolation as exc:
        log.error("oracle: %s", exc)
        verdict = "MISMATCH"
    doc = _document(spec, "oracle-compare", fast.solution, fast.verification,
                    regime=_regime_of(spec.target), verdict=verdict)
    if verdict != "MATCH":
        raise CommandFailed(EXIT_MISMATCH, "active-set and exhaustive results differ", doc)
    return doc


def cmd_verify(spec: ProblemSpec, candidate: projector.ActiveSetSolution) -> ReportDocument:
    j_max = max(spec.j_max, max(candidate.S, default=0))
    v = projector.verify_candidate(spec.problem, candidate, j_max)
    cert = _closed_form_if_matching(spec.target, candidate) if v.accepted else None
    doc = _document(spec, "verify", candidate, v, cert, _regime_of(spec.target))
    if not v.accepted:
        raise CommandFailed(EXIT_REJECTED, f"candidate rejected; {v.first_violation(candidate.S)}",
                            doc)
    return doc


def candidate_from_dict(d: dict) -> projector.ActiveSetSolution:
    if not isinstance(d, dict):
        raise ValidationError("candidate", "expected an object")
    if "coefficients" in d:
        coeffs = d["coefficients"]
        if not isinstance(coeffs, dict):
            raise ValidationError("candidate.coefficients", "expected an index -> p/q map")
        try:
            pairs = {int(k): parse_rational(v, f"candidate.coefficients[{k}]")
                     for k, v in coeffs.items()}
        except ValueError as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError("candidate.coefficients", "indices must be integers") from None
    elif "S" in d and "x" in d:
        if len(d["S"]) != len(d["x"]):
            raise ValidationError("candidate.x", "needs one coefficient per index in S")
        pairs = {int(k): parse_rational(v, f"candidate.x[{i}]")
                 for i, (k, v) in enumerate(zip(d["S"], d["x"]))}
    else:
        raise ValidationError("candidate", "needs 'coefficients' or both 'S' and 'x'")
    if any(k < 0 for k in pairs):
        raise ValidationError("candidate", "indices must be non-negative")
    return projector.ActiveSetSolution(tuple(pairs), pairs)


def sample_rows(spec: ProblemSpec, grid: int, interval: str = "full"):
    """Rows ``(t, w(t), w*(t))`` on an equispaced grid, as floats."""
    if grid < 2:
        raise ValidationError("grid", "needs at least 2 points")
    doc = cmd_project(spec)
    coeffs = doc.coefficients
    lo = Fraction(-1) if interval == "full" else Fraction(0)
    rows = []
    for i in range(grid):
        t = lo + (1 - lo) * Fraction(i, grid - 1)
        # exact evaluation, rounded once
        w_star = sum((c * t ** k for k, c in coeffs.items()), Fraction(0))
        rows.append((float(t), cone.evaluate(spec.target, float(t)), float(w_star)))
    return doc, rows


def nonclosed_rows(n_list):
    return [(N, *closedform.nonclosedness_witness(N)) for N in n_list]


def fuzz_targets(count: int, length: int, seed: int):
    rng = random.Random(seed)
    for _ in range(count):
        yield ExplicitMoments(tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 9))
                                    for _ in range(length)))


# --------------------------------------------------------------------------
# argument handling


def _normalize_argv(argv):
    """Glue negative values onto rational flags so ``--a -1/4`` parses."""
    out, it = [], iter(argv)
    for tok in it:
        if tok in RATIONAL_FLAGS:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            else:
                out.append(f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def _add_problem_args(p):
    p.add_argument("--problem", help="JSON problem document")
    p.add_argument("--target", choices=TARGET_KINDS)
    p.add_argument("--beta")
    p.add_argument("--gamma")
    p.add_argument("--a")
    p.add_argument("--m", type=int)
    p.add_argument("--atoms", help="comma separated pos:weight pairs")
    p.add_argument("--moments", help="comma separated p/q values")
    p.add_argument("--norm-sq")
    p.add_argument("--truncation", type=int)
    p.add_argument("--j-max", type=int)
    p.add_argument("--mode", choices=MODES)


def _add_output_args(p, formats=("json", "csv")):
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--out", help="write to this path instead of stdout")
    p.add_argument("--timing", action="store_true", help="include wall time in reports")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nncone",
        description="Projections onto power series with non-negative coefficients in L2[-1,1].")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("project", help="compute a projection")
    _add_problem_args(p)
    _add_output_args(p)

    p = sub.add_parser("verify", help="check a candidate (S, x)")
    _add_problem_args(p)
    p.add_argument("--candidate", required=True, help="JSON file with the candidate")
    _add_output_args(p)

    p = sub.add_parser("oracle-compare", help="active-set solver vs exhaustive search")
    _add_problem_args(p)
    p.add_argument("--fuzz", type=int, default=0,
                   help="also compare this many random moment targets")
    p.add_argument("--seed", type=int, default=0)
    _add_output_args(p)

    p = sub.add_parser("classify", help="indicator regime for a threshold")
    p.add_argument("--a", required=True)
    _add_output_args(p)

    p = sub.add_parser("sample", help="target and projection on a grid (CSV)")
    _add_problem_args(p)
    p.add_argument("--grid", type=int, default=101)
    p.add_argument("--interval", choices=("full", "positive"), default="full")
    _add_output_args(p, formats=("csv", "json"))

    p = sub.add_parser("nonclosed-demo", help="divergence witness on L2[0,1]")
    p.add_argument("--n-list", default="10,50,100,400")
    _add_output_args(p, formats=("csv", "json"))

    p = sub.add_parser("batch", help="run a JSON list of problems")
    p.add_argument("batch", help="JSON file holding a list of jobs")
    p.add_argument("--jobs", type=int, default=1)
    _add_output_args(p, formats=("json",))
    return parser


def _split_pairs(text: str, field: str):
    pairs = []
    for i, chunk in enumerate(x for x in text.split(",") if x.strip()):
        if ":" not in chunk:
            raise ValidationError(f"{field}[{i}]", f"{chunk!r} is not pos:weight")
        pos, w = chunk.split(":", 1)
        pairs.append([pos, w])
    return pairs


def spec_from_args(args) -> ProblemSpec:
    if args.problem:
        try:
            with open(args.problem, encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError("problem", str(exc)) from None
    else:
        if not args.target:
            raise ValidationError("--target", "required unless --problem is given")
        target = {"kind": args.target}
        for key in ("beta", "gamma", "a", "m", "norm_sq"):
            if getattr(args, key) is not None:
                target[key] = getattr(args, key)
        if args.atoms is not None:
            target["atoms"] = _split_pairs(args.atoms, "--atoms")
        if args.moments is not None:
            target["moments"] = [x for x in args.moments.split(",") if x.strip()]
        doc = {"target": target}
    for key in ("truncation", "j_max", "mode"):
        if getattr(args, key, None) is not None:
            doc[key] = getattr(args, key)
    return ProblemSpec.from_dict(doc)


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _report_text(doc: ReportDocument, fmt_name: str) -> str:
    if fmt_name == "csv":
        return _csv(("index", "coefficient", "decimal"),
                    [(k, fmt(doc.coefficients[k]), dec(doc.coefficients[k]))
                     for k in doc.active_set])
    return _json(doc.to_dict())


def run_job(job: dict) -> tuple[int, dict]:
    """Execute one batch entry; returns ``(exit_code, payload)``."""
    command = job.get("command", "project")
    try:
        if command == "classify":
            a = parse_rational(job.get("a"), "a")
            return EXIT_OK, {"a": fmt(a), "regime": closedform.classify_indicator(a).value}
        spec = ProblemSpec.from_dict(job)
        if command == "project":
            return EXIT_OK, cmd_project(spec).to_dict()
        if command == "oracle-compare":
            return EXIT_OK, cmd_oracle_compare(spec).to_dict()
        if command == "verify":
            return EXIT_OK, cmd_verify(spec, candidate_from_dict(job.get("candidate"))).to_dict()
        raise ValidationError("command", f"unknown batch command {command!r}")
    except ValidationError as exc:
        return EXIT_VALIDATION, {"error": str(exc), "field": exc.field}
    except CommandFailed as exc:
        payload = exc.payload.to_dict() if exc.payload is not None else {}
        payload["error"] = str(exc)
        return exc.code, payload


def main(argv=None) -> int:
    argv = _normalize_argv(sys.argv[1:] if argv is None else list(argv))
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    started = time.perf_counter()

    def stamp(doc):
        if args.timing:
            doc.timing = round(time.perf_counter() - started, 6)
        return doc

    try:
        if args.command == "project":
            doc = stamp(cmd_project(spec_from_args(args)))
            _emit(_report_text(doc, args.format), args.out)
        elif args.command == "verify":
            spec = spec_from_args(args)
            try:
                with open(args.candidate, encoding="utf-8") as fh:
                    cand = candidate_from_dict(json.load(fh))
            except (OSError, json.JSONDecodeError) as exc:
                raise ValidationError("--candidate", str(exc)) from None
            doc = stamp(cmd_verify(spec, cand))
            _emit(_report_text(doc, args.format), args.out)
        elif args.command == "oracle-compare":
            return _oracle_compare_main(args, stamp)
        elif args.command == "classify":
            a = parse_rational(args.a, "--a")
            try:
                regime = closedform.classify_indicator(a)
            except ValueError as exc:
                raise ValidationError("--a", str(exc)) from None
            if args.format == "csv":
                _emit(_csv(("a", "regime"), [(fmt(a), regime.value)]), args.out)
            else:
                _emit(_json({"a": fmt(a), "regime": regime.value}), args.out)
        elif args.command == "sample":
            spec = spec_from_args(args)
            doc, rows = sample_rows(spec, args.grid, args.interval)
            if args.format == "json":
                _emit(_json({"coefficients": doc.to_dict()["coefficients"],
                             "rows": [[dec(c) for c in r] for r in rows]}), args.out)
            else:
                _emit(_csv(("t", "w", "w_star"), [[dec(c) for c in r] for r in rows]), args.out)
        elif args.command == "nonclosed-demo":
            try:
                n_list = [int(x) for x in args.n_list.split(",") if x.strip()]
            except ValueError:
                raise ValidationError("--n-list", "expected comma separated integers") from None
            if not n_list or min(n_list) < 1:
                raise ValidationError("--n-list", "values must be >= 1")
            rows = nonclosed_rows(n_list)
            if args.format == "json":
                _emit(_json([{"N": n, "norm_estimate": e, "lower_bound": b}
                             for n, e, b in rows]), args.out)
            else:
                _emit(_csv(("N", "norm_estimate", "lower_bound"),
                           [(n, dec(e), dec(b)) for n, e, b in rows]), args.out)
        elif args.command == "batch":
            return _batch_main(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except CommandFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.payload is not None:
            _emit(_report_text(stamp(exc.payload), args.format), args.out)
        return exc.code
    return EXIT_OK


def _oracle_compare_main(args, stamp) -> int:
    docs, code = [], EXIT_OK
    specs = []
    if args.problem or args.target:
        specs.append(spec_from_args(args))
    if args.fuzz:
        n = args.truncation or 6
        specs += [ProblemSpec(t, truncation=n, mode="oracle")
                  for t in fuzz_targets(args.fuzz, n + 1, args.seed)]
    if not specs:
        raise ValidationError("--target", "give a target, a problem file or --fuzz")
    for spec in specs:
        try:
            docs.append(cmd_oracle_compare(spec))
        except CommandFailed as exc:
            docs.append(exc.payload)
            code = exc.code
    if len(docs) == 1:
        _emit(_report_text(stamp(docs[0]), args.format), args.out)
    else:
        _emit(_json([d.to_dict() for d in docs]), args.out)
    if code:
        print("error: active-set and exhaustive results differ", file=sys.stderr)
    return code


def _batch_main(args) -> int:
    try:
        with open(args.batch, encoding="utf-8") as fh:
            jobs = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: invalid batch: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    if not isinstance(jobs, list):
        print("error: invalid batch: expected a JSON list", file=sys.stderr)
        return EXIT_VALIDATION
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(run_job, jobs))
    else:
        results = [run_job(j) for j in jobs]
    _emit(_json([{"exit_code": c, "result": r} for c, r in results]), args.out)
    return max((c for c, _ in results), default=EXIT_OK)
