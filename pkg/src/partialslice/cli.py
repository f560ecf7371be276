"""Command-line front end.

Every subcommand prints a JSON run report on stdout (or a table with
``--human``) and writes its payload to ``--out`` when given.  Exit codes:
0 when every check passes, 1 when a mathematical check fails, 2 on usage or
input errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field

from . import __version__
from .almansi import (
    almansi_ab,
    classical_almansi,
    polymonogenic_almansi,
    starlike_almansi,
)
from .clifford import Multivector, Q, Signature
from .diffops import dirac, hyperbolic_check, laplacian
from .errors import ParityError, PreconditionError
from .mvpoly import MVPolynomial
from .regular import (
    enhanced_fueter_sce_check,
    fueter_sce,
    gcr_residual,
    gsr_basis,
    spherical_theorem_check,
    vekua_conclusion_check,
    vekua_jet_basis,
    vekua_residual,
)
from .slices import StemPair, induce, representation_formula_check, sphere_pairs

CHECKS = ("gcr", "spherical", "fueter", "enhanced", "hyperbolic", "repformula", "relation")


class UsageError(Exception):
    pass


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest(obj) -> str:
    return hashlib.sha256(canonical(obj).encode()).hexdigest()


def term_str(P: MVPolynomial):
    """First nonzero term of ``P`` as text, or None."""
    lt = P.leading_term()
    if lt is None:
        return None
    e, c = lt
    return repr(MVPolynomial(P.vars, {e: c}))


@dataclass
class Verdict:
    name: str
    passed: bool | None
    residual: str | None = None

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "residual": self.residual}


@dataclass
class RunReport:
    command: list
    sig: dict | None
    inputs_digest: str
    verdicts: list = field(default_factory=list)
    payload_digest: str | None = None
    payload: object = None
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(v.passed is not False for v in self.verdicts)

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "sig": self.sig,
            "inputs_digest": self.inputs_digest,
            "verdicts": [v.to_json() for v in self.verdicts],
            "passed": self.passed,
            "payload_digest": self.payload_digest,
            **({"payload": self.payload} if self.payload is not None else {}),
            "timing": {"seconds": round(self.seconds, 6)},
        }

    def human(self) -> str:
        lines = [" ".join(self.command)]
        if self.sig:
            lines.append(f"(p, q) = ({self.sig['p']}, {self.sig['q']})")
        width = max((len(v.name) for v in self.verdicts), default=4)
        for v in self.verdicts:
            mark = {True: "PASS", False: "FAIL", None: "n/a"}[v.passed]
            tail = f"  {v.residual}" if v.residual else ""
            lines.append(f"  {v.name:<{width}}  {mark}{tail}")
        lines.append("overall: " + ("PASS" if self.passed else "FAIL"))
        lines.append(f"time: {self.seconds:.3f}s")
        return "\n".join(lines)


# -- input helpers ------------------------------------------------------------------

def load_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}") from None


def parse_stem(data) -> StemPair:
    try:
        return StemPair.from_json(data)
    except (ValueError, TypeError, KeyError) as exc:
        raise UsageError(f"not a stem pair / slice function: {exc}") from None


def parse_poly(data) -> MVPolynomial:
    try:
        return MVPolynomial.from_json(data)
    except (ValueError, TypeError, KeyError) as exc:
        raise UsageError(f"not a polynomial: {exc}") from None


def parse_rational(text):
    try:
        return Q(text)
    except (ValueError, TypeError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


def emit_payload(report: RunReport, payload, out: str | None) -> None:
    """Write ``payload`` deterministically to ``out``, or inline it in the report."""
    text = json.dumps(payload, indent=1) + "\n"
    report.payload_digest = hashlib.sha256(text.encode()).hexdigest()
    if not out:
        report.payload = payload
    else:
        try:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {out}: {exc.strerror}") from None


def sig_json(sig: Signature) -> dict:
    return {"p": sig.p, "q": sig.q}


def make_sig(p, q) -> Signature:
    if p is None or q is None:
        raise UsageError("-p and -q are required")
    try:
        return Signature(p, q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# -- verify -------------------------------------------------------------------------------

_SAMPLE_XP = (Q("1/2"), Q("-1/3"), Q("2/5"), Q("3/7"), Q("-1/4"), Q("5/6"), Q("1"), Q("-2"))


def _run_check(name: str, stem: StemPair) -> Verdict:
    sig = stem.sig
    if name == "gcr":
        res = gcr_residual(stem)
        first = res.first_nonzero()
        return Verdict(name, first is None, None if first is None else f"{first[0]}: {term_str(res.R1 if first[0] == 'R1' else res.R2)}")
    try:
        f = induce(stem)
    except ParityError as exc:
        return Verdict(name, False, str(exc))
    if name == "relation":
        R = dirac(f.ambient, sig) - f.spherical_derivative.scale(1 - sig.q)
        return Verdict(name, R.is_zero(), term_str(R))
    if name == "spherical":
        rep = spherical_theorem_check(f)
        failed = [k for k, v in rep.parts.items() if v is False]
        return Verdict(name, rep.passed, ("parts " + ",".join(failed)) if failed else None)
    if name in ("fueter", "enhanced"):
        if sig.q % 2 == 0:
            return Verdict(name, None, "needs odd q")
        m = (sig.q - 1) // 2
        if name == "fueter":
            R = dirac(fueter_sce(f, check=False), sig)
            return Verdict(name, R.is_zero(), term_str(R))
        ok = enhanced_fueter_sce_check(f)
        R = laplacian(f.ambient, sig, m + 1)
        return Verdict(name, all(ok.values()), term_str(R) or (None if ok["monogenic"] else "not monogenic"))
    if name == "hyperbolic":
        a, b = hyperbolic_check(f)
        return Verdict(name, a and b, None if a and b else f"F1: {a}, omega F2: {b}")
    if name == "repformula":
        xp = list(_SAMPLE_XP[: sig.p if f.omit_x0 else sig.p + 1])
        for i, (w, h) in enumerate(sphere_pairs(sig.q, 3)):
            if not representation_formula_check(f, xp, Q("3/2"), w, h):
                return Verdict(name, False, f"pair {i}")
        return Verdict(name, True)
    raise AssertionError(name)


def cmd_verify(args, report: RunReport):
    data = load_json(args.input)
    stem = parse_stem(data)
    report.inputs_digest = digest(data)
    report.sig = sig_json(stem.sig)
    names = CHECKS if args.checks in (None, "all") else [c.strip() for c in args.checks.split(",") if c.strip()]
    unknown = [c for c in names if c not in CHECKS]
    if unknown or not names:
        raise UsageError(f"unknown checks {unknown}; choose from {', '.join(CHECKS)}")
    report.verdicts = [_run_check(n, stem) for n in names]


# -- basis / vekua ------------------------------------------------------------------------------

def cmd_basis(args, report: RunReport):
    sig = make_sig(args.p, args.q)
    if args.degree is None or args.degree < 0:
        raise UsageError("-d/--degree must be a nonnegative integer")
    inputs = {"p": sig.p, "q": sig.q, "degree": args.degree, "omit_x0": args.omit_x0}
    report.inputs_digest = digest(inputs)
    report.sig = sig_json(sig)
    basis = gsr_basis(sig, args.degree, args.omit_x0)
    payload = dict(inputs, dimension=len(basis), elements=[f.to_json() for f in basis])
    emit_payload(report, payload, args.out)
    report.verdicts.append(Verdict("gcr", all(gcr_residual(f.stem).is_zero() for f in basis)))


def cmd_vekua(args, report: RunReport):
    sig = make_sig(args.p, args.q)
    if args.order is None:
        raise UsageError("--order is required")
    if sig.q % 2 == 0:
        raise UsageError("the conclusion check needs odd q")
    if args.order <= sig.q:
        raise UsageError(f"truncation too short: --order must exceed q = {sig.q}")
    lam = parse_rational(args.lam)
    inputs = {"p": sig.p, "q": sig.q, "lambda": str(lam), "order": args.order}
    report.inputs_digest = digest(inputs)
    report.sig = sig_json(sig)
    jet = vekua_jet_basis(sig.p, sig.q, lam, args.order)
    emit_payload(report, jet.to_json(), args.out)
    for i, e in enumerate(jet.elements):
        sys_ok = all(R.truncate(jet.valid_degree).is_zero() for R in vekua_residual(e, lam))
        report.verdicts.append(Verdict(f"jet[{i}]", sys_ok and vekua_conclusion_check(e, lam, args.order)))


# -- almansi ----------------------------------------------------------------------------------------

def cmd_almansi(args, report: RunReport):
    data = load_json(args.input)
    report.inputs_digest = digest({"input": data, "mode": args.mode, "N": args.N})
    mode = args.mode
    if mode in ("classical", "polymonogenic"):
        if args.N is None or args.N < 1:
            raise UsageError(f"mode {mode} needs a positive N")
        u = parse_poly(data)
        fn = classical_almansi if mode == "classical" else polymonogenic_almansi
        try:
            dec = fn(u, args.N)
        except PreconditionError as exc:
            if mode == "classical":
                R = _plain_laplacian(u, args.N)
            else:
                sig = Signature(0, len(u.vars))
                R = dirac(u, sig, "dirac_underline", power=args.N)
            report.verdicts.append(Verdict("precondition", False, f"{exc}; {term_str(R)}"))
            return
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        payload = {
            "mode": mode,
            "N": args.N,
            "components": [c.to_json() for c in dec],
            "ranks": {str(d): list(rk) for d, rk in dec.ranks.items()},
        }
        emit_payload(report, payload, args.out)
        report.verdicts.append(Verdict("unique", dec.unique))
        return

    stem = parse_stem(data)
    report.sig = sig_json(stem.sig)
    try:
        f = induce(stem)
        dec = almansi_ab(f) if mode == "ab" else starlike_almansi(f)
    except (PreconditionError, ParityError, ValueError) as exc:
        report.verdicts.append(Verdict("precondition", False, str(exc)))
        return
    if mode == "ab":
        payload = {"mode": "ab", "m": dec.m, "A": dec.A.to_json(), "B": dec.B.to_json(), "certificates": dec.certificates}
    else:
        payload = {
            "mode": "starlike",
            "g": [g.to_json() for g in dec.g],
            "u": [u.to_json() for u in dec.u],
            "v": [v.to_json() for v in dec.v],
            "certificates": dec.certificates,
            "ranks": {k: {str(d): list(rk) for d, rk in r.items()} for k, r in dec.ranks.items()},
        }
    emit_payload(report, payload, args.out)
    report.verdicts.extend(Verdict(k, v) for k, v in dec.certificates.items())


def _plain_laplacian(u: MVPolynomial, N: int) -> MVPolynomial:
    for _ in range(N):
        nxt = MVPolynomial.zero(u.vars)
        for v in u.vars:
            nxt = nxt + u.diff(v, 2)
        u = nxt
    return u


# -- product / eval ----------------------------------------------------------------------------------------

def parse_multivector(text: str) -> Multivector:
    """JSON ``{"0x3": "1/2"}``, a JSON file path, or a bare rational scalar."""
    text = text.strip()
    try:
        if text.startswith("{"):
            return Multivector.from_json(json.loads(text))
        if text.startswith("@"):
            return Multivector.from_json(load_json(text[1:]))
        return Multivector.scalar(Q(text))
    except (ValueError, TypeError, ZeroDivisionError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot parse multivector {text!r}: {exc}") from None


def cmd_product(args, report: RunReport):
    factors = [parse_multivector(t) for t in args.factors]
    report.inputs_digest = digest([f.to_json() for f in factors])
    if args.p is not None or args.q is not None:
        sig = make_sig(args.p, args.q)
        report.sig = sig_json(sig)
        for f in factors:
            try:
                sig.check(f)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
    out = Multivector.scalar(1)
    for f in factors:
        out = out * f
    emit_payload(report, {"product": out.to_json(), "text": repr(out)}, args.out)
    report.verdicts.append(Verdict("product", True, repr(out)))


def cmd_eval(args, report: RunReport):
    data = load_json(args.input)
    point = [parse_rational(c) for c in args.point]
    report.inputs_digest = digest({"input": data, "point": [str(c) for c in point]})
    if isinstance(data, dict) and "F1" in data:
        try:
            f = induce(parse_stem(data))
        except ParityError as exc:
            raise UsageError(str(exc)) from None
        report.sig = sig_json(f.sig)
        P = f.ambient
    else:
        P = parse_poly(data)
    try:
        val = P.evaluate(point)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    emit_payload(report, {"value": val.to_json(), "text": repr(val)}, args.out)
    report.verdicts.append(Verdict("eval", True, repr(val)))


# -- parser --------------------------------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--human", action="store_true", help="print a table instead of JSON")
    common.add_argument("--out", help="payload file")

    ap = _Parser(prog="partialslice", description="Exact computations with generalized partial-slice functions.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("basis", parents=[common], help="GSR polynomial basis up to a degree")
    b.add_argument("-p", type=int)
    b.add_argument("-q", type=int)
    b.add_argument("-d", "--degree", type=int)
    b.add_argument("--omit-x0", action="store_true")
    b.set_defaults(run=cmd_basis)

    v = sub.add_parser("verify", parents=[common], help="run identity checks on a stem pair")
    v.add_argument("input", help="stem pair / slice function JSON ('-' for stdin)")
    v.add_argument("--checks", help=f"comma list from {','.join(CHECKS)} (default all)")
    v.set_defaults(run=cmd_verify)

    a = sub.add_parser("almansi", parents=[common], help="Almansi-type decompositions")
    a.add_argument("input")
    a.add_argument("mode", choices=("ab", "starlike", "classical", "polymonogenic"))
    a.add_argument("N", nargs="?", type=int)
    a.set_defaults(run=cmd_almansi)

    k = sub.add_parser("vekua", parents=[common], help="Vekua-type jet basis and conclusion check")
    k.add_argument("-p", type=int)
    k.add_argument("-q", type=int)
    k.add_argument("--lambda", dest="lam", default="0")
    k.add_argument("--order", type=int)
    k.set_defaults(run=cmd_vekua)

    pr = sub.add_parser("product", parents=[common], help="geometric product of multivectors")
    pr.add_argument("factors", nargs="+", help='JSON like \'{"0x1": "2"}\', @file, or a rational')
    pr.add_argument("-p", type=int)
    pr.add_argument("-q", type=int)
    pr.set_defaults(run=cmd_product)

    e = sub.add_parser("eval", parents=[common], help="evaluate a function at a rational point")
    e.add_argument("input")
    e.add_argument("point", nargs="*")
    e.set_defaults(run=cmd_eval)
    return ap


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = RunReport(["partialslice", *argv], None, "")
    start = time.perf_counter()
    try:
        args.run(args, report)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report.seconds = time.perf_counter() - start
    print(report.human() if args.human else json.dumps(report.to_json(), indent=1))
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
