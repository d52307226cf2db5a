"""The ``fdk`` command-line tool.

Usage: ``fdk <command> <divisor-file | catalog:id> [options]``.  Every
command prints (or writes with --out) a JSON report.  Exit codes: 0 success,
1 a mathematical check failed, 2 usage or parse error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import bernstein, groebner, logfields, reduction, spencer, tautsys
from .catalog import (CatalogEntry, DivisorFile, DivisorFileError, catalog, load_divisor_file, lookup)
from .parsing import PolynomialSyntaxError
from .polyring import as_rational, render_rational
from .weyl import ORDER, TOTAL_ORDER

SCHEMA_VERSION = 1
EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3
COMMANDS = ("check-free", "sk", "bfunction", "resonance", "taut", "spencer", "reduce", "catalog")


class VerificationFailure(Exception):
    """Raised when a report is complete but one of its checks failed."""

    def __init__(self, result: dict, message: str):
        super().__init__(message)
        self.result = result


def _rational(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fdk", description="Linear free divisors, b-functions and tautological systems.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("target", nargs="?", help="divisor JSON file or catalog:<id>")
    p.add_argument("--beta0", type=_rational, help="twist parameter beta0 (default: largest admissible integer)")
    p.add_argument("--hp", type=_rational, help="value h(p) at the base point (default 1)")
    p.add_argument("--c", type=_rational, help="deformation constant c of h - c*w0^d (default h(p))")
    p.add_argument("--d", type=int, help="w0-degree d of the deformation (default n)")
    p.add_argument("--mode", help="sequence mode for sk: " + ", ".join(groebner.MODES) + ", or all")
    p.add_argument("--modular", type=int, nargs="?", const=groebner.DEFAULT_PRIME, metavar="P",
                   help=f"run Groebner bases modulo the prime P (default {groebner.DEFAULT_PRIME})")
    p.add_argument("--budget", type=float, default=None, metavar="SECONDS",
                   help="time budget for each Groebner computation")
    p.add_argument("--verify", action="store_true", help="re-derive catalog constants and run extra checks")
    p.add_argument("--out", help="write the report to FILE instead of stdout")
    return p


def _divisor(target: Optional[str]) -> Tuple[DivisorFile, Optional[CatalogEntry]]:
    if not target:
        raise DivisorFileError("a divisor file or catalog:<id> is required")
    if target.startswith("catalog:"):
        entry = lookup(target)
        return entry.divisor, entry
    return load_divisor_file(target), None


def _analysis(div: DivisorFile) -> logfields.DivisorAnalysis:
    h = div.polynomial()
    fields = div.linear_fields()
    if fields is not None:
        return logfields.saito_criterion(h, fields)
    return logfields.analyze(h)


def _matrix_json(m) -> List[List[str]]:
    return [[render_rational(x) for x in row] for row in m]


def _bfunction(analysis) -> bernstein.BernsteinPolynomial:
    return bernstein.bernstein_selfdual(analysis.h)


def _default_beta0(analysis, b=None) -> Fraction:
    b = b or _bfunction(analysis)
    res = bernstein.resonance_constant(bernstein.convert_normalization(b), analysis.n)
    return Fraction(res.largest_admissible_integer() if res.c is not None else -analysis.n - 1)


# -- commands ---------------------------------------------------------------------------

def cmd_check_free(div, entry, args) -> dict:
    a = _analysis(div)
    consts = logfields.bracket_in_basis(a)
    ok = a.special or not div.reductive_declared
    result = {
        "n": a.n,
        "h": a.h.render(),
        "saito_matrix": [[a.saito_matrix[i, j].render() for j in range(a.n)] for i in range(a.n)],
        "saito_constant": render_rational(a.saito_constant),
        "gD": [{"field": f.render(a.names), "scalar": render_rational(c)} for f, c in a.gD_basis],
        "aD_matrices": [_matrix_json(f.matrix) for f in a.aD_basis],
        "special": a.special,
        "jacobi": consts.jacobi_holds(),
        "abelian": consts.is_abelian(),
        "reductive_declared": div.reductive_declared,
    }
    if a.special:
        try:
            dual = logfields.dualize(a)
            result["dual"] = {"h": dual.h_dual.render(), "fields": [f.render(dual.names) for f in dual.dual_fields]}
        except logfields.DualizationError as exc:
            result["dual"] = {"error": str(exc)}
            ok = False
    if not ok:
        raise VerificationFailure(result, "declared reductive but a_D is not trace-free or not self-dual")
    return result


def _modes(args) -> List[str]:
    if args.mode in (None, "both"):
        return [groebner.SK_ORDER, groebner.SK_TOTAL]
    if args.mode == "all":
        return list(groebner.MODES)
    if args.mode not in groebner.MODES:
        raise DivisorFileError(f"unknown mode {args.mode!r}")
    return [args.mode]


def cmd_sk(div, entry, args) -> dict:
    a = _analysis(div)
    certs = []
    for mode in _modes(args):
        if mode in (groebner.SK_ORDER, groebner.SK_TOTAL):
            cert = groebner.sk_check(a, mode, args.modular, time_budget=args.budget)
        else:
            c = args.c if args.c is not None else (args.hp or Fraction(1))
            cert = groebner.homogenized_symbol_check(a, c, args.d or a.n, mode, args.modular,
                                                     time_budget=args.budget)
        certs.append(cert.as_json())
    verdicts = {c["verdict"] for c in certs}
    result = {"certificates": certs, "agree": len(verdicts) == 1, "verdict": verdicts == {True}}
    if not result["verdict"]:
        raise VerificationFailure(result, "sequence is not regular")
    return result


def cmd_bfunction(div, entry, args) -> dict:
    a = _analysis(div)
    b = _bfunction(a)
    bc = bernstein.convert_normalization(b)
    ks = list(range(1, a.n + 3))
    fe = bernstein.functional_equation_holds(a.h, b, ks)
    sym = bernstein.symmetry_sign(bc)
    result = {
        "reduction": b.as_json(),
        "classical": bc.as_json(),
        "symmetry": {"holds": sym is not None, "sign": sym},
        "functional_equation_checked_for_k": ks,
        "functional_equation": fe,
    }
    if entry is not None and args.verify:
        expected = entry.constants.get("classical_roots")
        got = [str(r) for r in bc.rational_roots]
        result["catalog_roots_reproduced"] = sorted(expected) == sorted(got) if expected else None
        if expected and not result["catalog_roots_reproduced"]:
            raise VerificationFailure(result, "catalog roots were not reproduced")
    if not fe or sym is None:
        raise VerificationFailure(result, "functional equation or symmetry check failed")
    return result


def cmd_resonance(div, entry, args) -> dict:
    a = _analysis(div)
    b = bernstein.convert_normalization(_bfunction(a))
    res = bernstein.resonance_constant(b, a.n)
    result = res.as_json()
    centre = res.c if res.c is not None else -a.n
    table = []
    for beta0 in range(centre - 4, centre + 3):
        table.append({"beta0": beta0, "admissible": res.is_admissible(beta0)})
    result["admissibility"] = table
    if args.beta0 is not None:
        result["beta0"] = str(args.beta0)
        result["beta0_admissible"] = res.is_admissible(args.beta0)
    if entry is not None and args.verify:
        ok = res.c == entry.constants.get("c")
        result["catalog_c_reproduced"] = ok
        if not ok:
            raise VerificationFailure(result, "catalog constant c was not reproduced")
    return result


def cmd_taut(div, entry, args) -> dict:
    a = _analysis(div)
    hp = args.hp if args.hp is not None else (div.hp or Fraction(1))
    b = _bfunction(a)
    beta0 = args.beta0 if args.beta0 is not None else _default_beta0(a, b)
    c = args.c if args.c is not None else hp
    d = args.d or a.n
    hat = tautsys.hat_presentation(a, hp, beta0)
    fl = tautsys.fl_presentation(hat, a)
    Is = tautsys.homogenized_ideal_Is(a, c, d)
    res = bernstein.resonance_constant(bernstein.convert_normalization(b), a.n)
    sk = groebner.sk_check(a, groebner.SK_ORDER, args.modular, time_budget=args.budget)
    annih = tautsys.annihilates_dual(fl, a)
    result = {
        "I(s)": Is.as_json(),
        "I(beta)": tautsys.specialize_s(Is, Fraction(beta0, a.n)).as_json(),
        "hat": hat.as_json(),
        "taut": fl.as_json(),
        "dual_fields_annihilate_h": annih,
        "certificates": {"sk": sk.as_json(), "beta0_admissible": res.is_admissible(beta0), "c": res.c},
    }
    if not annih or not sk.verdict:
        raise VerificationFailure(result, "dual fields or (SK) check failed")
    return result


def cmd_spencer(div, entry, args) -> dict:
    a = _analysis(div)
    c = args.c if args.c is not None else (args.hp or Fraction(1))
    d = args.d or a.n
    gens, _ = tautsys.homogenized_generators(a, c, d)
    pres = spencer.infer_brackets(gens, split_first=True)
    report = spencer.validate_presentation(pres, strict=False)
    if not report.valid:
        raise VerificationFailure({"validation": list(report.messages)}, "invalid presentation")
    cx = spencer.build_spencer(pres, validate=False)
    d2 = spencer.check_d_squared(cx)
    graded = [spencer.graded_koszul_matrix(pres, kind, complex_=cx).as_json() for kind in (TOTAL_ORDER, ORDER)]
    result = {
        "generators": [g.render() for g in gens],
        "brackets": {f"{i + 1},{j + 1}": [x.render() for x in v] for (i, j), v in sorted(pres.brackets.items())},
        "complex": cx.summary(),
        "d_squared_zero": d2,
        "graded_koszul": graded,
    }
    if not d2 or not all(g["equal"] for g in graded):
        raise VerificationFailure(result, "d^2 != 0 or graded differentials differ from Koszul")
    return result


def cmd_reduce(div, entry, args) -> dict:
    a = _analysis(div)
    hp = args.hp if args.hp is not None else (div.hp or Fraction(1))
    b = _bfunction(a)
    beta0 = args.beta0 if args.beta0 is not None else _default_beta0(a, b)
    r = reduction.reduced_presentation(a, hp, beta0, b)
    z = reduction.localized_fl_presentation(r)
    g = reduction.gauge_normalize(z)
    qde = reduction.quantum_de_specialize(g)
    exp_b, exp_e = reduction.expected_zt_generators(a.n, hp, b.poly)
    matches = g.bgen == exp_b and g.euler == exp_e
    holds, sign = reduction.transpose_identity(b)
    result = {
        "b_reduction": b.factored(),
        "l0_t": r.as_json(),
        "z_t": z.as_json(),
        "gauged": g.as_json(),
        "matches_closed_form": matches,
        "transpose_identity": {"holds": holds, "sign": sign},
        "quantum_de": qde.render(),
    }
    if not matches or not holds:
        raise VerificationFailure(result, "reduced system differs from its closed form")
    return result


def cmd_catalog(div, entry, args) -> dict:
    if entry is None and args.target is None:
        return {"entries": [{"id": e.id, "description": e.description} for e in catalog().values()]}
    if entry is None:
        raise DivisorFileError("catalog expects catalog:<id>")
    result = entry.as_json()
    if args.verify:
        a = _analysis(entry.divisor)
        b = _bfunction(a)
        bc = bernstein.convert_normalization(b)
        res = bernstein.resonance_constant(bc, a.n)
        checks = {
            "classical_roots": sorted(str(r) for r in bc.rational_roots) == sorted(entry.constants["classical_roots"]),
            "c": res.c == entry.constants["c"],
            "largest_admissible_beta0": res.largest_admissible_integer() == entry.constants["largest_admissible_beta0"],
        }
        result["verified"] = checks
        if not all(checks.values()):
            raise VerificationFailure(result, "catalog constants were not reproduced")
    return result


HANDLERS: Dict[str, Callable] = {
    "check-free": cmd_check_free,
    "sk": cmd_sk,
    "bfunction": cmd_bfunction,
    "resonance": cmd_resonance,
    "taut": cmd_taut,
    "spencer": cmd_spencer,
    "reduce": cmd_reduce,
    "catalog": cmd_catalog,
}


def _write(report: dict, out: Optional[str]):
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".fdk-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(argv: Sequence[str]) -> Tuple[int, dict, argparse.Namespace]:
    """Run one command; returns (exit code, report, parsed arguments)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.monotonic()
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "inputs": {
            "target": args.target,
            "beta0": None if args.beta0 is None else str(args.beta0),
            "hp": None if args.hp is None else str(args.hp),
            "c": None if args.c is None else str(args.c),
            "d": args.d,
            "mode": args.mode,
        },
        "arithmetic": "exact" if args.modular is None else f"modular {args.modular}",
    }
    code = EXIT_OK
    try:
        if args.command == "catalog" and args.target is None:
            div, entry = None, None
        else:
            div, entry = _divisor(args.target)
        report["result"] = HANDLERS[args.command](div, entry, args)
        report["status"] = "ok"
    except VerificationFailure as exc:
        report["result"] = exc.result
        report["status"] = "verification-failed"
        report["error"] = str(exc)
        code = EXIT_VERIFY
    except (logfields.NotFreeError, logfields.DualizationError, bernstein.NotSelfDualEquation,
            tautsys.PresentationMismatch, reduction.RestrictionError, spencer.InvalidPresentation,
            logfields.BracketClosureError) as exc:
        report["status"] = "verification-failed"
        report["error"] = f"{args.command}: {exc}"
        code = EXIT_VERIFY
    except groebner.GroebnerBudgetExceeded as exc:
        report["status"] = "resource-limit"
        report["error"] = f"{args.command}: {exc}"
        code = EXIT_LIMIT
    except (DivisorFileError, PolynomialSyntaxError, KeyError, OSError, groebner.InhomogeneousInput) as exc:
        report["status"] = "usage-error"
        report["error"] = f"{args.command}: {exc}"
        code = EXIT_USAGE
    report["timing_seconds"] = round(time.monotonic() - t0, 3)
    return code, report, args


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        code, report, args = run(argv)
    except SystemExit as exc:  # argparse usage errors
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    except KeyboardInterrupt:
        sys.stderr.write("fdk: interrupted; no report written\n")
        return 130
    _write(report, args.out)
    if code != EXIT_OK:
        sys.stderr.write(f"fdk: {report.get('error', report.get('status'))}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
