"""
Command-line entry point for the QBNF engine.

Symbolic results are exact rationals written as "p/q" strings; floats only
appear in spectral and density-of-states reports.
"""
import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import sympy
from loguru import logger

from src.algebra.weyl import WeylPoly, bracket_j
from src.config import RunConfig
from src.config.config import DEFAULT_MAX_DEGREE
from src.dos.probes import HeavisideJumpProbe, LogSingularityProbe
from src.errors import EngineInconsistency, ParseError, QbnfError, VerificationFailed
from src.inversion.inversion import (delta_pathway_coefficient, expected_delta_pathway, fit_stage,
                                     invert_with_provenance)
from src.normal_form.birkhoff import birkhoff_forward, forward_jet
from src.normal_form.examples import X, gauge_hamiltonian, zoll_jet
from src.normal_form.functional import weyl_to_functional
from src.normal_form.homological import sigma_poly
from src.normal_form.models import NormalFormSeries, PotentialJet, parse_sign
from src.spectra.prediction import hbar2_coefficient, perturbation_oracle, predict_eigenvalues
from src.spectra.study import convergence_study
from src.utils.logger import setup_logger

DOS_DEFAULTS = {
    "dos-max": {"potential": "-x**2/2 + x**4/4", "window": (-0.15, 0.5)},
    "dos-min": {"potential": "x**2/2", "window": (-0.3, 0.4)},
}


def build_parser() -> argparse.ArgumentParser:
    """Create the argument parser with one sub-parser per subcommand."""
    parser = argparse.ArgumentParser(prog="qbnf", description="Quantum Birkhoff normal forms in one dimension")
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, with_input: bool = True):
        if with_input:
            p.add_argument("--input", help="JSON input file (stdin when neither --input nor --json is given)")
            p.add_argument("--json", dest="inline_json", help="Inline JSON input")
        p.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE,
                       help="Truncation in the graded degree (env QBNF_MAX_DEGREE)")
        p.add_argument("--output", help="Write the result here instead of stdout")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("forward", help="Normal form of a potential jet or a raw symbol")
    common(p)
    p.add_argument("--hamiltonian", action="store_true", help="Input is a symbol {sign, terms}, not a jet")
    p.add_argument("--emit-generator", action="store_true", help="Include the generator S")

    p = sub.add_parser("invert", help="Recover the jet from a normal form")
    common(p)
    p.add_argument("--sign", default="+", help="Sign of a_3")

    p = sub.add_parser("predict", help="Eigenvalue predictions from the normal form of a jet")
    common(p)
    p.add_argument("--hbar-list", type=float, nargs="+", required=True)
    p.add_argument("--levels", type=int, default=4)

    p = sub.add_parser("verify", help="Convergence study against the eigensolver")
    common(p)
    p.add_argument("--hbar-list", type=float, nargs="+", default=[0.08, 0.04, 0.02, 0.01])
    p.add_argument("--levels", type=int, default=4)
    p.add_argument("--degree", type=int, default=4, help="Truncation degree of the predictions")
    p.add_argument("--half-width", type=float, default=None)
    p.add_argument("--table", action="store_true", help="Print the aligned text table instead of JSON")

    for name, help_text in (("dos-max", "Log singularity of the level density at a local maximum"),
                            ("dos-min", "Step of the level density at a local minimum")):
        p = sub.add_parser(name, help=help_text)
        common(p, with_input=False)
        p.add_argument("--potential", default=DOS_DEFAULTS[name]["potential"], help="V(x) as a sympy expression")
        p.add_argument("--critical-x", type=float, default=0.0)
        p.add_argument("--window", type=float, nargs=2, default=DOS_DEFAULTS[name]["window"])
        p.add_argument("--hbar-list", type=float, nargs="+", default=[0.005])
        p.add_argument("--half-width", type=float, default=None)
        p.add_argument("--data-dir", help="Directory for the (E, density) data files")

    p = sub.add_parser("roundtrip", help="Forward then invert a jet")
    common(p)

    p = sub.add_parser("selftest", help="Exact consistency checks on seeded random inputs")
    common(p, with_input=False)
    p.add_argument("--samples", type=int, default=5)
    return parser


def read_input(args: argparse.Namespace) -> Dict[str, Any]:
    """Load the JSON document named by --input/--json (or stdin).

    Raises:
        ParseError: With line and column for malformed JSON
    """
    if args.inline_json is not None:
        text, source = args.inline_json, "--json"
    elif args.input:
        try:
            text, source = Path(args.input).read_text(encoding="utf-8"), args.input
        except OSError as e:
            raise ParseError(f"cannot read {args.input}: {e}") from e
    else:
        text, source = sys.stdin.read(), "<stdin>"
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{source}: line {e.lineno}, column {e.colno}: {e.msg}") from e


def write_output(args: argparse.Namespace, payload: Any):
    """Serialize deterministically to --output or stdout."""
    text = payload if isinstance(payload, str) else json.dumps(payload, sort_keys=True, indent=2,
                                                                ensure_ascii=False) + "\n"
    if args.output:
        Path(args.output).parent.mkdir(parents=True, exist_ok=True)
        Path(args.output).write_text(text, encoding="utf-8")
        logger.info(f"Wrote {args.output}")
    else:
        sys.stdout.write(text)


def parse_hamiltonian(data: Dict[str, Any]):
    """{"sign": "+", "terms": [{l, m, n, coeff}]} -> (WeylPoly, sign)."""
    if not isinstance(data, dict) or not isinstance(data.get("terms"), list):
        raise ParseError("hamiltonian must be an object with a 'terms' list")
    try:
        return WeylPoly.from_records(data["terms"]), parse_sign(data.get("sign", "+"))
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"malformed hamiltonian term: {e}") from e


def cmd_forward(args: argparse.Namespace, run: RunConfig) -> Dict[str, Any]:
    data = read_input(args)
    if args.hamiltonian:
        H, sign = parse_hamiltonian(data)
        nf, generator = birkhoff_forward(H, sign, run.max_degree)
    else:
        nf, generator = forward_jet(PotentialJet.from_dict(data), run.max_degree)
    result = nf.to_dict()
    if args.emit_generator:
        result["generator"] = generator.to_dict()["S"]
    return result


def cmd_invert(args: argparse.Namespace, run: RunConfig) -> Dict[str, Any]:
    nf = NormalFormSeries.from_dict(read_input(args))
    return invert_with_provenance(nf, parse_sign(args.sign)).to_dict()


def cmd_predict(args: argparse.Namespace, run: RunConfig) -> Dict[str, Any]:
    jet = PotentialJet.from_dict(read_input(args))
    nf, _ = forward_jet(jet, run.max_degree)
    fnf = weyl_to_functional(nf)
    return {
        "functional": fnf.to_dict(),
        "predictions": [{"hbar": h, "eigenvalues": predict_eigenvalues(fnf, float(jet.e0), h, args.levels - 1)}
                        for h in run.hbar_list],
    }


def cmd_verify(args: argparse.Namespace, run: RunConfig):
    jet = PotentialJet.from_dict(read_input(args))
    overrides = {"half_width": args.half_width} if args.half_width else {}
    report = convergence_study(jet, run.hbar_list, run.prediction_degree, levels=args.levels, **overrides)
    write_output(args, report.to_table() if args.table else report.to_dict())
    if not report.passed:
        failed = [f.level for f in report.fits if not f.passed]
        raise VerificationFailed(f"convergence slopes below the expected order for levels {failed}")
    return None


def _potential(expression: str):
    try:
        expr = sympy.sympify(expression, locals={"x": X})
    except (sympy.SympifyError, SyntaxError) as e:
        raise ParseError(f"cannot parse potential {expression!r}: {e}") from e
    return expr, sympy.lambdify(X, expr, "numpy")


def cmd_dos(args: argparse.Namespace, run: RunConfig):
    expr, V = _potential(args.potential)
    xc = sympy.nsimplify(args.critical_x)
    e0 = float(expr.subs(X, xc))
    curvature = float(sympy.diff(expr, X, 2).subs(X, xc))
    if abs(float(sympy.diff(expr, X).subs(X, xc))) > 1e-12:
        raise ParseError(f"x = {args.critical_x} is not a critical point of {expr}")
    kwargs = {"half_width": args.half_width, "output_dir": args.data_dir}
    if args.command == "dos-max":
        if curvature >= 0:
            raise ParseError(f"V''({args.critical_x}) = {curvature} is not a maximum")
        probe = LogSingularityProbe(V, e0, curvature, tuple(args.window), **kwargs)
    else:
        if curvature <= 0:
            raise ParseError(f"V''({args.critical_x}) = {curvature} is not a minimum")
        probe = HeavisideJumpProbe(V, e0, tuple(args.window), curvature, **kwargs)
    return {"potential": str(expr), "critical_energy": e0, "curvature": curvature,
            "fits": probe.run(run.hbar_list, save=bool(args.data_dir))}


def cmd_roundtrip(args: argparse.Namespace, run: RunConfig) -> Dict[str, Any]:
    jet = PotentialJet.from_dict(read_input(args)).truncated(2 * (run.max_degree // 2))
    nf, _ = forward_jet(jet, run.max_degree)
    sign = -1 if jet.coefficient(3) < 0 else 1
    recovered = invert_with_provenance(nf, sign)
    match = jets_match(jet, recovered.jet, recovered.jet.order)
    if recovered.exact and not match:
        raise EngineInconsistency(f"roundtrip mismatch: {recovered.jet.to_dict()} != {jet.to_dict()}")
    return {"jet": jet.to_dict(), "normal_form": nf.to_dict(), "recovered": recovered.to_dict(),
            "match": match}


def jets_match(first: PotentialJet, second: PotentialJet, order: int) -> bool:
    """Same sign, base energy and coefficients a_3..a_order."""
    return (first.sign == second.sign and first.e0 == second.e0
            and all(first.coefficient(n) == second.coefficient(n) for n in range(3, order + 1)))


def _random_rational(rng: random.Random, bound: int = 5) -> Fraction:
    return Fraction(rng.randint(-bound * 4, bound * 4), rng.randint(1, 4))


def cmd_selftest(args: argparse.Namespace, run: RunConfig) -> Dict[str, Any]:
    """Exact checks of the engine's structural identities on seeded random data."""
    rng = random.Random(run.seed)
    checks: List[Dict[str, Any]] = []

    def record(name: str, ok: bool, detail: str = ""):
        checks.append({"check": name, "ok": bool(ok), "detail": detail})
        (logger.info if ok else logger.error)(f"selftest {name}: {'ok' if ok else 'FAILED'} {detail}")

    for _ in range(args.samples):
        a, b = _random_rational(rng), _random_rational(rng)
        nf, _ = forward_jet(PotentialJet(coeffs=(a, b)), 4)
        record("first_terms", nf.get(0, 2) == Fraction(-15, 4) * a * a + Fraction(3, 2) * b, f"a={a}, b={b}")
        fnf = weyl_to_functional(nf)
        record("oracle", all(hbar2_coefficient(fnf, n) == perturbation_oracle(a, b, n) for n in range(6)),
               f"a={a}, b={b}")

    gauge, _ = birkhoff_forward(gauge_hamiltonian(), 1, run.max_degree)
    record("gauge", not gauge.coeffs, str(gauge.to_dict()["b"]))
    zoll, _ = forward_jet(zoll_jet(run.max_degree), run.max_degree)
    record("zoll", not zoll.classical_part() and zoll.get(1, 0) != 0, str(zoll.to_dict()["b"]))

    omega = WeylPoly.omega(1)
    for N in range(1, 9):
        sigma = sigma_poly(N, 1)
        record("sigma", bracket_j(omega, sigma, 1) == WeylPoly.monomial(2 * N - 1, 0), f"N={N}")
    for N in range(2, 7):
        record("delta_pathway", delta_pathway_coefficient(N) == expected_delta_pathway(N), f"N={N}")

    a3 = _random_rational(rng) or Fraction(1)
    prefix = PotentialJet(coeffs=(a3,) + tuple(_random_rational(rng) for _ in range(run.max_degree - 3)))
    for N in range(2, run.max_degree // 2 + 1):
        model = fit_stage(prefix, N)
        record("nondegenerate", model.beta != 0 and model.delta != 0, f"N={N}")

    jet = PotentialJet(coeffs=(a3,) + tuple(_random_rational(rng) for _ in range(run.max_degree - 3)))
    nf, _ = forward_jet(jet, run.max_degree)
    recovered = invert_with_provenance(nf, 1 if a3 > 0 else -1).jet
    record("roundtrip", jets_match(recovered, jet, run.max_degree), str(jet.to_dict()["a"]))

    failed = [c for c in checks if not c["ok"]]
    result = {"seed": run.seed, "checks": checks, "passed": not failed}
    if failed:
        write_output(args, result)
        raise VerificationFailed(f"{len(failed)} selftest checks failed")
    return result


COMMANDS: Dict[str, Callable[[argparse.Namespace, RunConfig], Optional[Dict[str, Any]]]] = {
    "forward": cmd_forward,
    "invert": cmd_invert,
    "predict": cmd_predict,
    "verify": cmd_verify,
    "dos-max": cmd_dos,
    "dos-min": cmd_dos,
    "roundtrip": cmd_roundtrip,
    "selftest": cmd_selftest,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand; returns the process exit code."""
    args = build_parser().parse_args(argv)
    setup_logger("qbnf", level="DEBUG" if args.verbose else None, to_file=False)
    try:
        run = RunConfig(
            subcommand=args.command,
            input_path=getattr(args, "input", None),
            inline_json=getattr(args, "inline_json", None),
            max_degree=args.max_degree,
            hbar_list=list(getattr(args, "hbar_list", None) or []),
            output_path=args.output,
            seed=args.seed,
            prediction_degree=getattr(args, "degree", None),
        )
        result = COMMANDS[args.command](args, run)
        if result is not None:
            write_output(args, result)
    except QbnfError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
