"""Command-line front end.

Exit codes: 0 success, 2 parse error, 3 precondition violation, 4 hypothesis
violation, 5 resource cap.
"""

from __future__ import annotations

import argparse
import logging
import os
import re
import sys
from typing import Optional, Sequence

from monochrom import __version__
from monochrom.colorings import (
    DeterministicColoring,
    load_coloring,
    save_coloring,
    uniform_coloring,
)
from monochrom.commonness import MAX_SIDORENKO_MODULUS, analyze, sidorenko_check, t_L
from monochrom.constructions import (
    choose_prime,
    closed_form_deviation,
    paper_coloring,
    per_frequency_deviation,
    verify_construction,
)
from monochrom.equations import Cyclic, has_canceling_partition, parse_domain, parse_equation
from monochrom.errors import (
    BudgetExceeded,
    CapExceeded,
    CoprimalityViolation,
    DegenerateEquation,
    DomainMismatch,
    GroupTooLarge,
    InfeasibleParams,
    MalformedBreakpoints,
    NoSolutions,
)
from monochrom.lifting import MODELS, WITHOUT_REPLACEMENT, estimate_lifted_mu
from monochrom.report import manifest, render
from monochrom.search import MODES, SweepRow, run_engine, sweep, write_sweep_csv

log = logging.getLogger("monochrom")

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_HYPOTHESIS = 4
EXIT_RESOURCE = 5

_PAPER_SHORTHAND = re.compile(r"^paper_p(\d+)_r(\d+)$")
_UNIFORM_SHORTHAND = re.compile(r"^uniform:(\d+)$")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _resolve_coloring(spec: str, eq, domain):
    """Coloring from a file path or a ``uniform:R`` / ``paper_pP_rR`` shorthand."""
    m = _UNIFORM_SHORTHAND.match(spec)
    if m:
        return uniform_coloring(domain, int(m.group(1))), []
    m = _PAPER_SHORTHAND.match(spec)
    if m:
        p, r = int(m.group(1)), int(m.group(2))
        if domain != Cyclic(p):
            raise DomainMismatch(f"{spec} lives on zn:{p}, not {domain}")
        return paper_coloring(eq, p, r), []
    if not os.path.exists(spec):
        raise CliError(EXIT_PARSE, f"coloring {spec!r} is neither a file nor a known shorthand")
    try:
        return load_coloring(spec), [spec]
    except (ValueError, KeyError) as exc:
        raise CliError(EXIT_PARSE, f"cannot parse coloring file {spec}: {exc}") from exc


def _emit(doc: dict, out: Optional[str]) -> None:
    text = render(doc)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_analyze(args, argv) -> int:
    eq = parse_equation(args.coeffs)
    domain = parse_domain(args.domain)
    coloring, inputs = _resolve_coloring(args.coloring, eq, domain)
    code = EXIT_OK
    method = args.method
    if method == "auto" and domain.is_cyclic and not eq.has_unit_coefficient(domain.size):
        # report what the direct path can still say, then flag the violated condition
        method = "direct"
        code = EXIT_PRECONDITION
        print(f"CoprimalityViolation: no coefficient of {eq} is coprime to {domain.size}; "
              "Fourier path skipped, direct-path report emitted", file=sys.stderr)
    report = analyze(eq, domain, coloring, method=method)
    if code == EXIT_PRECONDITION:
        report.notes.append("fourier path refused: CoprimalityViolation")
    doc = {"manifest": manifest("analyze", argv, None, inputs), "report": report.to_dict()}
    _emit(doc, args.out)
    return code


def cmd_construct(args, argv) -> int:
    eq = parse_equation(args.coeffs)
    if eq.k % 2 == 0:
        raise CliError(EXIT_HYPOTHESIS,
                       f"k = {eq.k} is even; the construction requires an odd number of terms (k = 2m+1)")
    r = args.colors
    if r < 3:
        raise CliError(EXIT_HYPOTHESIS, f"the construction needs at least 3 colors, got {r}")
    p = args.prime if args.prime is not None else choose_prime(eq, r)
    coloring = paper_coloring(eq, p, r)
    report = verify_construction(eq, p, r)
    path = args.out or f"paper_p{p}_r{r}.json"
    save_coloring(coloring, path)
    dev = closed_form_deviation(p, eq.k)
    doc = {
        "manifest": manifest("construct", argv, None),
        "construction": {
            "p": p,
            "p_source": "user" if args.prime is not None else "smallest_feasible",
            "r": r,
            "coloring_file": path,
            "closed_form_deviation": {"value": float(dev), "exact": str(dev), "method": "analytic"},
            "per_frequency_deviation": {"value": float(per_frequency_deviation(p, eq.k)),
                                        "exact": str(per_frequency_deviation(p, eq.k)),
                                        "method": "analytic"},
        },
        "report": report.to_dict(),
    }
    sys.stdout.write(render(doc))
    return EXIT_OK


def cmd_lift(args, argv) -> int:
    eq = parse_equation(args.coeffs)
    if not os.path.exists(args.coloring):
        raise CliError(EXIT_PARSE, f"base coloring file {args.coloring!r} not found")
    try:
        base, inputs = load_coloring(args.coloring), [args.coloring]
    except (ValueError, KeyError) as exc:
        raise CliError(EXIT_PARSE, f"cannot parse coloring file {args.coloring}: {exc}") from exc
    if not isinstance(base, DeterministicColoring):
        raise CliError(EXIT_PRECONDITION, "the base of a lift must be a deterministic coloring")
    if base.domain.is_cyclic:
        raise CliError(EXIT_PRECONDITION, "lifting is defined on interval domains")
    r = args.colors
    if base.r != r - 1 and max(base.colors) > r - 2:
        raise CliError(EXIT_PRECONDITION, f"base must use at most {r - 1} colors")
    base = DeterministicColoring(base.domain, r - 1, base.colors)
    outcome = estimate_lifted_mu(eq, base.domain, base, r, trials=args.trials, seed=args.seed,
                                 model=args.model, threads=args.threads)
    doc = {
        "manifest": manifest("lift", argv, args.seed, inputs),
        "equation": list(eq.coeffs),
        "domain": {"kind": base.domain.kind, "size": base.domain.size},
        "lift": outcome.to_dict(),
    }
    _emit(doc, args.out)
    return EXIT_OK


def _parse_range(text: str) -> tuple[int, int, int]:
    parts = [int(p) for p in text.split(":")]
    if len(parts) == 2:
        return parts[0], parts[1], 1
    if len(parts) == 3:
        return parts[0], parts[1], parts[2]
    raise ValueError(f"malformed range {text!r}; expected A:B or A:B:STEP")


def cmd_search(args, argv) -> int:
    eq = parse_equation(args.coeffs)
    kwargs = dict(restarts=args.restarts, seed=args.seed, max_cuts=args.max_cuts, threads=args.threads)
    seed = args.seed if args.mode == "local" else None
    if args.range:
        lo, hi, step = _parse_range(args.range)
        rows = sweep(eq, lo, hi, step, args.colors, args.mode, **kwargs)
        if args.csv:
            with open(args.csv, "w", newline="") as fh:
                write_sweep_csv(rows, fh)
        body = {"sweep": [row.result.to_dict(timing=args.timing) for row in rows]}
    else:
        if args.n is None:
            raise CliError(EXIT_PARSE, "search needs --n or --range")
        res = run_engine(eq, args.n, args.colors, args.mode, **kwargs)
        if args.csv:
            with open(args.csv, "w", newline="") as fh:
                write_sweep_csv([SweepRow(res.n, res.r, res.mode, res.best_count, res.total_solutions,
                                          res.proportion, res.seed, res)], fh)
        body = {"result": res.to_dict(timing=args.timing)}
    doc = {"manifest": manifest("search", argv, seed), **body}
    _emit(doc, args.out)
    return EXIT_OK


def cmd_sidorenko(args, argv) -> int:
    eq = parse_equation(args.coeffs)
    modulus = args.modulus if args.modulus is not None else parse_domain(args.domain).size
    if modulus > MAX_SIDORENKO_MODULUS:
        raise GroupTooLarge(f"2^{modulus} subsets exceeds the cap of 2^{MAX_SIDORENKO_MODULUS}")
    group = Cyclic(modulus)
    ok, witness = sidorenko_check(eq, group)
    body = {
        "equation": list(eq.coeffs),
        "domain": {"kind": group.kind, "size": group.size},
        "sidorenko": ok,
        "canceling_partition": has_canceling_partition(eq)[0],
        "subsets_checked": 1 << modulus,
    }
    if witness is not None:
        t = t_L(eq, group, witness)
        bound = witness.density ** eq.k
        body["witness"] = {
            "members": sorted(witness.members),
            "t_L": {"value": float(t), "exact": str(t), "method": "direct"},
            "density_power": {"value": float(bound), "exact": str(bound), "method": "analytic"},
        }
    _emit({"manifest": manifest("sidorenko", argv, None), "report": body}, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="monochrom", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out=True):
        p.add_argument("--coeffs", required=True, help="comma-separated coefficients, e.g. 1,1,-1")
        p.add_argument("--threads", type=int, default=os.cpu_count(), help="worker threads")
        if out:
            p.add_argument("--out", help="write the report here instead of stdout")

    p = sub.add_parser("analyze", help="monochromatic proportion of a coloring")
    common(p)
    p.add_argument("--domain", required=True, help="interval:N or zn:L")
    p.add_argument("--coloring", required=True, help="PATH, uniform:R or paper_pP_rR")
    p.add_argument("--method", choices=("auto", "direct", "fourier", "both"), default="auto")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("construct", help="build and verify the Z/pZ construction for odd k")
    common(p, out=False)
    p.add_argument("--colors", type=int, required=True)
    p.add_argument("--prime", type=int)
    p.add_argument("--out", help="coloring file to write (default paper_pP_rR.json)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("lift", help="Monte Carlo (r-1) -> r color lifting")
    common(p)
    p.add_argument("--coloring", required=True, help="base coloring file (deterministic, interval)")
    p.add_argument("--colors", type=int, required=True, help="target number of colors r")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--model", choices=MODELS, default=WITHOUT_REPLACEMENT)
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("search", help="minimize monochromatic solutions over colorings of [n]")
    common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--range", help="A:B or A:B:STEP (inclusive)")
    p.add_argument("--colors", type=int, default=2)
    p.add_argument("--mode", choices=MODES, default="exhaustive")
    p.add_argument("--restarts", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-cuts", type=int, default=2)
    p.add_argument("--csv", help="also write n,r,mode,best_count,... rows here")
    p.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("sidorenko", help="exhaustive Sidorenko check over Z/lZ")
    common(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--modulus", type=int)
    g.add_argument("--domain", help="zn:L")
    p.set_defaults(func=cmd_sidorenko)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args, argv)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (CoprimalityViolation, DomainMismatch, InfeasibleParams, NoSolutions, DegenerateEquation,
            MalformedBreakpoints) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (GroupTooLarge, BudgetExceeded, CapExceeded) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    raise SystemExit(main())
