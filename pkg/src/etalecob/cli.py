"""Command line front end.

    etalecob cohomology --catalog P1 --coeff Z/5
    etalecob ahss --catalog finite_field --q 7 --theory MU --l 2 --nu 3 --reduced --degrees -4..4
    etalecob verify algebra

Exit codes: 0 success (an UNDETERMINED report included), 1 failed
verification, 2 bad input, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .ahss import analyze_differentials, assemble_abutment, build_e2, convergence_check
from .catalog import catalog, etale_theory
from .cochains import CohomologyTable, cohomology
from .coefficients import GradedCoefficients
from .errors import BudgetExceeded, EtalecobError
from .finab import FinAb, prime_power
from .simplicial import FinSimpSet
from .verify import SUITES, run_suite

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class InputError(Exception):
    pass


def parse_degrees(text: str) -> tuple[int, int]:
    try:
        if ".." in text:
            a, b = text.split("..")
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise InputError(f"bad degree range {text!r}; use A..B") from None
    if lo > hi:
        raise InputError(f"empty degree range {text!r}")
    return lo, hi


def _coefficient(args) -> FinAb:
    if args.coeff:
        try:
            return FinAb.parse(args.coeff)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    return FinAb.cyclic(args.l ** args.nu)


def _ell_nu(G: FinAb) -> tuple[int, int]:
    if G.rank != 1:
        raise InputError(f"{G} is not cyclic")
    try:
        return prime_power(G.exponent)
    except ValueError:
        raise InputError(f"{G} is not of prime-power order") from None


def _load_input(path: str):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc.msg}") from None
    try:
        if isinstance(data, dict) and "groups" in data:
            return CohomologyTable.from_json(data)
        return FinSimpSet.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path} does not describe a simplicial set or cohomology table: {exc}") from None


def _entry(args, ell: int, nu: int):
    params = {"ell": ell, "nu": nu, "D": args.D}
    for key in ("q", "n"):
        v = getattr(args, key, None)
        if v is not None:
            params[key] = v
    return catalog(args.catalog, **params)


def _render_table(tab: CohomologyTable, title: str) -> str:
    lines = [f"{title}  coefficients {tab.coefficient}{'  (reduced)' if tab.reduced else ''}"]
    for n in sorted(tab.groups):
        flag = ""
        if tab.stabilized is not None and not tab.stabilized.get(n, True):
            flag = "  (not stabilized)"
        lines.append(f"  H^{n} = {tab.groups[n]}{flag}")
    if tab.vanishes_above is not None:
        lines.append(f"  H^n = 0 for n > {tab.vanishes_above}")
    else:
        lines.append(f"  degrees above {max(tab.groups)} unsupported")
    for note in tab.notes:
        lines.append(f"  note: {note}")
    return "\n".join(lines)


def _render_report(rep) -> str:
    lines = [f"{rep.theory} mod {rep.modulus}{'  (reduced)' if rep.reduced else ''}: {rep.status}",
             f"  certificates: {', '.join(rep.certificates)}"]
    if rep.splitting:
        lines.append(f"  splitting: {rep.splitting}")
    for n in sorted(rep.degrees):
        d = rep[n]
        if d.status == "RESOLVED":
            shown = str(d.group)
        elif d.status == "GRADED":
            shown = "graded: " + " ; ".join(f"E({p},{q}) = {g}" for p, q, g in d.pieces)
        else:
            shown = "UNDETERMINED"
        lines.append(f"  E^{n} = {shown}")
    for note in rep.notes:
        lines.append(f"  note: {note}")
    return "\n".join(lines)


def _emit(args, obj: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(obj, sort_keys=True, indent=2))
    else:
        print(text)


def cmd_cohomology(args) -> int:
    G = _coefficient(args)
    if args.input:
        X = _load_input(args.input)
        if isinstance(X, CohomologyTable):
            raise InputError("input is already a cohomology table")
        tab, title = cohomology(X, G, args.reduced), args.input
    else:
        try:
            ell, nu = _ell_nu(G)
        except InputError:
            # only table entries need a cyclic coefficient; they reject others later
            ell, nu = args.l, args.nu
        entry = _entry(args, ell, nu)
        tab, title = entry.cohomology(G, args.reduced), entry.label
    out = tab.to_json()
    out["schema"] = 1
    out.setdefault("notes", [])
    _emit(args, out, _render_table(tab, title))
    return EXIT_OK


def cmd_ahss(args) -> int:
    degrees = parse_degrees(args.degrees)
    C = GradedCoefficients.parse(args.theory, args.l, args.nu)
    if args.input:
        X = _load_input(args.input)
        base = X if isinstance(X, CohomologyTable) else cohomology(X, C.modulus, args.reduced)
        page = build_e2(base, C, degrees)
        rep = assemble_abutment(page, analyze_differentials(page, degrees), degrees, args.splitting,
                                convergence_check(base, C))
    else:
        entry = _entry(args, C.ell, C.nu)
        rep = etale_theory(entry, C, degrees, args.reduced, args.splitting)
    out = rep.to_json()
    out["undetermined"] = rep.status == "UNDETERMINED"
    _emit(args, out, _render_report(rep))
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.suite not in SUITES:
        raise InputError(f"unknown suite {args.suite!r}; expected one of {', '.join(SUITES)}")
    results = run_suite(args.suite)
    ok = all(r[1] for r in results)
    out = {"schema": 1, "suite": args.suite, "passed": ok,
           "checks": [{"name": n, "passed": p, "error": e} for n, p, e in results], "notes": []}
    text = "\n".join(f"{'PASS' if p else 'FAIL'}  {n}" + (f"  ({e})" if e else "") for n, p, e in results)
    _emit(args, out, text + f"\n{args.suite}: {'pass' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="etalecob", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        src = sp.add_mutually_exclusive_group(required=True)
        src.add_argument("--catalog", help="catalog entry, e.g. P1, Pn(2), finite_field(7)")
        src.add_argument("--input", help="JSON file with a simplicial set (or, for ahss, a table)")
        sp.add_argument("--l", type=int, default=2, help="the prime ell")
        sp.add_argument("--nu", type=int, default=1, help="exponent nu of the modulus ell^nu")
        sp.add_argument("--q", type=int, help="field size for finite_field and local_field")
        sp.add_argument("--n", type=int, help="dimension for Pn")
        sp.add_argument("--D", type=int, default=4, help="truncation of simplicial models")
        sp.add_argument("--reduced", action="store_true")
        sp.add_argument("--budget", type=int, help="per-level element budget")
        sp.add_argument("--format", choices=("table", "json"), default="table")

    c = sub.add_parser("cohomology", help="cohomology table of an entry or a simplicial set")
    common(c)
    c.add_argument("--coeff", help="coefficient group, e.g. Z/5 or Z/2+Z/4")
    c.set_defaults(func=cmd_cohomology)

    a = sub.add_parser("ahss", help="run the spectral sequence")
    common(a)
    a.add_argument("--theory", default="MU", help="MU, KU, HZ or MoravaK(n)")
    a.add_argument("--degrees", default="-6..6", help="total degrees A..B")
    a.add_argument("--splitting", help="justification that extensions split")
    a.set_defaults(func=cmd_ahss)

    v = sub.add_parser("verify", help="run a property suite")
    v.add_argument("suite", help=", ".join(SUITES))
    v.add_argument("--format", choices=("table", "json"), default="table")
    v.set_defaults(func=cmd_verify)
    return p


def _glue_negative(argv: list[str]) -> list[str]:
    """Let ``--degrees -4..4`` through argparse, which would take ``-4..4`` for a flag."""
    out, i = [], 0
    while i < len(argv):
        if argv[i] == "--degrees" and i + 1 < len(argv):
            out.append("--degrees=" + argv[i + 1])
            i += 2
            continue
        out.append(argv[i])
        i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    argv = _glue_negative(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    saved = os.environ.get("ETALECOB_BUDGET")
    if getattr(args, "budget", None) is not None:
        os.environ["ETALECOB_BUDGET"] = str(args.budget)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, EtalecobError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    finally:
        if saved is None:
            os.environ.pop("ETALECOB_BUDGET", None)
        else:
            os.environ["ETALECOB_BUDGET"] = saved


if __name__ == "__main__":
    sys.exit(main())
