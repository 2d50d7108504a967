"""Command-line front end.

Exit codes: 0 success, 2 invalid spec or input, 3 Gray-code search failure,
4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from . import compositions as comp
from .errors import GraystateError, SearchFailure
from .operators import (
    aklt_hamiltonian,
    eigenstate_residual,
    scaled,
    total_s2,
    total_sz,
    xxx_hamiltonian,
)
from .pipeline import Preparation, prepare
from .states import (
    BetheRoots,
    aklt_amplitudes,
    bethe_amplitudes,
    bethe_energy,
    bethe_residual,
    dicke_amplitudes,
    load_amplitude_file,
    order_amplitudes,
)

log = logging.getLogger("graystate")

EXIT_OK, EXIT_SPEC, EXIT_SEARCH, EXIT_VERIFY = 0, 2, 3, 4


def _spec_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("-n", type=int, required=required, help="number of qudits")
    p.add_argument("-k", type=int, required=required, help="digit sum")
    p.add_argument("--two-s", type=int, required=required, dest="two_s",
                   help="2s; each digit lies in 0..2s")


def _gen_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--gen", choices=["walsh", "warnsdorff"], default="walsh")
    p.add_argument("--start", help="start ditstring for --gen warnsdorff (displayed m_n..m_1)")


def _provider_args(p: argparse.ArgumentParser) -> None:
    _spec_args(p, required=False)
    _gen_args(p)
    p.add_argument("--provider", choices=["generic", "aklt", "dicke", "bethe"], required=True)
    p.add_argument("--amps", type=Path, help="amplitude file for --provider generic")
    p.add_argument("--roots", type=Path, help="Bethe roots file for --provider bethe")
    p.add_argument("--auto-normalize", action="store_true")
    p.add_argument("--elide-identity", action="store_true",
                   help="drop Gray gates with theta = phi = 0")
    p.add_argument("--fidelity-tol", type=float, default=1e-10)
    p.add_argument("--csv", action="store_true", help="print the report as CSV instead of JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graystate",
        description="Prepare fixed-digit-sum qudit states with Gray-code circuits.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dim", help="print the sector dimension")
    _spec_args(p)

    p = sub.add_parser("graycode", help="write a Gray code for the sector")
    _spec_args(p)
    _gen_args(p)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--verify", action="store_true", help="re-check the Gray property first")
    p.add_argument("-o", "--output", type=Path)

    p = sub.add_parser("prepare", help="build, simulate and check a preparation circuit")
    _provider_args(p)
    p.add_argument("--circuit-out", type=Path)
    p.add_argument("--state-out", type=Path)
    p.add_argument("--state-format", choices=["json", "csv"], default="json")
    p.add_argument("--amp-threshold", type=float, default=1e-12)
    p.add_argument("--report-out", type=Path)

    p = sub.add_parser("verify", help="check the prepared state against its Hamiltonian")
    _provider_args(p)
    p.add_argument("--residual-tol", type=float, default=None,
                   help="eigenstate residual tolerance (default 1e-9, 1e-6 for bethe)")
    p.add_argument("--bethe-tol", type=float, default=1e-9,
                   help="tolerance on the Bethe-equation residuals")
    p.add_argument("--sz-tol", type=float, default=1e-10)
    return parser


def _spec_from(args) -> comp.CompositionSpec:
    return comp.CompositionSpec(args.n, args.k, args.two_s)


def _code_for(spec: comp.CompositionSpec, args) -> comp.GrayCode:
    if args.gen == "walsh":
        if args.start:
            raise GraystateError("--start only applies to --gen warnsdorff")
        return comp.walsh_gray_code(spec)
    start = comp.parse_ditstring(args.start, spec.n) if args.start else None
    return comp.warnsdorff_gray_code(spec, start)


def _resolve(args):
    """Sector, Gray code, amplitudes and (for Bethe) roots for a provider."""
    roots = None
    given = (args.n, args.k, args.two_s)
    if args.provider == "generic":
        if args.amps is None:
            raise GraystateError("--provider generic needs --amps")
        if None in given:
            raise GraystateError("--provider generic needs -n, -k and --two-s")
        spec = _spec_from(args)
    elif args.provider == "aklt":
        if args.n is None:
            raise GraystateError("--provider aklt needs -n")
        if args.k not in (None, args.n) or args.two_s not in (None, 2):
            raise GraystateError("the AKLT state has k = n and two_s = 2")
        spec = comp.CompositionSpec(args.n, args.n, 2)
    elif args.provider == "dicke":
        if None in given:
            raise GraystateError("--provider dicke needs -n, -k and --two-s")
        spec = _spec_from(args)
    else:
        if args.roots is None:
            raise GraystateError("--provider bethe needs --roots")
        roots = BetheRoots.from_json(args.roots.read_text())
        spec = roots.spec
        for name, want, got in zip(("n", "k", "two_s"), (spec.n, spec.k, spec.two_s), given):
            if got is not None and got != want:
                raise GraystateError(f"-{name} {got} contradicts the roots file ({want})")
    if args.provider != "generic" and args.amps is not None:
        raise GraystateError("--amps only applies to --provider generic")
    if args.provider != "bethe" and args.roots is not None:
        raise GraystateError("--roots only applies to --provider bethe")

    code = _code_for(spec, args)
    if args.provider == "generic":
        mapping = load_amplitude_file(args.amps.read_text())
        amps = order_amplitudes(spec, code.entries, mapping)
    elif args.provider == "aklt":
        amps = aklt_amplitudes(spec.n, code.entries)
    elif args.provider == "dicke":
        amps = dicke_amplitudes(spec, code.entries)
    else:
        amps = bethe_amplitudes(spec, roots, code.entries)
    return spec, code, amps, roots


def _run_pipeline(args) -> tuple[Preparation, Optional[BetheRoots]]:
    spec, code, amps, roots = _resolve(args)
    prep = prepare(spec, amps, code, elide_identity=args.elide_identity,
                   auto_normalize=args.auto_normalize)
    return prep, roots


def _emit(report: dict, as_csv: bool, out=None) -> str:
    if as_csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for key, val in report.items():
            w.writerow([key, json.dumps(val) if isinstance(val, (list, dict)) else val])
        text = buf.getvalue()
    else:
        text = json.dumps(report, indent=2) + "\n"
    (out or sys.stdout).write(text)
    return text


def cmd_dim(args) -> int:
    print(comp.dimension(_spec_from(args)))
    return EXIT_OK


def cmd_graycode(args) -> int:
    spec = _spec_from(args)
    code = _code_for(spec, args)
    if args.verify:
        check = comp.verify_gray_property(code)
        if not check:
            log.error("Gray property check failed at %s: %s", check.index, check.reason)
            return EXIT_VERIFY
    text = code.to_text() if args.format == "text" else code.to_json() + "\n"
    if args.output:
        args.output.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_prepare(args) -> int:
    prep, roots = _run_pipeline(args)
    if args.circuit_out:
        args.circuit_out.write_text(prep.circuit.to_json(indent=1) + "\n")
    if args.state_out:
        if args.state_format == "json":
            args.state_out.write_text(prep.state.to_json(args.amp_threshold) + "\n")
        else:
            args.state_out.write_text(prep.state.to_csv(args.amp_threshold))
    report = prep.report()
    if args.provider != "generic":
        # last check is the provider's Hamiltonian residual
        ref = verification_checks(prep, args.provider, roots)[-1]
        report["residual_name"] = ref["name"]
        report["residual"] = ref["value"]
    report["fidelity_tol"] = args.fidelity_tol
    report["pass"] = bool(prep.fidelity >= 1 - args.fidelity_tol)
    if args.report_out:
        # files stay byte-identical across runs
        stable = {k: v for k, v in report.items() if k != "wall_time"}
        args.report_out.write_text(json.dumps(stable, indent=2) + "\n")
    _emit(report, args.csv)
    return EXIT_OK if report["pass"] else EXIT_VERIFY


def verification_checks(prep: Preparation, provider: str, roots: Optional[BetheRoots],
                        fidelity_tol: float = 1e-10, residual_tol: Optional[float] = None,
                        bethe_tol: float = 1e-9, sz_tol: float = 1e-10) -> list[dict]:
    """Physics checks on a prepared state; one dict per check."""
    spec, psi = prep.spec, prep.state
    if residual_tol is None:
        residual_tol = 1e-6 if provider == "bethe" else 1e-9
    checks = []

    def add(name, value, tol, ok=None):
        ok = value <= tol if ok is None else ok
        checks.append({"name": name, "value": float(value), "tolerance": tol, "pass": bool(ok)})

    add("infidelity", 1 - prep.fidelity, fidelity_tol)
    m_expected = spec.s * spec.n - spec.k
    sz = total_sz(spec.n, spec.two_s)
    add("sz_expectation_error", abs(sz.expectation(psi).real - m_expected), sz_tol)
    add("sz_eigen_residual", eigenstate_residual(sz, psi, m_expected), sz_tol)

    if provider == "aklt":
        add("aklt_residual", eigenstate_residual(aklt_hamiltonian(spec.n), psi, 0.0), residual_tol)
    elif provider == "dicke":
        energy = -spec.s * spec.n * (spec.s * spec.n + 1)
        op = scaled(total_s2(spec.n, spec.two_s), -1.0)
        add("dicke_residual", eigenstate_residual(op, psi, energy), residual_tol)
    elif provider == "bethe" and spec.n >= 2:
        res = bethe_residual(roots)
        add("bethe_equation_residual", float(np.max(res)) if len(res) else 0.0, bethe_tol)
        energy = bethe_energy(roots)
        op = xxx_hamiltonian(spec.n, spec.two_s)
        add("bethe_state_residual", eigenstate_residual(op, psi, energy), residual_tol)
        checks[-1]["energy"] = energy
    return checks


def cmd_verify(args) -> int:
    prep, roots = _run_pipeline(args)
    checks = verification_checks(prep, args.provider, roots, args.fidelity_tol,
                                 args.residual_tol, args.bethe_tol, args.sz_tol)
    ok = all(c["pass"] for c in checks)
    if args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "value", "tolerance", "pass"])
        for c in checks:
            w.writerow([c["name"], repr(c["value"]), c["tolerance"], c["pass"]])
        sys.stdout.write(buf.getvalue())
    else:
        report = {
            "provider": args.provider,
            "n": prep.spec.n,
            "k": prep.spec.k,
            "two_s": prep.spec.two_s,
            "M": prep.spec.s * prep.spec.n - prep.spec.k,
            "checks": checks,
            "pass": ok,
        }
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    return EXIT_OK if ok else EXIT_VERIFY


COMMANDS = {"dim": cmd_dim, "graycode": cmd_graycode, "prepare": cmd_prepare, "verify": cmd_verify}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except SearchFailure as exc:
        log.error("%s", exc)
        return EXIT_SEARCH
    except (GraystateError, OSError, json.JSONDecodeError, KeyError) as exc:
        log.error("%s", exc)
        return EXIT_SPEC


if __name__ == "__main__":
    sys.exit(main())
