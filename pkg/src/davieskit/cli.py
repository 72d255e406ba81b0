"""Command-line front end.

Subcommands: ``validate-qubit``, ``region``, ``moe``, ``evolve``,
``validate-qutrit``, ``log-stochastic``.  Exit codes: 0 valid/success,
1 checked-and-invalid, 2 usage or malformed input.  All numeric CSV output
uses '.' decimals with 17 significant digits; outputs are byte-deterministic
for fixed inputs.  Set ``DAVIESKIT_LOG=info`` (or ``debug``) for progress
logging on stderr.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from typing import IO

import numpy as np

from . import channels, entropy, matio, qubit, qutrit
from .errors import DaviesKitError, NotAChannel, NotCP, NotTP

log = logging.getLogger("davieskit")


def _g17(x: float) -> str:
    return f"{float(x):.17g}"


def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _print_json(obj, out: str | None = None) -> None:
    _emit(json.dumps(obj, indent=2) + "\n", out)


# ---------------------------------------------------------------------------
# validate-qubit
# ---------------------------------------------------------------------------


def _qubit_param_report(a: float, c: float, p: float, tol_cp: float, tol_db: float):
    report: dict = {"params": {"a": a, "c": c, "p": p}}
    constraints = [{"name": "0 < p <= 1/2", "holds": 0.0 < p <= 0.5,
                    "margin": min(p, 0.5 - p)}]
    if not constraints[0]["holds"]:
        report["constraints"] = constraints
        report["valid"] = False
        return report
    params = qubit.QubitDaviesParams(a=a, c=c, p=p)
    val = qubit.validate(params)
    constraints += [
        {"name": name, "holds": bool(m >= 0.0), "margin": m} for name, m in val.margins
    ]
    report["constraints"] = constraints
    phi = qubit.build(params, validate_params=False)
    _, choi_min = channels.is_completely_positive(phi, tol=tol_cp)
    db = channels.check_detailed_balance(phi, qubit.gibbs_of(p), tol=tol_db)
    report["choi_min_eig"] = choi_min
    report["detailed_balance_residual"] = db.max_violation
    report["valid"] = bool(all(cst["holds"] for cst in constraints))
    return report


def cmd_validate_qubit(args) -> int:
    if args.a is not None and args.c is not None and args.p is not None:
        report = _qubit_param_report(args.a, args.c, args.p, args.tol_cp, args.tol_db)
        report["parametrization"] = "params"
    elif args.A is not None and args.Gamma is not None and args.p is not None and args.t is not None:
        margin = args.Gamma - args.A / 2.0
        pre = [
            {"name": "A >= 0", "holds": args.A >= 0.0, "margin": args.A},
            {"name": "Gamma >= A/2", "holds": margin >= 0.0, "margin": margin},
            {"name": "t >= 0", "holds": args.t >= 0.0, "margin": args.t},
        ]
        if all(cst["holds"] for cst in pre):
            rates = qubit.QubitRates(
                relax_rate=args.A, dephase_rate=args.Gamma, p=args.p, t=args.t
            )
            params = qubit.from_rates(rates)
            report = _qubit_param_report(
                params.a, params.c, params.p, args.tol_cp, args.tol_db
            )
            report["constraints"] = pre + report["constraints"]
            report["valid"] = bool(all(cst["holds"] for cst in report["constraints"]))
        else:
            report = {"constraints": pre, "valid": False}
        report["parametrization"] = "rates"
    elif args.tau1 is not None and args.tau3 is not None and args.w_eq is not None and args.t is not None:
        pre = [
            {"name": "tau1 > 0", "holds": args.tau1 > 0.0, "margin": args.tau1},
            {"name": "tau3 > 0", "holds": args.tau3 > 0.0, "margin": args.tau3},
            {
                "name": "tau1 <= 2*tau3",
                "holds": args.tau1 <= 2.0 * args.tau3,
                "margin": 2.0 * args.tau3 - args.tau1,
            },
            {
                "name": "-1 < w_eq <= 0",
                "holds": -1.0 < args.w_eq <= 0.0,
                "margin": min(args.w_eq + 1.0, -args.w_eq),
            },
            {"name": "t >= 0", "holds": args.t >= 0.0, "margin": args.t},
        ]
        if all(cst["holds"] for cst in pre):
            rt = qubit.RelaxationTimes(
                tau1=args.tau1, tau3=args.tau3, w_eq=args.w_eq, t=args.t
            )
            params = qubit.from_rates(rt.to_rates())
            report = _qubit_param_report(
                params.a, params.c, params.p, args.tol_cp, args.tol_db
            )
            report["constraints"] = pre + report["constraints"]
            report["valid"] = bool(all(cst["holds"] for cst in report["constraints"]))
        else:
            report = {"constraints": pre, "valid": False}
        report["parametrization"] = "times"
    else:
        sys.stderr.write(
            "error: provide one complete parameter set: --a --c --p, or "
            "--A --Gamma --p --t, or --tau1 --tau3 --w-eq --t\n"
        )
        return 2
    _print_json(report, args.out)
    return 0 if report["valid"] else 1


# ---------------------------------------------------------------------------
# region
# ---------------------------------------------------------------------------


def cmd_region(args) -> int:
    if not (0.0 < args.p <= 0.5):
        sys.stderr.write("error: --p must lie in (0, 1/2]\n")
        return 2
    sample = qubit.region_sample(args.p, args.grid)
    log.info("region: grid %dx%d at p=%g", args.grid, args.grid, args.p)
    phis = qubit.build_batch(
        np.repeat(sample.a_values, args.grid),
        np.tile(sample.c_values, args.grid),
        args.p,
    )
    chois = channels.choi_matrix(phis.astype(complex))
    min_eigs = np.linalg.eigvalsh(chois)[:, 0]
    step = 1.0 / (args.grid - 1)
    lines = ["a,c,valid,choi_min_eig,boundary"]
    idx = 0
    for i, a in enumerate(sample.a_values):
        cbound = 1.0 - a / (1.0 - args.p)
        for j, c in enumerate(sample.c_values):
            valid = bool(sample.valid[i, j])
            near_curve = valid and (cbound - c * c) < 2.5 * step
            near_edge = valid and (1.0 - a - args.p) < step
            boundary = 1 if (near_curve or near_edge) else 0
            lines.append(
                f"{_g17(a)},{_g17(c)},{int(valid)},{_g17(min_eigs[idx])},{boundary}"
            )
            idx += 1
    _emit("\n".join(lines) + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------
# moe
# ---------------------------------------------------------------------------


def _moe_scan(args) -> int:
    sample = qubit.region_sample(args.p, args.grid)
    lines = ["a,c,p,valid,choi_min_eig,moe_analytic,moe_numeric,case"]
    for a in sample.a_values:
        for c in sample.c_values:
            params = qubit.QubitDaviesParams(a=float(a), c=float(c), p=args.p)
            valid = qubit.validate(params).valid
            phi = qubit.build(params, validate_params=False)
            _, choi_min = channels.is_completely_positive(phi)
            if valid:
                ana = qubit.min_output_entropy_analytic(params, base=args.log_base)
                num = entropy.moe_numeric(phi, base=args.log_base)
                row = (
                    f"{_g17(a)},{_g17(c)},{_g17(args.p)},1,{_g17(choi_min)},"
                    f"{_g17(ana.value)},{_g17(num.value)},{ana.case}"
                )
            else:
                row = f"{_g17(a)},{_g17(c)},{_g17(args.p)},0,{_g17(choi_min)},nan,nan,0"
            lines.append(row)
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_moe(args) -> int:
    if args.scan:
        if args.p is None:
            sys.stderr.write("error: --scan requires --p\n")
            return 2
        return _moe_scan(args)
    report: dict = {}
    if args.channel is not None:
        if args.mode == "analytic":
            sys.stderr.write("error: analytic mode needs --a --c --p parameters\n")
            return 2
        phi, dim = matio.load_matrix(args.channel)
        if phi.shape not in ((4, 4), (9, 9)):
            sys.stderr.write("error: channel file must hold a 4x4 or 9x9 superoperator\n")
            return 2
        try:
            num = entropy.moe_numeric(phi.astype(complex), base=args.log_base)
        except (NotCP, NotTP) as exc:
            raise NotAChannel(str(exc)) from exc
        report["numeric"] = {
            "value": num.value,
            "minimizer_mu": float(num.minimizer[0, 0].real) if dim == 2 else None,
            "iterations": num.iterations,
            "gap_estimate": num.gap_estimate,
        }
    else:
        if args.a is None or args.c is None or args.p is None:
            sys.stderr.write("error: provide --a --c --p or --channel FILE\n")
            return 2
        params = qubit.QubitDaviesParams(a=args.a, c=args.c, p=args.p)
        if not qubit.validate(params, tol=1e-12).valid:
            raise NotAChannel("parameters lie outside the admissible region")
        if args.mode in ("analytic", "both"):
            ana = qubit.min_output_entropy_analytic(params, base=args.log_base)
            report["analytic"] = {
                "value": ana.value,
                "minimizer_mu": ana.minimizer_mu,
                "case": ana.case,
                "output_eigenvalues": list(ana.output_eigenvalues),
            }
        if args.mode in ("numeric", "both"):
            num = entropy.moe_numeric(qubit.build(params), base=args.log_base)
            report["numeric"] = {
                "value": num.value,
                "minimizer_mu": float(num.minimizer[0, 0].real),
                "iterations": num.iterations,
                "gap_estimate": num.gap_estimate,
            }
    if "analytic" in report and "numeric" in report:
        report["abs_difference"] = abs(
            report["analytic"]["value"] - report["numeric"]["value"]
        )
    _print_json(report, args.out)
    return 0


# ---------------------------------------------------------------------------
# evolve
# ---------------------------------------------------------------------------


def cmd_evolve(args) -> int:
    if args.tau1 is not None and args.tau3 is not None and args.w_eq is not None:
        if args.tau1 <= 0 or args.tau3 <= 0 or args.tau1 > 2.0 * args.tau3:
            sys.stderr.write("error: invalid generator (need 0 < tau1 <= 2*tau3)\n")
            return 2
        tau1, tau3, w_eq = args.tau1, args.tau3, args.w_eq
    elif args.A is not None and args.Gamma is not None and args.p is not None:
        if args.A < 0 or args.Gamma < args.A / 2.0:
            sys.stderr.write("error: invalid generator (need Gamma >= A/2 >= 0)\n")
            return 2
        tau1, tau3, w_eq = 1.0 / args.Gamma, 1.0 / args.A, 2.0 * args.p - 1.0
    else:
        sys.stderr.write("error: provide --tau1 --tau3 --w-eq or --A --Gamma --p\n")
        return 2
    if args.times:
        try:
            times = [float(x) for x in args.times.split(",")]
        except ValueError:
            sys.stderr.write("error: --times must be a comma-separated float list\n")
            return 2
    else:
        times = list(np.linspace(0.0, args.t_max, args.t_steps))
    if any(t < 0 for t in times):
        sys.stderr.write("error: times must be nonnegative\n")
        return 2
    lines = ["t,a,c,eta1,eta3,kappa3,moe"]
    for t in times:
        rt = qubit.RelaxationTimes(tau1=tau1, tau3=tau3, w_eq=w_eq, t=t)
        params = qubit.from_rates(rt.to_rates())
        bloch = qubit.evolve(rt)
        moe = qubit.min_output_entropy_analytic(params, base=args.log_base)
        lines.append(
            f"{_g17(t)},{_g17(params.a)},{_g17(params.c)},{_g17(bloch.eta1)},"
            f"{_g17(bloch.eta3)},{_g17(bloch.kappa3)},{_g17(moe.value)}"
        )
    _emit("\n".join(lines) + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------
# validate-qutrit / log-stochastic
# ---------------------------------------------------------------------------


def _condition_to_json(c: qutrit.ConditionReport) -> dict:
    cert = c.certificate
    if isinstance(cert, np.ndarray):
        cert = cert.tolist()
    return {"name": c.name, "holds": bool(c.holds), "margin": c.margin, "certificate": cert}


def cmd_validate_qutrit(args) -> int:
    try:
        params = matio.load_qutrit_params(args.file, strict=False)
    except (OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: cannot read {args.file}: {exc}\n")
        return 2
    report = qutrit.is_davies_qutrit(params, tol=args.tol)
    _print_json(
        {
            "is_davies": report.is_davies,
            "conditions": [_condition_to_json(c) for c in report.conditions],
        },
        args.out,
    )
    return 0 if report.is_davies else 1


def cmd_log_stochastic(args) -> int:
    try:
        m, dim = matio.load_matrix(args.file)
    except (OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: cannot read {args.file}: {exc}\n")
        return 2
    if dim != 3 or m.shape != (3, 3):
        sys.stderr.write("error: expected a 3x3 stochastic matrix (dim = 3)\n")
        return 2
    F = qutrit.normalize_stochastic(np.real(m))
    result = qutrit.semigroup_member(F, tol=args.tol)
    if result.member:
        out = {
            "embeddable": True,
            "generator": matio.matrix_to_dict(result.generator, dim=3),
        }
        _print_json(out, args.out)
        return 0
    out = {"embeddable": False, "reason": result.log_existence.which or "negative rate"}
    if result.violation_entry is not None:
        i, j = result.violation_entry
        out["violated_entry"] = f"G[{i + 1}{j + 1}]"
        out["violation"] = result.violation_value
        out["generator_candidate"] = matio.matrix_to_dict(result.generator, dim=3)
    _print_json(out, args.out)
    return 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="davieskit",
        description="Thermal (Davies) quantum channels for qubits and qutrits",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    vq = sub.add_parser("validate-qubit", help="check qubit map parameters")
    vq.add_argument("--a", type=float)
    vq.add_argument("--c", type=float)
    vq.add_argument("--p", type=float)
    vq.add_argument("--A", type=float)
    vq.add_argument("--Gamma", type=float)
    vq.add_argument("--tau1", type=float)
    vq.add_argument("--tau3", type=float)
    vq.add_argument("--w-eq", dest="w_eq", type=float)
    vq.add_argument("--t", type=float)
    vq.add_argument("--tol-cp", dest="tol_cp", type=float, default=1e-10)
    vq.add_argument("--tol-db", dest="tol_db", type=float, default=1e-10)
    vq.add_argument("--out", default="-")
    vq.set_defaults(func=cmd_validate_qubit)

    rg = sub.add_parser("region", help="scan the (a, c) admissible region")
    rg.add_argument("--p", type=float, required=True)
    rg.add_argument("--grid", type=int, default=128)
    rg.add_argument("--out", default="-")
    rg.set_defaults(func=cmd_region)

    mo = sub.add_parser("moe", help="minimal output entropy")
    mo.add_argument("--a", type=float)
    mo.add_argument("--c", type=float)
    mo.add_argument("--p", type=float)
    mo.add_argument("--channel", help="superoperator file (matrix JSON)")
    mo.add_argument("--mode", choices=["analytic", "numeric", "both"], default="both")
    mo.add_argument("--scan", action="store_true", help="CSV scan over the region")
    mo.add_argument("--grid", type=int, default=32)
    mo.add_argument("--log-base", dest="log_base", type=float, default=2.0)
    mo.add_argument("--out", default="-")
    mo.set_defaults(func=cmd_moe)

    ev = sub.add_parser("evolve", help="trajectory of a semigroup")
    ev.add_argument("--tau1", type=float)
    ev.add_argument("--tau3", type=float)
    ev.add_argument("--w-eq", dest="w_eq", type=float)
    ev.add_argument("--A", type=float)
    ev.add_argument("--Gamma", type=float)
    ev.add_argument("--p", type=float)
    ev.add_argument("--times", help="comma-separated time list")
    ev.add_argument("--t-max", dest="t_max", type=float, default=5.0)
    ev.add_argument("--t-steps", dest="t_steps", type=int, default=11)
    ev.add_argument("--log-base", dest="log_base", type=float, default=2.0)
    ev.add_argument("--out", default="-")
    ev.set_defaults(func=cmd_evolve)

    qt = sub.add_parser("validate-qutrit", help="check a qutrit parameter file")
    qt.add_argument("file")
    qt.add_argument("--tol", type=float, default=1e-10)
    qt.add_argument("--out", default="-")
    qt.set_defaults(func=cmd_validate_qutrit)

    ls = sub.add_parser("log-stochastic", help="generator of a stochastic matrix")
    ls.add_argument("file")
    ls.add_argument("--tol", type=float, default=1e-10)
    ls.add_argument("--out", default="-")
    ls.set_defaults(func=cmd_log_stochastic)

    return parser


def main(argv=None) -> int:
    level = os.environ.get("DAVIESKIT_LOG", "").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING), stream=sys.stderr
    )
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.func(args)
    except DaviesKitError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
