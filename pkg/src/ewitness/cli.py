"""Command-line front end.

Exit codes: 0 affirmative result, 1 negative or inconclusive, 2 usage or
input error.
"""
import argparse
import csv
import io as _stdio
import json
import sys
import time

import numpy as np

from . import detection, io, states
from .errors import InvalidC, NoWitnessExists, WitnessError
from .witness import (
    SeeSawConfig,
    c_bound_closed_form,
    c_max_exact,
    make_witness,
    min_eigenvalue_check,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _fmt(x):
    return "" if x is None else f"{x:.12g}"


def _vec(v):
    return [[float(z.real), float(z.imag)] for z in v]


def _seesaw_config(args):
    return SeeSawConfig(restarts=args.restarts, max_iters=args.max_iters, tol=args.tol,
                        seed=args.seed)


def _parse_gammas(text):
    if text is None:
        return None
    try:
        vals = tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise UsageError(f"--gammas must be comma-separated numbers, got {text!r}") from None
    if not vals:
        raise UsageError("--gammas is empty")
    return vals


def _detect_config(args):
    basis = None
    if args.basis_file:
        basis, _ = io.load_basis(args.basis_file)
    try:
        return detection.DetectConfig(
            max_candidates=args.max_candidates,
            random_candidates=args.random_candidates,
            seed=args.seed,
            c_method=args.c_method,
            forced_c=args.forced_c,
            c_fraction=args.c_fraction,
            gammas=_parse_gammas(args.gammas),
            basis=basis,
            seesaw=_seesaw_config(args),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _config_echo(args):
    skip = {"func", "output"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _load(path):
    text = io.read_text(path)
    rho = io.parse_state(text)
    if not rho.normalized:
        print(f"warning: {path}: state is not normalized (trace {rho.trace:.12g})",
              file=sys.stderr)
    return rho, io.digest(text)


def _emit(args, record):
    doc = json.dumps(record, indent=2)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(doc + "\n")
    else:
        print(doc)


def _record(args, digest, outputs, started):
    return {
        "command": args.command,
        "config": _config_echo(args),
        "input_digest": digest,
        "outputs": outputs,
        "wall_time": time.perf_counter() - started,
    }


def cmd_cmax(args):
    started = time.perf_counter()
    rho, digest = _load(args.state_file)
    res = c_max_exact(rho, _seesaw_config(args))
    outputs = {
        "closed_form_bound": c_bound_closed_form(rho),
        "exact": res.value,
        "minimizer": {"mu": _vec(res.minimizer.mu), "nu": _vec(res.minimizer.nu)},
        "converged": res.converged,
        "restarts_used": res.restarts_used,
        "lambda_min": rho.lambda_min,
        "min_diagonal": rho.min_diagonal,
        "history": res.history.tolist(),
    }
    _emit(args, _record(args, digest, outputs, started))
    return EXIT_OK


def cmd_witness(args):
    started = time.perf_counter()
    rho, digest = _load(args.state_file)
    method = "see_saw" if args.c_method == "exact" else "closed_form"
    c = args.forced_c
    outputs = {"lambda_min": rho.lambda_min, "min_diagonal": rho.min_diagonal}
    code = EXIT_OK
    try:
        w = make_witness(rho, c, _seesaw_config(args), method=method)
    except (NoWitnessExists, InvalidC) as exc:
        outputs.update(valid=False, reason=type(exc).__name__, message=str(exc))
        code = EXIT_NEGATIVE
    else:
        cert = w.certificate
        outputs.update(
            valid=True,
            c=w.c,
            c_max=cert.value,
            c_max_method=cert.method,
            witness_min_eigenvalue=min_eigenvalue_check(w),
            minimizer={"mu": _vec(cert.minimizer.mu), "nu": _vec(cert.minimizer.nu)},
        )
    _emit(args, _record(args, digest, outputs, started))
    return code


def cmd_detect(args):
    started = time.perf_counter()
    pi, digest = _load(args.state_file)
    report = detection.detect(pi, _detect_config(args))
    _emit(args, _record(args, digest, report.to_dict(), started))
    return EXIT_OK if report.witnessed else EXIT_NEGATIVE


def cmd_ppt(args):
    started = time.perf_counter()
    pi, digest = _load(args.state_file)
    lam = detection.ppt_test(pi)
    outputs = {"ppt_min_eigenvalue": lam, "npt": lam < -detection.PPT_TOL}
    _emit(args, _record(args, digest, outputs, started))
    return EXIT_NEGATIVE if outputs["npt"] else EXIT_OK


def parse_grid(text):
    """``start:stop:step`` (stop included) or a comma-separated list."""
    text = text.strip()
    try:
        if ":" in text:
            start, stop, step = (float(t) for t in text.split(":"))
            if step <= 0:
                raise UsageError("grid step must be positive")
            n = int(np.floor((stop - start) / step + 1e-9)) + 1
            grid = [start + i * step for i in range(max(n, 0))]
        else:
            grid = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"cannot parse grid {text!r}") from None
    if not grid:
        raise UsageError("parameter grid is empty")
    return grid


def sweep_csv(result):
    buf = _stdio.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["param", "verdict", "trace_value", "ppt_min_eig", "c_used"])
    for p, rep in result.points:
        c = rep.witness.c if rep.witness is not None else None
        writer.writerow([_fmt(p), rep.verdict, _fmt(rep.trace_value),
                         _fmt(rep.ppt_min_eigenvalue), _fmt(c)])
    writer.writerow(["threshold", "nan" if result.threshold is None else _fmt(result.threshold)])
    return buf.getvalue()


def cmd_sweep(args):
    grid = parse_grid(args.grid)
    config = _detect_config(args)
    for p in grid:
        if not 0.0 <= p <= 1.0:
            raise UsageError(f"grid value {p} outside [0, 1] for family {args.family}")
    result = detection.sweep_family(args.family, grid, config, resolution=args.resolution)
    text = sweep_csv(result)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if result.threshold is not None else EXIT_NEGATIVE


def cmd_state(args):
    if args.family == "werner":
        rho = states.werner_family(args.param)
    elif args.family == "rho_q":
        rho = states.rho_q_family(args.param)
    elif args.family == "bell":
        rho = states.max_entangled(2)
    elif args.family == "mixed":
        rho = states.maximally_mixed(2, 2)
    else:
        a = args.param
        rho = states.bell_example_state(a, (1 - a) / 3)
    text = io.dump_state(rho)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _common_flags():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--tol", type=float, default=1e-12, help="see-saw stopping decrease")
    g.add_argument("--restarts", type=int, default=50)
    g.add_argument("--max-iters", type=int, default=500)
    g.add_argument("--max-candidates", type=int, default=200)
    g.add_argument("--random-candidates", type=int, default=None)
    g.add_argument("--c-method", choices=("exact", "closed_form"), default="exact")
    g.add_argument("--forced-c", type=float, default=None)
    g.add_argument("--c-fraction", type=float, default=None,
                   help="c = lambda_min + FRACTION*(c_max - lambda_min)")
    g.add_argument("--gammas", default=None, help="comma-separated user candidate spectrum")
    g.add_argument("--basis-file", default=None)
    g.add_argument("--output", "-o", default=None)
    return p


def build_parser():
    common = _common_flags()
    parser = argparse.ArgumentParser(prog="ewitness", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    for name, func, helptext in (
        ("cmax", cmd_cmax, "closed-form bound and see-saw c_max of a state"),
        ("witness", cmd_witness, "build and validate W = rho - c*I"),
        ("detect", cmd_detect, "run spectral-reversal detection on a state"),
        ("ppt", cmd_ppt, "smallest eigenvalue of the partial transpose"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("state_file")
        p.set_defaults(func=func)

    p = sub.add_parser("sweep", parents=[common], help="detect along a state family")
    p.add_argument("family", choices=sorted(detection.FAMILIES))
    p.add_argument("--grid", default="0:1:0.05")
    p.add_argument("--resolution", type=float, default=1e-3)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("state", help="write a state file for a built-in family")
    p.add_argument("family", choices=("werner", "rho_q", "bell", "mixed", "bell_example"))
    p.add_argument("--param", type=float, default=0.5, help="p, q, or a")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_state)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ewitness {args.command}: error: {exc}", file=sys.stderr)
    except WitnessError as exc:
        where = getattr(args, "state_file", None)
        prefix = f"{where}: " if where else ""
        print(f"ewitness {args.command}: error: {prefix}{exc}", file=sys.stderr)
    except OSError as exc:
        print(f"ewitness {args.command}: error: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
