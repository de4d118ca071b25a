"""Command-line surface: spectra of g x^2 + x^(2N) wells plus validation
against solvable models and the independent integrator.

Exit codes: 0 success, 1 internal error, 2 partial result (shortfall),
64 usage. Machine formats print floats at 10 significant digits; text
mode mirrors the 8-decimal table layout.
"""

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from .errors import SpectralError
from .solver import Bracket, lowest_eigenvalues, refine_root, reproduce_table
from .summation import DEFAULT_TAIL

_TABLE_G = (-20.0, -10.0, -1.0, -0.1, 0.0, 0.1, 1.0, 10.0, 20.0)

EX_OK = 0
EX_ERROR = 1
EX_PARTIAL = 2
EX_USAGE = 64


@dataclass(frozen=True)
class RunConfig:
    command: str
    fmt: str = "text"
    output: str = None  # None = stdout
    tol_e: float = 1e-10
    params: dict = None


class UsageParser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; the contract here is 64."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EX_USAGE)


def _preprocess(argv):
    """Support the documented `--g -- -20` escape: a lone `--` right after
    a long flag and right before a negative number is dropped."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if (
            tok == "--"
            and out
            and out[-1].startswith("--")
            and i + 1 < len(argv)
            and len(argv[i + 1]) > 1
            and argv[i + 1][0] == "-"
            and (argv[i + 1][1].isdigit() or argv[i + 1][1] == ".")
        ):
            i += 1
            continue
        out.append(tok)
        i += 1
    return out


def _fmt(x):
    return format(float(x), ".10g")


def canonical_json(obj):
    """Deterministic serialization: sorted keys, 10-significant-digit
    floats, no layout variation: re-serializing a parsed document is
    byte-identical."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return repr(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        return _fmt(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        inner = ", ".join(
            f"{json.dumps(str(k))}: {canonical_json(obj[k])}" for k in sorted(obj)
        )
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(canonical_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _open_out(cfg):
    if cfg.output:
        return open(cfg.output, "w", newline="")
    return sys.stdout


def _close_out(cfg, stream):
    if cfg.output:
        stream.close()


def _parity_name(nu):
    return "even" if nu == 0 else "odd"


def _eigen_record(index, ev):
    return {
        "index": index,
        "parity": _parity_name(ev.parity),
        "energy": ev.energy,
        "residual": ev.residual,
        "n_used": ev.n_used,
        "terms_used": list(ev.terms_used),
    }


def _policies_dict(tol_e):
    return {"tol_e": tol_e, "tail": asdict(DEFAULT_TAIL)}


def _emit_solve(cfg, evs, shortfall):
    out = _open_out(cfg)
    try:
        if cfg.fmt == "json":
            doc = {
                "model": "oscillator",
                "params": cfg.params,
                "policies": _policies_dict(cfg.tol_e),
                "eigenvalues": [_eigen_record(i, e) for i, e in enumerate(evs)],
            }
            out.write(canonical_json(doc) + "\n")
        elif cfg.fmt == "csv":
            w = csv.writer(out, lineterminator="\n")
            w.writerow(["index", "parity", "energy", "residual", "n_used"])
            for i, e in enumerate(evs):
                w.writerow([i, _parity_name(e.parity), _fmt(e.energy),
                            _fmt(e.residual), e.n_used])
        else:
            p = cfg.params
            out.write(f"V(x) = g x^2 + x^(2N), N={p['N']}, g={_fmt(p['g'])}\n")
            for i, e in enumerate(evs):
                out.write(
                    f"E_{i} ({_parity_name(e.parity)}) = {e.energy:14.8f}"
                    f"   residual {e.residual:.2e}   n {e.n_used}"
                    f"   terms {list(e.terms_used)}\n"
                )
            if shortfall:
                out.write("warning: fewer states found than requested\n")
    finally:
        _close_out(cfg, out)


def cmd_solve(args):
    window = None
    given = [args.emin, args.emax, args.step]
    if any(v is not None for v in given):
        if any(v is None for v in given):
            raise SystemExit(EX_USAGE)
        window = (args.emin, args.emax, args.step)
    cfg = RunConfig(
        command="solve", fmt=args.format, output=args.output, tol_e=args.tol,
        params={"N": args.N, "g": args.g, "parity": args.parity,
                "count": args.count},
    )
    want_both = args.parity == "both"
    ask = args.count if want_both else 2 * args.count + 1
    res = lowest_eigenvalues(args.N, args.g, ask, window, tol_e=args.tol)
    evs = list(res.eigenvalues)
    if not want_both:
        nu = 0 if args.parity == "even" else 1
        evs = [e for e in evs if e.parity == nu][: args.count]
        short = len(evs) < args.count
    else:
        short = res.shortfall
    _emit_solve(cfg, evs, short)
    return EX_PARTIAL if short else EX_OK


def _table_rows_out(cfg, out, rows, levels):
    if cfg.fmt == "json":
        doc = {
            "model": "oscillator",
            "params": cfg.params,
            "policies": _policies_dict(cfg.tol_e),
            "rows": [
                {"g": g, "energies": [e.energy for e in evs]} for g, evs in rows
            ],
        }
        out.write(canonical_json(doc) + "\n")
        return
    if cfg.fmt == "text":
        out.write("      g  " + "".join(f"          E{j}" for j in range(levels)) + "\n")
        for g, evs in rows:
            cells = "".join(f" {e.energy:12.8f}" for e in evs)
            out.write(f"{g:7.1f} {cells}\n")
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["g"] + [f"E{j}" for j in range(levels)])
    for g, evs in rows:
        cells = [_fmt(e.energy) for e in evs]
        cells += [""] * (levels - len(cells))
        w.writerow([_fmt(g)] + cells)


def cmd_table(args):
    g_list = list(args.g) if args.g else list(_TABLE_G)
    cfg = RunConfig(
        command="table", fmt=args.format, output=args.output, tol_e=args.tol,
        params={"N": args.N, "g": g_list, "levels": args.levels},
    )
    sweep = reproduce_table(args.N, g_list, levels=args.levels, tol_e=args.tol)
    out = _open_out(cfg)
    try:
        _table_rows_out(cfg, out, sweep.rows, args.levels)
    finally:
        _close_out(cfg, out)
    return EX_PARTIAL if sweep.metadata["shortfalls"] else EX_OK


def _sweep_worker(task):
    n_pow, g, levels, tol_e = task
    res = lowest_eigenvalues(n_pow, g, levels, tol_e=tol_e)
    return g, res


def _thread_count():
    raw = os.environ.get("SPECTRA_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return n if n > 1 else 1


def cmd_sweep(args):
    if args.g_from > args.g_to:
        raise SystemExit(EX_USAGE)
    g_list = []
    g = args.g_from
    span = args.g_to - args.g_from
    while g <= args.g_to + 1e-12 * max(1.0, span):
        g_list.append(round(g, 12))
        g += args.g_step
    cfg = RunConfig(
        command="sweep", fmt=args.format, output=args.output, tol_e=args.tol,
        params={"N": args.N, "g_from": args.g_from, "g_to": args.g_to,
                "g_step": args.g_step, "levels": args.levels},
    )
    tasks = [(args.N, g, args.levels, args.tol) for g in g_list]
    workers = _thread_count()
    out = _open_out(cfg)
    shortfall = False
    try:
        if workers > 1:
            pool = ProcessPoolExecutor(max_workers=min(workers, len(tasks)))
            results = pool.map(_sweep_worker, tasks)
        else:
            pool = None
            results = map(_sweep_worker, tasks)
        if cfg.fmt == "json":
            rows = []
            for g, res in results:
                shortfall = shortfall or res.shortfall
                rows.append({"g": g, "energies": [e.energy for e in res.eigenvalues]})
            doc = {
                "model": "oscillator",
                "params": cfg.params,
                "policies": _policies_dict(cfg.tol_e),
                "rows": rows,
            }
            out.write(canonical_json(doc) + "\n")
        else:
            w = csv.writer(out, lineterminator="\n")
            w.writerow(["g"] + [f"E{j}" for j in range(args.levels)])
            for g, res in results:
                shortfall = shortfall or res.shortfall
                cells = [_fmt(e.energy) for e in res.eigenvalues]
                cells += [""] * (args.levels - len(cells))
                w.writerow([_fmt(g)] + cells)
                out.flush()
        if pool is not None:
            pool.shutdown()
    finally:
        _close_out(cfg, out)
    return EX_PARTIAL if shortfall else EX_OK


def _validate_pt(args, out):
    from .models import PoschlTellerSpec, pt_exact_levels, pt_wronskian

    if args.kappa is None or args.lam is None:
        raise SystemExit(EX_USAGE)
    spec = PoschlTellerSpec(kappa=args.kappa, lam=args.lam)
    tol = args.tol if args.tol is not None else 1e-8
    levels = pt_exact_levels(spec, args.count)
    worst = 0.0
    for i, level in enumerate(levels):
        half_gap = 2.0 * (spec.kappa + spec.lam + 2 * i) + 1.0
        lo, hi = level - half_gap, level + half_gap
        f = lambda k2: pt_wronskian(spec, k2)
        ev = refine_root(f, Bracket(lo, hi, f(lo), f(hi)), tol_e=1e-10)
        gap = abs(ev.energy - level)
        worst = max(worst, gap)
        out.write(f"level {_fmt(level)}  zero {_fmt(ev.energy)}  gap {gap:.3e}\n")
    return worst, tol


def _validate_mpt(args, out):
    from .models import ModifiedPTSpec, mpt_exact_levels, mpt_wronskian

    if args.lam is None:
        raise SystemExit(EX_USAGE)
    tol = args.tol if args.tol is not None else 1e-8
    worst = 0.0
    for mu, name in ((0.0, "even"), (0.5, "odd")):
        spec = ModifiedPTSpec(lam=args.lam, parity_mu=mu)
        for level in mpt_exact_levels(spec):
            lo = max(level - 0.5, 1e-6)
            hi = level + 0.5
            f = lambda koa: mpt_wronskian(spec, koa)
            ev = refine_root(f, Bracket(lo, hi, f(lo), f(hi)), tol_e=1e-10)
            gap = abs(ev.energy - level)
            worst = max(worst, gap)
            out.write(
                f"{name} level {_fmt(level)}  zero {_fmt(ev.energy)}  gap {gap:.3e}\n"
            )
    return worst, tol


def _validate_morse(args, out):
    from .models import MorseSpec, morse_located_zeros, morse_reference_levels

    # defaults put the matching boundary deep (y0 ~ 30) so closed-form
    # levels are honest references at the 1e-3 tolerance
    alpha = args.alpha if args.alpha is not None else math.log(30.05 / 6.0)
    gamma = args.gamma if args.gamma is not None else 3.0
    spec = MorseSpec(alpha=alpha, gamma_over_alpha=gamma)
    tol = args.tol if args.tol is not None else 1e-3
    refs = morse_reference_levels(spec)
    zeros = morse_located_zeros(spec)
    out.write(f"y0 {_fmt(spec.y0)}: {len(zeros)} zeros located, "
              f"{len(refs)} reference levels\n")
    worst = math.inf if len(zeros) != len(refs) else 0.0
    for level in refs:
        if not zeros:
            out.write(f"reference {_fmt(level)}  no zero found\n")
            continue
        nearest = min(zeros, key=lambda z: abs(z - level))
        gap = abs(nearest - level)
        if len(zeros) == len(refs):
            worst = max(worst, gap)
        out.write(
            f"reference {_fmt(level)}  zero {_fmt(nearest)}  gap {gap:.3e}\n"
        )
    return worst, tol


def _validate_oracle(args, out):
    from .numerov import EvenPolynomial, richardson_eigenvalue

    if args.N is None or args.g is None:
        raise SystemExit(EX_USAGE)
    tol = args.tol if args.tol is not None else 1e-6
    res = lowest_eigenvalues(args.N, args.g, args.count)
    pot = EvenPolynomial.oscillator(args.g, args.N)
    worst = 0.0
    for j, ev in enumerate(res.eigenvalues):
        e_ref, est = richardson_eigenvalue(pot, ev.ordinal, ev.parity)
        gap = abs(ev.energy - e_ref)
        worst = max(worst, gap)
        out.write(
            f"E_{j} series {_fmt(ev.energy)}  integrator {_fmt(e_ref)}"
            f"  gap {gap:.3e}  grid-err {est:.1e}\n"
        )
    return worst, tol


def cmd_validate(args):
    cfg = RunConfig(command="validate", fmt="text", output=args.output,
                    params={"model": args.model})
    out = _open_out(cfg)
    try:
        if args.model == "poschl-teller":
            worst, tol = _validate_pt(args, out)
        elif args.model == "modified-pt":
            worst, tol = _validate_mpt(args, out)
        elif args.model == "morse":
            worst, tol = _validate_morse(args, out)
        else:
            worst, tol = _validate_oracle(args, out)
        ok = worst <= tol
        out.write(f"worst gap {worst:.3e} {'<=' if ok else '>'} tolerance {tol:.1e}"
                  f" -> {'OK' if ok else 'FAIL'}\n")
    finally:
        _close_out(cfg, out)
    return EX_OK if ok else EX_ERROR


def build_parser():
    parser = UsageParser(
        prog="spectra",
        description="Bound states of V(x) = g x^2 + x^(2N) via series-built "
        "Wronskians, with solvable-model and integrator validation.",
        epilog="Negative couplings: both `--g=-20` and `--g -- -20` work. "
        "SPECTRA_THREADS>1 parallelizes sweep rows (ordering preserved).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--format", choices=("text", "json", "csv"), default=None)
        p.add_argument("--output", default=None, help="write to file instead of stdout")
        p.add_argument("--tol", type=float, default=None,
                       help="energy tolerance override")

    p = sub.add_parser("solve", parents=[], help="eigenvalues for one (N, g)")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--g", type=float, required=True)
    p.add_argument("--parity", choices=("even", "odd", "both"), default="both")
    p.add_argument("--count", type=int, default=4)
    p.add_argument("--emin", type=float, default=None)
    p.add_argument("--emax", type=float, default=None)
    p.add_argument("--step", type=float, default=None)
    add_common(p)
    p.set_defaults(fn=cmd_solve, default_format="text")

    p = sub.add_parser("table", help="reproduce a reference table for one N")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--g", type=float, action="append", default=None,
                   help="coupling (repeatable); default: the nine standard values")
    p.add_argument("--levels", type=int, default=4)
    add_common(p)
    p.set_defaults(fn=cmd_table, default_format="csv")

    p = sub.add_parser("validate",
                       help="check located zeros against closed forms/integrator")
    p.add_argument("--model", required=True,
                   choices=("poschl-teller", "modified-pt", "morse", "oracle"))
    p.add_argument("--kappa", type=float, default=None)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--gamma", type=float, default=None,
                   help="gamma/alpha for the morse model")
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--g", type=float, default=None)
    p.add_argument("--count", type=int, default=3)
    p.add_argument("--output", default=None)
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(fn=cmd_validate, default_format="text")

    p = sub.add_parser("sweep", help="scan a coupling range")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--g-from", type=float, required=True)
    p.add_argument("--g-to", type=float, required=True)
    p.add_argument("--g-step", type=float, required=True)
    p.add_argument("--levels", type=int, default=4)
    add_common(p)
    p.set_defaults(fn=cmd_sweep, default_format="csv")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(_preprocess(sys.argv[1:] if argv is None else list(argv)))
    if getattr(args, "format", None) is None:
        args.format = args.default_format
    if getattr(args, "tol", None) is None and args.command in ("solve", "table", "sweep"):
        args.tol = 1e-10
    if args.command in ("solve", "table", "sweep") and args.N < 4:
        parser.error("--N must be >= 4")
    if args.command == "sweep" and args.g_step <= 0:
        parser.error("--g-step must be positive")
    if getattr(args, "count", None) is not None and args.count < 1:
        parser.error("--count must be >= 1")
    if getattr(args, "levels", None) is not None and args.levels < 1:
        parser.error("--levels must be >= 1")
    try:
        return args.fn(args)
    except SpectralError as err:
        sys.stderr.write(f"spectra: {type(err).__name__}: {err}\n")
        return EX_ERROR
    except OSError as err:
        sys.stderr.write(f"spectra: {err}\n")
        return EX_ERROR


if __name__ == "__main__":
    sys.exit(main())
