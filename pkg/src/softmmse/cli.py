"""Command line front end.

Subcommands:
  simulate   run a configured Monte Carlo sweep, write JSON + CSV reports
  llr-check  cross-check CWCU vs plain LLRs on random models
  histogram  run a sweep with conditional histogram collection enabled
  inspect    describe a matrix or constellation JSON file

Exit codes: 0 success, 1 check failed (llr-check only), 2 bad config or
unreadable input, 3 numerical degeneracy. Errors are printed to stderr as a
single JSON object {"error": <type>, "message": <text>}.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

import numpy as np

from . import __version__
from .constellations import bit_sets, by_name, load_constellation
from .errors import (
    BadSpecError,
    DegenerateComponentError,
    DimensionMismatchError,
    NotHPDError,
    SingularMatrixError,
)
from .linalg import is_hermitian, load_matrix
from .linear import cwcu_lmmse, lmmse
from .llr import augmented, build_law_linear, build_law_widely, llr_general, llr_proper
from .model import augment
from .simulate import (
    _point_setup,
    load_config,
    random_linear_model,
    run_trials,
    write_csv_tables,
    write_report_json,
)
from .widely import cwcu_wlmmse, wlmmse


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="softmmse",
        description="Soft MMSE estimation and LLR tooling",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a Monte Carlo sweep from a JSON config")
    sim.add_argument("config", help="path to the run config (JSON)")
    sim.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    sim.add_argument("--seed", type=int, default=None, help="override the config seed")
    sim.add_argument("--output-dir", default=None, help="override the config output dir")
    sim.add_argument(
        "--dry-run",
        action="store_true",
        help="validate the config and build the estimator banks, run no trials",
    )

    chk = sub.add_parser(
        "llr-check",
        help="verify CWCU and plain LLRs agree on random models",
        description=(
            "Draws random models, runs observations through all four estimator "
            "banks and compares per-bit LLRs within each pair (LMMSE vs CWCU "
            "LMMSE, WLMMSE vs CWCU WLMMSE). --dump writes per-bit rows for the "
            "pair matching the constellation: the widely linear pair when the "
            "constellation is improper, the strictly linear pair otherwise."
        ),
    )
    chk.add_argument("--models", type=int, default=200, help="random models (default 200)")
    chk.add_argument(
        "--observations", type=int, default=100, help="observations per model (default 100)"
    )
    chk.add_argument(
        "--constellation",
        default="qpsk",
        choices=("qpsk", "16qam", "8qam-rect"),
        help="symbol alphabet (default qpsk)",
    )
    chk.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    chk.add_argument("--max-m", type=int, default=8, help="largest observation size")
    chk.add_argument("--max-n", type=int, default=6, help="largest data size")
    chk.add_argument(
        "--tolerance", type=float, default=1e-6, help="failure threshold (default 1e-6)"
    )
    chk.add_argument("--dump", default=None, metavar="PATH", help="write per-bit CSV")

    hist = sub.add_parser(
        "histogram", help="run a sweep with conditional estimate histograms"
    )
    hist.add_argument("config", help="path to the run config (JSON)")
    hist.add_argument("--bins", type=int, default=81, help="bins per axis (default 81)")
    hist.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    hist.add_argument("--output-dir", default=None, help="override the config output dir")

    ins = sub.add_parser("inspect", help="describe a matrix or constellation JSON file")
    ins.add_argument("path", help="file to inspect")
    return p


def _fail(kind: str, message: str, code: int) -> int:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
    return code


def _cmd_simulate(args) -> int:
    config = load_config(args.config)
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    if args.output_dir is not None:
        config = replace(config, output_dir=args.output_dir)
    if args.dry_run:
        points = []
        for si in range(len(config.snr_db)):
            setup = _point_setup(config, si)
            points.append(
                {
                    "snr_db": setup.snr_db,
                    "sigma2": setup.sigma2,
                    "m": int(setup.A.shape[0]),
                    "n": int(setup.A.shape[1]),
                    "channel": setup.channel_info,
                }
            )
        print(json.dumps({"ok": True, "dry_run": True, "points": points}, indent=1))
        return 0
    report = run_trials(config, jobs=args.jobs)
    outdir = config.output_dir
    import os

    os.makedirs(outdir, exist_ok=True)
    json_path = os.path.join(outdir, "report.json")
    write_report_json(report, json_path)
    paths = [json_path] + write_csv_tables(report, outdir)
    for pt in report.points:
        line = {
            "snr_db": pt["snr_db"],
            "sigma2": pt["sigma2"],
            "ber": {b: pt["banks"][b]["ber"] for b in pt["banks"]},
            "llr_max_abs_diff": {
                pair: pt["llr_pairs"][pair]["max_abs_diff"] for pair in pt["llr_pairs"]
            },
        }
        print(json.dumps(line))
    print(json.dumps({"ok": True, "written": paths}))
    return 0


def _cmd_llr_check(args) -> int:
    c = by_name(args.constellation)
    bits = bit_sets(c)
    if args.max_n < 1 or args.max_m < args.max_n:
        raise BadSpecError("llr-check needs max-m >= max-n >= 1")
    dump_pair = "widely" if not c.is_proper else "linear"
    dump_rows = []
    worst = {"linear": 0.0, "widely": 0.0}
    trial = 0
    for mi in range(args.models):
        rng = np.random.default_rng([args.seed, mi])
        n = int(rng.integers(1, args.max_n + 1))
        m = int(rng.integers(n, args.max_m + 1))
        model = random_linear_model(rng, m, n, c)
        am = augment(model)
        banks = {
            "linear": (lmmse(model), cwcu_lmmse(model)),
            "widely": (wlmmse(am), cwcu_wlmmse(am)),
        }
        laws = {
            "linear": tuple(
                [build_law_linear(b, c, i) for i in range(n)] for b in banks["linear"]
            ),
            "widely": tuple(
                [build_law_widely(b, c, i) for i in range(n)] for b in banks["widely"]
            ),
        }
        L = np.linalg.cholesky(model.Cnn)
        for _ in range(args.observations):
            d = rng.integers(0, c.symbols.size, size=n)
            g = rng.standard_normal((2, m))
            v = L @ ((g[0] + 1j * g[1]) / np.sqrt(2.0))
            y = model.H @ c.symbols[d] + v
            ya = np.concatenate([y, np.conj(y)])
            zs = {
                "linear": tuple(y @ b.E.T for b in banks["linear"]),
                "widely": tuple((ya @ b.E_aug.T)[:n] for b in banks["widely"]),
            }
            for i in range(n):
                lam = {
                    "linear": tuple(
                        llr_proper(zs["linear"][j][i], laws["linear"][j][i], bits,
                                   clamp=None)
                        for j in range(2)
                    ),
                    "widely": tuple(
                        llr_general(augmented(zs["widely"][j][i]),
                                    laws["widely"][j][i], bits, clamp=None)
                        for j in range(2)
                    ),
                }
                for pair in ("linear", "widely"):
                    la, lb = lam[pair]
                    diff = np.abs(la - lb)
                    worst[pair] = max(worst[pair], float(np.max(diff)))
                    if args.dump and pair == dump_pair:
                        for bi in range(c.bits_per_symbol):
                            dump_rows.append(
                                (trial, i, bi, float(la[bi]), float(lb[bi]),
                                 float(diff[bi]))
                            )
            trial += 1
    if args.dump:
        with open(args.dump, "w") as fh:
            fh.write(f"# per-bit LLRs for the {dump_pair} pair (A=plain, B=CWCU)\n")
            fh.write("trial,component,bit,llr_A,llr_B,abs_diff\n")
            for row in dump_rows:
                fh.write(
                    ",".join(
                        format(v, ".17g") if isinstance(v, float) else str(v)
                        for v in row
                    )
                    + "\n"
                )
    ok = worst["linear"] <= args.tolerance and worst["widely"] <= args.tolerance
    print(
        json.dumps(
            {
                "models": args.models,
                "observations": args.observations,
                "constellation": args.constellation,
                "max_abs_diff_linear": worst["linear"],
                "max_abs_diff_widely": worst["widely"],
                "tolerance": args.tolerance,
                "ok": ok,
            }
        )
    )
    return 0 if ok else 1


def _cmd_histogram(args) -> int:
    if args.bins < 1:
        raise BadSpecError("histogram needs a positive --bins")
    config = load_config(args.config)
    config = replace(config, histogram_bins=args.bins)
    if args.output_dir is not None:
        config = replace(config, output_dir=args.output_dir)
    report = run_trials(config, jobs=args.jobs)
    import os

    os.makedirs(config.output_dir, exist_ok=True)
    paths = write_csv_tables(report, config.output_dir)
    print(json.dumps({"ok": True, "bins": args.bins, "written": paths}))
    return 0


def _cmd_inspect(args) -> int:
    with open(args.path) as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict) or ("labels" not in raw and "rows" not in raw):
        raise BadSpecError(
            f"{args.path} is neither a matrix file (rows/cols/re/im) "
            "nor a constellation file (labels)"
        )
    if "labels" in raw:
        c = load_constellation(args.path)
        out = {
            "type": "constellation",
            "name": c.name,
            "symbols": int(c.symbols.size),
            "bits_per_symbol": c.bits_per_symbol,
            "variance": c.variance,
            "pseudo_variance_re": c.pseudo_variance.real,
            "pseudo_variance_im": c.pseudo_variance.imag,
            "propriety": "proper" if c.is_proper else "improper",
        }
        print(json.dumps(out, indent=1))
        return 0
    M = load_matrix(args.path)
    rows, cols = M.shape
    out = {
        "type": "matrix",
        "rows": rows,
        "cols": cols,
        "frobenius_norm": float(np.linalg.norm(M)),
        "square": rows == cols,
    }
    if rows == cols:
        out["hermitian"] = bool(is_hermitian(M))
        if out["hermitian"]:
            try:
                np.linalg.cholesky(M)
                out["positive_definite"] = True
            except np.linalg.LinAlgError:
                out["positive_definite"] = False
        off = M - np.diag(np.diag(M))
        scale = max(1.0, float(np.max(np.abs(M)))) if M.size else 1.0
        out["diagonal"] = bool(np.max(np.abs(off)) <= 1e-12 * scale) if M.size else True
    print(json.dumps(out, indent=1))
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "llr-check": _cmd_llr_check,
    "histogram": _cmd_histogram,
    "inspect": _cmd_inspect,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (BadSpecError, DimensionMismatchError, json.JSONDecodeError) as exc:
        return _fail(type(exc).__name__, str(exc), 2)
    except OSError as exc:
        return _fail(type(exc).__name__, str(exc), 2)
    except (NotHPDError, SingularMatrixError, DegenerateComponentError) as exc:
        return _fail(type(exc).__name__, str(exc), 3)


if __name__ == "__main__":
    sys.exit(main())
