"""``koopcrypt`` command line.

Exit codes: 0 success, 2 bad input, 3 recovery failure, 4 resource guard.
"""
from __future__ import annotations

import argparse
import csv
import io
import os
import random
import statistics
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

from .dynsys import simulate
from .edmd import build_hankel, matrix_to_csv, minimal_dimension
from .errors import (
    DomainError,
    InfeasibleDimensionError,
    InversionError,
    KoopcryptError,
    NonDiagonalizableError,
    RankDeficientError,
    RecoveryError,
    TrajectoryRangeError,
)
from .lincomp import compare_complexity, complexity_csv
from .numtheory import is_prime, primes_up_to, primitive_roots
from .report import ExperimentReport
from .spectral import check_dimension, clear_spectrum_cache, recover_exponent, recover_rsa_key

EXIT_OK, EXIT_INPUT, EXIT_RECOVERY, EXIT_GUARD = 0, 2, 3, 4
DEFAULT_GUARD = 10**5


class GuardExceeded(Exception):
    pass


class InputError(Exception):
    pass


def _guard_limit(args) -> Optional[int]:
    if getattr(args, "no_guard", False):
        return None
    if getattr(args, "guard", None) is not None:
        return args.guard
    env = os.environ.get("KOOPCRYPT_GUARD")
    if env is None or env == "":
        return DEFAULT_GUARD
    if env.lower() in ("off", "none", "0"):
        return None
    try:
        return int(env)
    except ValueError:
        raise InputError(f"KOOPCRYPT_GUARD={env!r} is not an integer or 'off'") from None


def _check_guard(args, modulus: int) -> None:
    limit = _guard_limit(args)
    if limit is not None and modulus > limit:
        raise GuardExceeded(
            f"modulus {modulus} exceeds the guard {limit}; "
            "pass --no-guard or set KOOPCRYPT_GUARD to override"
        )


def _emit(text: str, out: Optional[str] = None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


# -- simulate -----------------------------------------------------------------


def cmd_simulate(args) -> int:
    _check_guard(args, args.p)
    start = time.perf_counter()
    traj = simulate((args.p, args.m), x0=args.x0, steps=args.steps)
    elapsed = (time.perf_counter() - start) * 1e3
    if args.format == "text":
        _emit(" ".join(map(str, traj.values)), args.out)
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "x"])
        w.writerows(enumerate(traj.values))
        _emit(buf.getvalue(), args.out)
    else:
        report = ExperimentReport(
            "simulate",
            {"p": args.p, "m": args.m, "x0": args.x0, "steps": args.steps},
            traj.to_dict(),
            elapsed,
        )
        _emit(report.to_json(timing=not args.no_timing), args.out)
    return EXIT_OK


# -- recover ------------------------------------------------------------------


def cmd_recover(args) -> int:
    if args.scheme == "dh":
        missing = [f for f in ("p", "m", "c") if getattr(args, f) is None]
        if missing:
            raise InputError("dh recovery needs " + ", ".join("--" + f for f in missing))
        _check_guard(args, args.p)
        result = recover_exponent(args.p, args.m, args.c)
        inputs = {"scheme": "dh", "p": args.p, "m": args.m, "c": args.c}
    else:
        missing = [f for f in ("p1", "p2", "e") if getattr(args, f) is None]
        if missing:
            raise InputError("rsa recovery needs " + ", ".join("--" + f for f in missing))
        _check_guard(args, args.p1 * args.p2)
        result = recover_rsa_key(args.p1, args.p2, args.e)
        inputs = {"scheme": "rsa", "p1": args.p1, "p2": args.p2, "e": args.e}
    outputs = result.to_dict()
    timing = outputs.pop("timing_ms")
    report = ExperimentReport("recover", inputs, outputs, timing)
    _emit(report.to_json(timing=not args.no_timing), args.out)
    return EXIT_OK


# -- bench --------------------------------------------------------------------


def parse_primes(text: str) -> list[int]:
    """``"97"``, ``"5,7,11"`` or ``"5-199"`` (every prime in the range)."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if "-" in part:
                lo, hi = (int(v) for v in part.split("-", 1))
                out.extend(q for q in primes_up_to(hi) if q >= max(lo, 5))
            else:
                out.append(int(part))
        except ValueError:
            raise InputError(f"cannot parse prime list {text!r}") from None
    for q in out:
        if q < 5 or not is_prime(q):
            raise InputError(f"{q} is not a prime >= 5")
    if not out:
        raise InputError("no primes selected")
    return sorted(set(out))


def _time_one(p: int, m: int, e: int) -> float:
    c = pow(m, e, p)
    clear_spectrum_cache()
    start = time.perf_counter()
    result = recover_exponent(p, m, c)
    elapsed = time.perf_counter() - start
    if result.exponent != e % result.residue_class_modulus:
        raise RecoveryError(f"p={p}, m={m}: recovered {result.exponent}, expected {e}")
    return elapsed


def bench_prime(p: int, sample: str, repetitions: int, rng: random.Random, workers: int = 1):
    gens = primitive_roots(p)
    if sample != "all":
        try:
            k = int(sample)
        except ValueError:
            raise InputError(f"--sample must be 'all' or an integer, got {sample!r}") from None
        if k < 1:
            raise InputError("--sample must be positive")
        gens = sorted(rng.sample(gens, min(k, len(gens))))
    cells = [(m, rng.randint(1, p - 2)) for m in gens for _ in range(repetitions)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            times = list(pool.map(lambda cell: _time_one(p, *cell), cells))
    else:
        times = [_time_one(p, m, e) for m, e in cells]
    return {"p": p, "generators": len(gens), "runs": len(times),
            "worst_s": max(times), "avg_s": statistics.fmean(times)}


def cmd_bench(args) -> int:
    primes = parse_primes(args.primes)
    for p in primes:
        _check_guard(args, p)
    if args.repetitions < 1:
        raise InputError("--repetitions must be positive")
    rng = random.Random(args.seed)
    rows = [bench_prime(p, args.sample, args.repetitions, rng, args.workers) for p in primes]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "worst_s", "avg_s", "generators", "runs"])
    for r in rows:
        w.writerow([r["p"], f"{r['worst_s']:.6f}", f"{r['avg_s']:.6f}", r["generators"], r["runs"]])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


# -- analyze ------------------------------------------------------------------


def read_sequence(path: str) -> list[int]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    values = []
    for n, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        try:
            values.append(int(line))
        except ValueError:
            raise InputError(f"{path}:{n}: {line!r} is not a decimal integer") from None
    if not values:
        raise InputError(f"{path}: empty sequence")
    return values


def _need_pm(args) -> None:
    if args.p is None or args.m is None:
        raise InputError(f"--mode {args.mode} needs --p and --m")
    _check_guard(args, args.p)


def cmd_analyze(args) -> int:
    start = time.perf_counter()
    inputs: dict = {"mode": args.mode}
    csv_text = None
    if args.mode == "dimension":
        _need_pm(args)
        traj = simulate((args.p, args.m), steps=0)
        q_max = traj.period - 1 if args.q_max is None else args.q_max
        table = [check_dimension(args.p, args.m, q).to_dict() for q in range(q_max + 1)]
        minimal = next((row["q"] for row in table if row["feasible"]), None)
        inputs.update(p=args.p, m=args.m, q_max=q_max)
        outputs = {"period": traj.period, "minimal_q": minimal, "table": table}
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["q", "feasible", "rank", "rank_augmented"])
        for row in table:
            w.writerow([row["q"], row["feasible"], row["rank"], row["rank_augmented"]])
        csv_text = buf.getvalue()
    elif args.mode == "edmd":
        _need_pm(args)
        traj = simulate((args.p, args.m))
        q, cs = minimal_dimension(traj)
        inputs.update(p=args.p, m=args.m)
        outputs = {"q_min": q, "period": traj.period, "alpha": list(cs.alpha)}
        csv_text = matrix_to_csv(build_hankel(traj, q).Z)
    else:
        if args.seq:
            named = [(Path(s).stem, read_sequence(s)) for s in args.seq]
            inputs["seq"] = [Path(s).name for s in args.seq]
        else:
            _need_pm(args)
            # two periods, so a recurrence of the period's length can be certified
            named = [(f"p{args.p}_m{args.m}", list(simulate((args.p, args.m)).values))]
            inputs.update(p=args.p, m=args.m)
        reports = [(name, compare_complexity(seq)) for name, seq in named]
        outputs = {"rows": [dict(id=name, **rep.to_dict()) for name, rep in reports]}
        csv_text = complexity_csv(reports)
    elapsed = (time.perf_counter() - start) * 1e3
    if args.format == "csv":
        _emit(csv_text, args.out)
    else:
        report = ExperimentReport("analyze", inputs, outputs, elapsed)
        _emit(report.to_json(timing=not args.no_timing), args.out)
    return EXIT_OK


# -- parser -------------------------------------------------------------------


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--out", help="write to this file instead of stdout")
    sp.add_argument("--guard", type=int, help=f"largest modulus allowed (default {DEFAULT_GUARD})")
    sp.add_argument("--no-guard", action="store_true", help="disable the modulus guard")


def build_parser() -> argparse.ArgumentParser:
    from . import __version__

    parser = argparse.ArgumentParser(
        prog="koopcrypt",
        description="Linear (Koopman) representations of modular exponentiation.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate", help="print the orbit x_{k+1} = m x_k mod p")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--steps", type=int, help="default: two Carmichael periods")
    sp.add_argument("--x0", type=int, default=1)
    sp.add_argument("--format", choices=["text", "json", "csv"], default="text")
    sp.add_argument("--no-timing", action="store_true", help="omit timing_ms from JSON")
    _add_common(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("recover", help="recover a DH exponent or an RSA private key")
    sp.add_argument("--scheme", choices=["dh", "rsa"], required=True)
    sp.add_argument("--p", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--c", type=int, help="ciphertext m**e mod p")
    sp.add_argument("--p1", type=int)
    sp.add_argument("--p2", type=int)
    sp.add_argument("--e", type=int, help="RSA public exponent")
    sp.add_argument("--no-timing", action="store_true")
    _add_common(sp)
    sp.set_defaults(func=cmd_recover)

    sp = sub.add_parser("bench", help="time DH exponent recovery per prime (CSV)")
    sp.add_argument("--primes", required=True, help="97, 5,7,11 or 5-199")
    sp.add_argument("--sample", default="all", help="'all' generators or a count")
    sp.add_argument("--repetitions", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    _add_common(sp)
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("analyze", help="dimension table, EDMD fit or complexity comparison")
    sp.add_argument("--mode", choices=["dimension", "edmd", "lincomp"], required=True)
    sp.add_argument("--p", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--q-max", type=int)
    sp.add_argument("--seq", nargs="+", help="files of newline-separated integers")
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.add_argument("--no-timing", action="store_true")
    _add_common(sp)
    sp.set_defaults(func=cmd_analyze)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GuardExceeded as exc:
        print(f"koopcrypt: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (RecoveryError, InversionError, InfeasibleDimensionError,
            NonDiagonalizableError, RankDeficientError) as exc:
        print(f"koopcrypt: recovery failed: {exc}", file=sys.stderr)
        return EXIT_RECOVERY
    except (InputError, DomainError, TrajectoryRangeError, KoopcryptError, ValueError) as exc:
        print(f"koopcrypt: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
