"""``ddk``: command-line front end.

Exit codes: 0 success, 2 usage error, 3 resource or budget refusal,
4 verification failure. Data goes to stdout, progress and diagnostics to
stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from dataclasses import dataclass

from . import congruence as C
from . import engines as E
from ._backend import backend_name, set_threads
from .errors import CRTError, DedekindError, NotKnownError, ResourceLimitError
from .mbf import MAX_ARITY
from .storage import CacheStore, write_lattice
from .symmetry import histogram_csv, no_symmetry_count

EXIT_OK, EXIT_USAGE, EXIT_RESOURCE, EXIT_VERIFY = 0, 2, 3, 4

# offset k of the cube B^k each method sums over, and the largest base arity
# its tables support
_METHODS = {"g2": (2, MAX_ARITY), "h3": (3, 4), "f4": (4, 4)}


@dataclass(frozen=True)
class RunConfig:
    cache_dir: str | None
    threads: int
    fmt: str
    budget: int

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        return cls(args.cache_dir, args.threads, args.format, args.budget)


class UsageError(DedekindError):
    pass


def _progress(what: str, done: int, total: int) -> None:
    print(f"[{what}] {done}/{total}", file=sys.stderr, flush=True)


def _context(cfg: RunConfig, store: CacheStore, n: int) -> E.KernelContext:
    return E.KernelContext.build(n, store=store, budget=cfg.budget, progress=_progress)


def _emit(record: dict, fmt: str, rows: list[list] | None = None) -> None:
    """Print one record; ``rows`` (header first) replaces it for csv/plain."""
    if fmt == "json":
        print(json.dumps(_stringify(record), indent=None))
        return
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if rows:
            w.writerows(rows)
        else:
            w.writerow(list(record))
            w.writerow([_plain(v) for v in record.values()])
        sys.stdout.write(buf.getvalue())
        return
    if rows:
        for row in rows[1:]:
            print(" ".join(str(v) for v in row))
    else:
        for k, v in record.items():
            print(f"{k}: {_plain(v)}")


def _stringify(v):
    # integers travel as decimal strings so JSON readers never round them
    if isinstance(v, bool):
        return v
    if isinstance(v, int):
        return str(v)
    if isinstance(v, dict):
        return {str(k): _stringify(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_stringify(x) for x in v]
    return v


def _plain(v) -> str:
    if isinstance(v, dict):
        return ",".join(f"{k}:{x}" for k, x in v.items())
    if isinstance(v, (list, tuple)):
        return ",".join(str(x) for x in v)
    return str(v)


def _base(target: int, method: str) -> int:
    k, top = _METHODS[method]
    n = target - k
    if n < 0:
        raise UsageError(f"method {method} needs target >= {k}")
    if n > top:
        raise ResourceLimitError(f"method {method} supports targets up to {top + k}")
    return n


# -- commands ------------------------------------------------------------------

def cmd_enumerate(args, cfg, store):
    table = store.table(args.n)
    if args.out:
        write_lattice(args.out, table)
    _emit({"n": args.n, "count": len(table)}, cfg.fmt)


def cmd_classes(args, cfg, store):
    orbits = store.orbits(args.n)
    record = {"n": args.n, "classes": orbits.r}
    if args.n >= 1:
        record["no_symmetry"] = no_symmetry_count(orbits)
    if not args.hist:
        _emit(record, cfg.fmt)
        return
    record["histogram"] = orbits.histogram()
    if cfg.fmt == "csv":
        sys.stdout.write(histogram_csv(orbits))
    elif cfg.fmt == "plain":
        print(f"classes: {orbits.r}")
        for k, v in record["histogram"].items():
            print(f"gamma {k}: {v}")
    else:
        _emit(record, cfg.fmt)


def cmd_compute(args, cfg, store):
    t0 = time.perf_counter()
    if args.method == "direct":
        if args.target > MAX_ARITY:
            raise ResourceLimitError(f"direct enumeration is limited to targets <= {MAX_ARITY}")
        value = len(store.table(args.target))
    else:
        ctx = _context(cfg, store, _base(args.target, args.method))
        value = {"g2": E.d_via_g, "h3": E.d_via_h, "f4": E.d_via_f}[args.method](ctx)
    record = {
        "target": args.target,
        "method": args.method.upper(),
        "value": value,
        "elapsed_ms": int((time.perf_counter() - t0) * 1000),
    }
    _emit(record, cfg.fmt)


def cmd_residue(args, cfg, store):
    m = args.mod
    if m < 2:
        raise UsageError("modulus must be at least 2")
    method = args.method
    if method == "p4mod3":
        if m != 3:
            raise UsageError("p4mod3 only gives residues modulo 3")
        if args.target < 3:
            raise UsageError("p4mod3 needs target >= 3")
        witness = E.residue_via_p4(_context(cfg, store, args.target - 3))
    elif method == "lambda2":
        if m != 2:
            raise UsageError("lambda2 only gives residues modulo 2")
        if args.target > MAX_ARITY:
            raise ResourceLimitError(f"lambda2 is limited to targets <= {MAX_ARITY}")
        witness = E.residue_via_selfdual(_context(cfg, store, args.target))
    else:
        ctx = _context(cfg, store, _base(args.target, method))
        fn = {"g2": E.residue_via_g, "h3": E.residue_via_h, "f4": E.residue_via_f}[method]
        witness = fn(ctx, m, reduce=args.reduce)
    record = witness.to_dict()
    if args.target < len(C.DEDEKIND):
        record["known_residue"] = str(C.known_residue(args.target, m))
    if cfg.fmt == "json":
        print(json.dumps(record))
    else:
        _emit(record, cfg.fmt)


def cmd_p4(args, cfg, store):
    if args.n > 5:
        raise ResourceLimitError("the 4-chain pair sum is limited to n <= 5")
    ctx = _context(cfg, store, args.n)
    value = E.p4_count(ctx)
    record = {"n": args.n, "p4": value}
    if args.matrix_check:
        cube = E.matrix_cube_sum(ctx)
        record["matrix_cube_sum"] = cube
        record["agree"] = cube == value
        _emit(record, cfg.fmt)
        if cube != value:
            raise _VerifyFailed("matrix cube disagrees with the pair sum")
        return
    _emit(record, cfg.fmt)


def cmd_crt(args, cfg, store):
    try:
        pairs = C.parse_pairs(args.pairs)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    system = C.ResidueSystem(tuple(pairs), ("command line",))
    if cfg.fmt == "json":
        print(json.dumps(system.to_dict()))
    elif cfg.fmt == "csv":
        _emit({"modulus": system.modulus, "residue": system.residue}, "csv")
    else:
        print(f"{system.modulus}:{system.residue}")


class _VerifyFailed(Exception):
    pass


def cmd_verify(args, cfg, store):
    from . import verify

    def show(check):
        status = "PASS" if check.ok else "FAIL"
        line = f"{status} {check.name} ({check.seconds:.2f}s)"
        if not check.ok:
            line += f": expected {check.expected!r}, got {check.got!r}"
        print(line, flush=True)

    results = verify.run(args.suite, store=store, budget=cfg.budget, progress=_progress, on_check=show)
    failed = [c for c in results if not c.ok]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    if failed:
        raise _VerifyFailed(f"{len(failed)} checks failed")


def cmd_tables(args, cfg, store):
    consts = C.published_constants()
    if cfg.fmt == "json":
        out = {
            k: {"value": _stringify(g.value), "source": g.source, "desk_reproducible": g.desk_reproducible}
            for k, g in consts.items()
        }
        print(json.dumps(out, indent=2))
        return
    rows = [["name", "desk_reproducible", "value", "source"]]
    rows += [[k, g.desk_reproducible, _plain(g.value), g.source] for k, g in consts.items()]
    if cfg.fmt == "csv":
        _emit({}, "csv", rows)
    else:
        for name, rep, value, source in rows[1:]:
            flag = "" if rep else " [cited]"
            print(f"{name}{flag}: {value}")
            print(f"    {source}")


# -- parser --------------------------------------------------------------------

def _arity(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("arity must be non-negative")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ddk", description="Monotone Boolean functions and Dedekind numbers.")
    p.add_argument("--format", choices=("json", "csv", "plain"), default="plain")
    p.add_argument("--cache-dir", default=None, help="table cache (default $DDK_CACHE_DIR or ./.ddk-cache)")
    p.add_argument("--threads", type=int, default=0, help="worker threads, 0 = all cores")
    p.add_argument("--budget", type=int, default=E.DEFAULT_BUDGET, help="largest kernel evaluation count to attempt")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("enumerate", help="list D_n")
    s.add_argument("--n", type=_arity, required=True)
    s.add_argument("--out", help="write the lattice as a DDKD file")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("classes", help="permutation classes of D_n")
    s.add_argument("--n", type=_arity, required=True)
    s.add_argument("--hist", action="store_true", help="orbit size histogram")
    s.set_defaults(func=cmd_classes)

    s = sub.add_parser("compute", help="exact d_target")
    s.add_argument("--target", type=_arity, required=True)
    s.add_argument("--method", choices=("g2", "h3", "f4", "direct"), default="g2")
    s.set_defaults(func=cmd_compute)

    s = sub.add_parser("residue", help="d_target mod m from a reduced sum")
    s.add_argument("--target", type=_arity, required=True)
    s.add_argument("--mod", type=int, required=True)
    s.add_argument("--method", choices=("g2", "h3", "f4", "p4mod3", "lambda2"), default="h3")
    s.add_argument("--reduce", action="store_true", help="reduce while accumulating (sum field is then reduced)")
    s.set_defaults(func=cmd_residue)

    s = sub.add_parser("p4", help="4-element multichains in D_n")
    s.add_argument("--n", type=_arity, required=True)
    s.add_argument("--matrix-check", action="store_true")
    s.set_defaults(func=cmd_p4)

    s = sub.add_parser("crt", help="combine residues")
    s.add_argument("--pairs", required=True, help="modulus:residue list, e.g. 2:0,3:0,5:1,7:6")
    s.set_defaults(func=cmd_crt)

    s = sub.add_parser("verify", help="run a reproduction suite")
    s.add_argument("--suite", choices=("quick", "paper", "oracle"), default="quick")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("tables", help="published reference values")
    s.add_argument("--emit", action="store_true", help="print every table")
    s.set_defaults(func=cmd_tables)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    cfg = RunConfig.from_args(args)
    threads = set_threads(cfg.threads)
    logging.getLogger(__name__).info("backend %s, %d threads", backend_name(), threads)
    store = CacheStore(cfg.cache_dir)
    try:
        args.func(args, cfg, store)
    except _VerifyFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (UsageError, CRTError, NotKnownError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
