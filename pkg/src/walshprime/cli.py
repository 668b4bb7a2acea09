"""Command-line interface: sieve, report, verify.

Exit codes: 0 success, 2 configuration error, 3 capacity refusal,
4 verification failure.  Human-oriented progress goes to stderr; data
(file paths, the verify JSON document) goes to stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from filelock import FileLock

from .arithmetic import DEFAULT_SEGMENT_SIZE, VonMangoldtTable, sieve_von_mangoldt
from .cache import CacheFormatError, default_cache_path, read_vector, write_vector
from .config import FORMATS, RunConfig, max_n_for_memory
from .cube import DEFAULT_MAX_N
from .errors import CapacityError, ConfigError, WalshPrimeError
from .monotone import DEFAULT_ZOO_SPECS
from .reporting import ReportBundle, build_report, write_csv, write_json
from .verify import LEVELS, run_verification

DEFAULT_MAX_MEMORY_MIB = 512  # table bytes for n = 26


def _log(message: str) -> None:
    print(message, file=sys.stderr)


def ensure_cached(
    n: int,
    cache_dir: Path,
    *,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    max_n: int = DEFAULT_MAX_N,
) -> tuple[Path, str, VonMangoldtTable]:
    """Return (path, action, table) with action one of "hit",
    "rebuilt" (checksum failure), "created".  A file lock serializes
    writers; readers of a finished file need no lock."""
    path = default_cache_path(cache_dir, n)
    path.parent.mkdir(parents=True, exist_ok=True)
    with FileLock(str(path) + ".lock"):
        action = "created"
        if path.exists():
            try:
                vec = read_vector(path)
                return path, "hit", VonMangoldtTable(vec)
            except CacheFormatError as exc:
                _log(f"warning: cache invalid, re-sieving: {exc}")
                action = "rebuilt"
        table = sieve_von_mangoldt(n, segment_size=segment_size, max_n=max_n)
        write_vector(path, table.vector)
    return path, action, table


def cmd_sieve(args: argparse.Namespace) -> int:
    max_n = max_n_for_memory(args.max_memory)
    for n in _parse_n_list(args.n):
        path, action, _ = ensure_cached(
            n, Path(args.cache_dir), segment_size=args.segment_size, max_n=max_n
        )
        _log(f"sieve n={n}: {action}")
        print(path)
    return 0


def _parse_n_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(piece) for piece in text.split(",") if piece.strip())
    except ValueError:
        raise ConfigError(f"--n expects comma-separated integers, got {text!r}") from None
    if not values:
        raise ConfigError("--n expects at least one dimension")
    return values


def _parse_zoo(raw: list[str] | None) -> tuple[str, ...]:
    if raw is None:
        return DEFAULT_ZOO_SPECS
    out: list[str] = []
    for chunk in raw:
        out.extend(piece.strip() for piece in chunk.split(",") if piece.strip())
    return tuple(out)


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        n_values=_parse_n_list(args.n),
        zoo=_parse_zoo(args.zoo),
        K=args.K,
        n0=args.n0,
        fmt=args.format,
        cache_dir=Path(args.cache_dir) if args.cache_dir else None,
        out_dir=Path(args.out_dir),
        seed=args.seed,
        max_n=max_n_for_memory(args.max_memory),
        sieve_missing=not args.no_sieve,
        segment_size=args.segment_size,
        figures=not args.no_figures,
    )
    cfg.validate()
    return cfg


def _make_table_provider(cfg: RunConfig):
    tables: dict[int, VonMangoldtTable] = {}

    def provide(n: int) -> VonMangoldtTable:
        if n in tables:
            return tables[n]
        if cfg.cache_dir is None:
            table = sieve_von_mangoldt(n, segment_size=cfg.segment_size, max_n=cfg.max_n)
        else:
            path = default_cache_path(cfg.cache_dir, n)
            if not cfg.sieve_missing:
                try:
                    table = VonMangoldtTable(read_vector(path))
                except (FileNotFoundError, CacheFormatError) as exc:
                    raise ConfigError(
                        f"no usable cache for n={n} at {path} and --no-sieve is set: {exc}"
                    ) from None
            else:
                _, _, table = ensure_cached(
                    n, cfg.cache_dir, segment_size=cfg.segment_size, max_n=cfg.max_n
                )
        tables[n] = table
        return table

    return provide


def cmd_report(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    bundle = build_report(cfg, _make_table_provider(cfg))
    written: list[Path] = []
    if cfg.fmt == "csv":
        written.extend(write_csv(bundle, cfg.out_dir))
    else:
        written.append(write_json(bundle, cfg.out_dir))
    if cfg.figures:
        from .figures import render_report_figures  # lazy: pulls in matplotlib

        written.extend(render_report_figures(bundle, cfg.out_dir / "figures"))
    _print_headlines(bundle)
    for path in written:
        print(path)
    return 0


def _print_headlines(bundle: ReportBundle) -> None:
    for run in bundle.runs:
        check = run.mean_check
        _log(
            f"n={run.n}: smoothed mean {check.mean:.4f} supports {check.supported}, "
            f"low-level mass {run.low_mass.mass:.3e}, "
            f"{len(run.correlations)} zoo rows"
        )
    for trend in bundle.trends:
        _log(f"trend {trend.metric}: {trend.flag}")


def cmd_verify(args: argparse.Namespace) -> int:
    def progress(result) -> None:
        status = "PASS" if result.passed else "FAIL"
        _log(f"{status} {result.name}: {result.detail} [{result.seconds:.2f}s]")

    report = run_verification(args.level, progress=progress)
    doc = {
        "level": report.level,
        "passed": report.passed,
        "checks": [
            {
                "name": r.name,
                "passed": r.passed,
                "detail": r.detail,
                "seconds": round(r.seconds, 3),
            }
            for r in report.results
        ],
    }
    json.dump(doc, sys.stdout, indent=2)
    print()
    return 0 if report.passed else 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="walshprime",
        description=(
            "Materialize the von Mangoldt table on the Boolean cube, smooth it, "
            "transform it, and test it against a zoo of monotone functions."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--max-memory", type=int, default=DEFAULT_MAX_MEMORY_MIB,
                       metavar="MIB", help="per-table memory cap in MiB (default 512, i.e. n <= 26)")
        p.add_argument("--segment-size", type=int, default=DEFAULT_SEGMENT_SIZE,
                       help="sieve segment length (default 2^20)")

    p_sieve = sub.add_parser("sieve", help="sieve tables into the disk cache")
    p_sieve.add_argument("--n", required=True, help="comma-separated cube dimensions")
    p_sieve.add_argument("--cache-dir", required=True, help="cache directory")
    add_common(p_sieve)
    p_sieve.set_defaults(func=cmd_sieve)

    p_report = sub.add_parser("report", help="build the full analysis report")
    p_report.add_argument("--n", required=True, help="comma-separated cube dimensions")
    p_report.add_argument("--zoo", action="append", default=None,
                          help="zoo member spec(s), comma-separated or repeated; "
                               "empty string selects no members (default: the standard zoo)")
    p_report.add_argument("--K", type=float, default=4.0, help="tail cutoff multiplier (default 4)")
    p_report.add_argument("--n0", type=int, default=2, help="low-level mass depth (default 2)")
    p_report.add_argument("--format", choices=FORMATS, default="csv")
    p_report.add_argument("--cache-dir", default=None, help="optional table cache directory")
    p_report.add_argument("--out-dir", default="reports", help="output directory (default ./reports)")
    p_report.add_argument("--seed", type=int, default=0,
                          help="seed for sampled checks and seedless dnf specs (default 0)")
    p_report.add_argument("--no-sieve", action="store_true",
                          help="fail instead of sieving when a table is missing from the cache")
    p_report.add_argument("--no-figures", action="store_true", help="skip figure rendering")
    add_common(p_report)
    p_report.set_defaults(func=cmd_report)

    p_verify = sub.add_parser("verify", help="run the self-verification suite")
    p_verify.add_argument("--level", choices=LEVELS, default="quick")
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        _log(f"error: {exc}")
        return 2
    except CapacityError as exc:
        _log(f"capacity: {exc}")
        return 3
    except WalshPrimeError as exc:
        _log(f"error: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
