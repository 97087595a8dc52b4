"""Command-line front end.

    boolalt measure 3:E8
    boolalt verify exhaustive:3 --all
    boolalt comm 2:E --and

Settings resolve as flag, then ``BOOLALT_*`` environment variable, then
default: ``BOOLALT_FORMAT``, ``BOOLALT_JOBS``, ``BOOLALT_OUT`` and
``BOOLALT_CAP_<NAME>`` (for example ``BOOLALT_CAP_DT=8``).

Exit codes: 0 ok, 1 a theorem check failed, 2 usage or parse error,
3 a cap was exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field

from boolalt import comm, extremal, measures, spectra, verify
from boolalt.core import CapExceeded, ParseError, TruthTable, format_table, negate_output, parse, point_str

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
ENV_PREFIX = "BOOLALT_"
FORMATS = ("text", "json", "csv")


class UsageError(Exception):
    pass


@dataclass
class Config:
    caps: dict[str, int] = field(default_factory=lambda: dict(verify.DEFAULT_CAPS))
    jobs: int = os.cpu_count() or 1
    format: str = "text"
    out: str | None = None


def _env_int(name: str, env) -> int | None:
    raw = env.get(ENV_PREFIX + name)
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{ENV_PREFIX}{name}={raw!r} is not an integer") from None


def resolve_config(args: argparse.Namespace, env=None) -> Config:
    env = os.environ if env is None else env
    cfg = Config()
    fmt = args.format or env.get(ENV_PREFIX + "FORMAT") or cfg.format
    if fmt not in FORMATS:
        raise UsageError(f"format must be one of {FORMATS}, got {fmt!r}")
    cfg.format = fmt
    cfg.out = args.out or env.get(ENV_PREFIX + "OUT") or None
    jobs = args.jobs if args.jobs is not None else _env_int("JOBS", env)
    if jobs is not None:
        if jobs < 1:
            raise UsageError("jobs must be at least 1")
        cfg.jobs = jobs
    for key in verify.HARD_CAPS:
        value = getattr(args, f"cap_{key}", None)
        if value is None:
            value = _env_int("CAP_" + key.upper(), env)
        if value is not None:
            cfg.caps[key] = value
    try:
        cfg.caps = verify.resolve_caps(cfg.caps)
    except CapExceeded as exc:
        raise UsageError(str(exc)) from None
    return cfg


# --- output ---------------------------------------------------------------------

def _flatten(data, prefix: str = "") -> list[tuple[str, object]]:
    if isinstance(data, dict):
        rows = []
        for k, v in data.items():
            rows.extend(_flatten(v, f"{prefix}.{k}" if prefix else str(k)))
        return rows
    if isinstance(data, list) and any(isinstance(v, (dict, list)) for v in data):
        rows = []
        for i, v in enumerate(data):
            rows.extend(_flatten(v, f"{prefix}[{i}]"))
        return rows
    if isinstance(data, list):
        return [(prefix, " ".join(map(str, data)))]
    return [(prefix, data)]


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def render(data: dict, fmt: str, csv_rows: list[list] | None = None) -> str:
    if fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    if fmt == "csv":
        rows = csv_rows if csv_rows is not None else [["key", "value"], *map(list, _flatten(data))]
        return _csv(rows)
    flat = _flatten({k: v for k, v in data.items() if k != "schema_version"})
    width = max((len(k) for k, _ in flat), default=0)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in flat)


def emit(text: str, cfg: Config) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- commands -------------------------------------------------------------------

def _parse_function(spec: str) -> TruthTable:
    return parse(spec)


def _verdict_json(v: verify.TheoremVerdict | None):
    return None if v is None else v.to_json()


def cmd_measure(spec: str, cfg: Config) -> tuple[dict, int]:
    t = _parse_function(spec)
    report = measures.measure_report(t, {k: cfg.caps[k] for k in measures.DEFAULT_CAPS})
    terms = extremal.find_terms(t)
    verdicts = verify.check_all(t, None, cfg.caps)
    failed = [tid for tid, v in verdicts.items() if v is not None and not v.holds]
    data = {
        "schema_version": verify.SCHEMA_VERSION,
        "function": format_table(t),
        "n": t.n,
        "measures": report.to_json(),
        "spectra": {
            "deg2": spectra.deg2(t),
            "mono": spectra.mono_sparsity(t),
            "fs": spectra.fourier_sparsity(t),
            "anf": sorted(spectra.anf(t).support()),
        },
        "terms": {
            "max_terms": [point_str(u, t.n) for u in terms.max_terms],
            "min_terms": [point_str(u, t.n) for u in terms.min_terms],
        },
        "verdicts": {tid: _verdict_json(v) for tid, v in verdicts.items()},
        "failed": failed,
    }
    return data, EXIT_VIOLATION if failed else EXIT_OK


def parse_space(items: list[str]) -> verify.Space:
    if len(items) == 1 and items[0].startswith("exhaustive:"):
        try:
            n = int(items[0].split(":", 1)[1])
        except ValueError:
            raise ParseError(f"bad exhaustive space {items[0]!r}") from None
        return verify.Space.exhaustive(n)
    if any(i.startswith("exhaustive:") for i in items):
        raise ParseError("an exhaustive space cannot be mixed with other functions")
    for item in items:
        parse(item)  # fail early, before workers start
    return verify.Space.of(items)


def cmd_verify(items: list[str], theorems: list[str] | None, cfg: Config) -> tuple[verify.SweepResult, int]:
    space = parse_space(items)
    try:
        ids = verify.resolve_theorems(theorems)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    result = verify.sweep(space, ids, jobs=cfg.jobs, caps=cfg.caps)
    return result, EXIT_VIOLATION if result.violations else EXIT_OK


def _comm_side(t: TruthTable, composition: str, cfg: Config) -> dict:
    m = comm.build_comm_matrix(t, composition)
    rank = comm.exact_rank(m)
    sparsity = spectra.fourier_sparsity(t) if composition == comm.XOR else spectra.mono_sparsity(t)
    side: dict = {
        "rank": rank,
        "sparsity": sparsity,
        "identity_ok": rank == sparsity,
    }
    if composition == comm.AND:
        target = t if t(0) == 0 else None
        if target is None:
            side["cover_note"] = "f(0) = 1: min-term cover built for the negation (0-entries of f)"
            target = negate_output(t)
        cover = comm.minterm_cover(target)
        checks = comm.check_minterm_cover(target, cover)
        side["minterm_cover"] = {k: checks[k] for k in
                                 ("size", "depth", "alt", "valid", "minterms_within_mono", "size_inequality",
                                  "depth_within_alt")}
    if t.n <= cfg.caps["cover"]:
        side["cover_number_1"] = comm.exact_cover_number(m, 1)
    ok, cost = comm.tree_protocol_correct(t, composition)
    side["tree_protocol"] = {"correct": ok, "worst_cost": cost, "two_dt": 2 * measures.dt_depth(t)}
    return side


def cmd_comm(spec: str, compositions: list[str], cfg: Config) -> tuple[dict, int]:
    t = _parse_function(spec)
    if t.n > cfg.caps["matrix"]:
        raise CapExceeded(f"communication matrices are capped at n = {cfg.caps['matrix']}, got {t.n}")
    data: dict = {"schema_version": verify.SCHEMA_VERSION, "function": format_table(t), "n": t.n}
    bad = False
    for composition in compositions:
        side = _comm_side(t, composition, cfg)
        bad |= not side["identity_ok"] or not side["tree_protocol"]["correct"]
        bad |= side["tree_protocol"]["worst_cost"] > side["tree_protocol"]["two_dt"]
        if "minterm_cover" in side:
            mc = side["minterm_cover"]
            bad |= not (mc["valid"] and mc["minterms_within_mono"] and mc["size_inequality"]
                        and mc["depth_within_alt"])
        data[composition] = side
    if t.n <= comm.LOVASZ_CAP:
        data["lovasz"] = comm.lovasz_bound_report(t)
    return data, EXIT_VIOLATION if bad else EXIT_OK


# --- argument parsing ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, help="output format (default text)")
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--jobs", type=int, help="worker processes for sweeps (default: all cores)")
    for key in verify.HARD_CAPS:
        common.add_argument(f"--cap-{key}", type=int, dest=f"cap_{key}", metavar="N",
                            help=f"arity cap for {key} (hard limit {verify.HARD_CAPS[key]})")

    parser = argparse.ArgumentParser(prog="boolalt", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", parents=[common], help="all measures and verdicts for one function")
    p.add_argument("function", help="<n>:<HEX> or family:name(k=v,...)[#seed]")

    p = sub.add_parser("verify", parents=[common], help="sweep theorem checks over a space")
    p.add_argument("space", nargs="+", help="exhaustive:<n> or a list of function specs")
    p.add_argument("--thm", action="append", default=None,
                   help="theorem id, group alias or 'all'; repeatable or comma separated")
    p.add_argument("--all", action="store_true", help="check every theorem (the default)")
    p.add_argument("--list", action="store_true", help="list theorem ids and exit")

    p = sub.add_parser("comm", parents=[common], help="rank, cover and protocol report")
    p.add_argument("function")
    p.add_argument("--and", dest="compositions", action="append_const", const=comm.AND)
    p.add_argument("--xor", dest="compositions", action="append_const", const=comm.XOR)
    return parser


def _theorem_list(args) -> list[str] | None:
    if args.all or not args.thm:
        return None
    names = [n.strip() for chunk in args.thm for n in chunk.split(",") if n.strip()]
    return names or None


def main(argv: list[str] | None = None, env=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = resolve_config(args, env)
        if args.command == "measure":
            data, code = cmd_measure(args.function, cfg)
            emit(render(data, cfg.format), cfg)
        elif args.command == "verify":
            if args.list:
                emit("".join(f"{th.id}\t{th.summary}\n" for th in verify.THEOREMS.values()), cfg)
                return EXIT_OK
            result, code = cmd_verify(args.space, _theorem_list(args), cfg)
            emit(render(result.to_json(), cfg.format, result.csv_rows() if cfg.format == "csv" else None), cfg)
        else:
            compositions = args.compositions or list(comm.COMPOSITIONS)
            data, code = cmd_comm(args.function, list(dict.fromkeys(compositions)), cfg)
            emit(render(data, cfg.format), cfg)
        return code
    except (UsageError, ParseError) as exc:
        print(f"boolalt: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceeded as exc:
        print(f"boolalt: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ValueError, IndexError) as exc:
        print(f"boolalt: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
