"""Command-line interface.

Exit codes:
    0  success
    1  unexpected internal error
    2  bad command-line usage
    3  parse error in an input file
    4  results do not match the expected layout
    5  matching solver capacity exceeded
    6  file could not be read or written
    7  syndrome graph construction failed
    8  decoding failed
    9  --layout-check found an unexpected CX count
"""

from __future__ import annotations

import argparse
import datetime
import json
import logging
import sys
from pathlib import Path

from repbench import archive as archive_mod
from repbench import bench, rep_code
from repbench.archive import ArchiveError, ParseError
from repbench.decoders import CapacityError, DecodingError
from repbench.rep_code import LayoutError
from repbench.syndrome_graph import (
    GraphConstructionError,
    build_graph,
    edge_probability_summary,
    format_summary,
    weight_syndrome_graph,
)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_LAYOUT = 4
EXIT_CAPACITY = 5
EXIT_IO = 6
EXIT_GRAPH = 7
EXIT_DECODE = 8
EXIT_LAYOUT_CHECK = 9


def _probability(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"{text} is not in [0, 1]")
    return value


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _entry(archive, n: int | None) -> int:
    if not archive.entries:
        raise ArchiveError("archive is empty")
    if n is None:
        return max(archive.entries)
    if n not in archive.entries:
        raise ArchiveError(f"archive has no entry for n={n}")
    return n


def cmd_bench(args) -> int:
    config = bench.BenchConfig(
        n_min=args.n_min, n_max=args.n_max, T=args.rounds, rho_meas=args.rho_meas,
        rho_gate=args.rho_gate, shots=args.shots, seed=args.seed, decoder=args.decoder,
        weighting=args.weighting, n_step=args.n_step, table_shots=args.table_shots,
    )
    result = bench.bench_run(config, check_layout=args.layout_check)
    if args.timestamp:
        result.archive.timestamp = datetime.datetime.now(datetime.timezone.utc).isoformat()
    written = bench.write_bench(result, args.out, dot=args.dot, plot_script=args.plot_script)
    sys.stdout.write(bench.reports_csv(result.reports))
    for path in written:
        logging.getLogger(__name__).info("wrote %s", path)
    return EXIT_OK


def cmd_process(args) -> int:
    archive = archive_mod.read_archive(args.archive, args.format)
    out = {}
    for n in sorted(archive.entries):
        code = rep_code.build(n, archive.rounds[n])
        out[str(n)] = {"T": archive.rounds[n], "results": code.process_results(archive.entries[n])}
    _write_or_print(json.dumps(out, indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_OK


def cmd_decode(args) -> int:
    archive = archive_mod.read_archive(args.archive, args.format)
    table = archive_mod.read_archive(args.table) if args.table else None
    if args.decoder == "lookup" and table is None:
        raise DecodingError("lookup decoding needs --table")
    reports = {}
    for n in sorted(archive.entries):
        entry_table = None
        if table is not None:
            if n not in table.entries:
                raise ArchiveError(f"lookup table has no entry for n={n}")
            entry_table = table.entries[n]
        reports[n] = bench.decode_entry(n, archive.rounds[n], archive.entries[n],
                                        args.decoder, args.weighting, entry_table)
    if args.out:
        bench.emit_reports(args.out, reports)
    sys.stdout.write(bench.reports_csv(reports))
    return EXIT_OK


def cmd_graph(args) -> int:
    if args.archive:
        archive = archive_mod.read_archive(args.archive)
        n = _entry(archive, args.n)
        code = rep_code.build(n, archive.rounds[n])
        graph = weight_syndrome_graph(build_graph(code), code.process_results(archive.entries[n])["0"])
    else:
        graph = build_graph(rep_code.build(args.n or 3, args.rounds))
    text = graph.to_dot() if args.export == "dot" else json.dumps(graph.to_json(), indent=2) + "\n"
    _write_or_print(text, args.out)
    return EXIT_OK


def cmd_ingest(args) -> int:
    archive = archive_mod.read_archive(args.input, args.format)
    if args.out:
        archive_mod.write_archive(archive, args.out, args.to)
    else:
        text = archive_mod.to_json(archive) if args.to == "json" else archive_mod.to_dict_literal(archive) + "\n"
        sys.stdout.write(text)
    return EXIT_OK


def cmd_stats(args) -> int:
    archive = archive_mod.read_archive(args.archive, args.format)
    n = _entry(archive, args.n)
    code = rep_code.build(n, archive.rounds[n])
    graph = weight_syndrome_graph(build_graph(code), code.process_results(archive.entries[n])["0"])
    _write_or_print(format_summary(edge_probability_summary(graph)), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="repbench", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bench", help="sample, process and decode a range of code sizes")
    p.add_argument("--n-min", type=int, default=3)
    p.add_argument("--n-max", type=int, default=7)
    p.add_argument("--n-step", type=int, default=1)
    p.add_argument("--rounds", type=int, default=1)
    p.add_argument("--rho-meas", type=_probability, default=0.01)
    p.add_argument("--rho-gate", type=_probability, default=0.01)
    p.add_argument("--shots", type=int, default=1024)
    p.add_argument("--table-shots", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--decoder", choices=["matching", "lookup"], default="matching")
    p.add_argument("--weighting", choices=["unit", "data"], default="unit")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--layout-check", action="store_true", help="assert 2(n-1)T CX gates per circuit")
    p.add_argument("--dot", action="store_true", help="also export each decoding graph as DOT")
    p.add_argument("--plot-script", action="store_true", help="also write a matplotlib plotting script")
    p.add_argument("--timestamp", action="store_true", help="record the wall-clock time in the archive")
    p.set_defaults(func=cmd_bench)

    formats = ["auto", "json", "dict-literal"]

    p = sub.add_parser("process", help="convert raw results to processed syndrome strings")
    p.add_argument("archive")
    p.add_argument("--format", choices=formats, default="auto")
    p.add_argument("--out")
    p.set_defaults(func=cmd_process)

    p = sub.add_parser("decode", help="compute logical error probabilities for an archive")
    p.add_argument("archive")
    p.add_argument("--format", choices=formats, default="auto")
    p.add_argument("--decoder", choices=["matching", "lookup"], default="matching")
    p.add_argument("--weighting", choices=["unit", "data"], default="unit")
    p.add_argument("--table", help="archive of reference counts for lookup decoding")
    p.add_argument("--out", help="directory for CSV/JSON reports")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("graph", help="export the decoding graph")
    p.add_argument("--n", type=int)
    p.add_argument("--rounds", type=int, default=1)
    p.add_argument("--archive", help="weight edges from this archive's logical-0 results")
    p.add_argument("--export", choices=["dot", "json"], default="dot")
    p.add_argument("--out")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("ingest", help="read a saved results file and re-emit it")
    p.add_argument("input")
    p.add_argument("--format", choices=formats, default="auto")
    p.add_argument("--to", choices=["json", "dict-literal"], default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("stats", help="summarize estimated edge error probabilities")
    p.add_argument("archive")
    p.add_argument("--format", choices=formats, default="auto")
    p.add_argument("--n", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ParseError as exc:
        code, msg = EXIT_PARSE, f"parse error: {exc}"
    except (ArchiveError, LayoutError) as exc:
        code, msg = EXIT_LAYOUT, f"layout error: {exc}"
    except CapacityError as exc:
        code, msg = EXIT_CAPACITY, f"capacity error: {exc}"
    except OSError as exc:
        code, msg = EXIT_IO, f"I/O error: {exc.filename or ''} {exc.strerror or exc}"
    except GraphConstructionError as exc:
        code, msg = EXIT_GRAPH, f"graph construction failed: {exc}"
    except DecodingError as exc:
        code, msg = EXIT_DECODE, f"decoding failed: {exc}"
    except bench.LayoutCheckError as exc:
        code, msg = EXIT_LAYOUT_CHECK, f"layout check failed: {exc}"
    except ValueError as exc:
        code, msg = EXIT_USAGE, f"invalid arguments: {exc}"
    print(f"repbench: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
