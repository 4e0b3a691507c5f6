"""Benchmark harness: sweep code sizes, sample, process, decode, report."""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from repbench import archive as archive_mod
from repbench import rep_code, sim
from repbench.archive import ResultsArchive
from repbench.decoders import LogicalErrorReport, MatchingDecoder, lookup_decode
from repbench.syndrome_graph import (
    SyndromeGraph,
    build_graph,
    edge_probability_summary,
    format_summary,
    weight_syndrome_graph,
)

log = logging.getLogger(__name__)


class LayoutCheckError(AssertionError):
    pass


@dataclass(frozen=True)
class BenchConfig:
    n_min: int = 3
    n_max: int = 7
    T: int = 1
    rho_meas: float = 0.01
    rho_gate: float = 0.01
    shots: int = 1024
    seed: int = 0
    decoder: str = "matching"
    weighting: str = "unit"
    n_step: int = 1
    table_shots: int = 10000

    def __post_init__(self):
        if not 2 <= self.n_min <= self.n_max:
            raise ValueError(f"need 2 <= n_min <= n_max, got {self.n_min}, {self.n_max}")
        if self.T < 1:
            raise ValueError("need at least one syndrome round")
        if self.shots < 1 or self.table_shots < 1:
            raise ValueError("shots must be at least 1")
        if self.n_step < 1:
            raise ValueError("n_step must be at least 1")
        if self.decoder not in ("matching", "lookup"):
            raise ValueError(f"unknown decoder {self.decoder!r}")
        if self.weighting not in ("unit", "data"):
            raise ValueError(f"unknown weighting {self.weighting!r}")
        sim.NoiseModel(self.rho_meas, self.rho_gate)

    @property
    def sizes(self) -> list[int]:
        return list(range(self.n_min, self.n_max + 1, self.n_step))

    @property
    def noise(self) -> sim.NoiseModel:
        return sim.NoiseModel(self.rho_meas, self.rho_gate)


def cell_seed(seed: int, n: int, label: str, stream: int = 0) -> np.random.SeedSequence:
    """Seed for one (n, label) sampling job; independent of execution order."""
    return np.random.SeedSequence([seed, n, int(label), stream])


def layout_check(code: rep_code.RepetitionCode) -> None:
    expected = 2 * (code.n - 1) * code.T
    for label, circuit in code.circuit.items():
        num_cx = circuit.count_ops().get("CXGate", 0)
        if num_cx != expected:
            raise LayoutCheckError(f"n={code.n} label {label}: {num_cx} CX instead of {expected}")


def sample_code(code: rep_code.RepetitionCode, noise: sim.NoiseModel, shots: int, seed: int,
                stream: int = 0) -> dict[str, dict[str, int]]:
    return {
        label: sim.sample(code.circuit[label], noise, shots, cell_seed(seed, code.n, label, stream))
        for label in rep_code.LABELS
    }


def decoder_graph(code: rep_code.RepetitionCode, processed: dict, weighting: str) -> SyndromeGraph:
    graph = build_graph(code)
    if weighting == "data":
        graph = weight_syndrome_graph(graph, processed["0"])
    return graph


def decode_entry(n: int, T: int, raw: dict, decoder: str = "matching", weighting: str = "unit",
                 table: dict | None = None) -> dict[str, LogicalErrorReport]:
    code = rep_code.build(n, T)
    if decoder == "lookup":
        if table is None:
            raise ValueError("lookup decoding needs a table")
        return lookup_decode(raw, table)
    processed = code.process_results(raw)
    return MatchingDecoder(decoder_graph(code, processed, weighting)).get_logical_prob(processed)


@dataclass
class BenchResult:
    archive: ResultsArchive
    reports: dict[int, dict[str, LogicalErrorReport]]
    summaries: dict[int, dict]
    graphs: dict[int, SyndromeGraph]


def bench_run(config: BenchConfig, check_layout: bool = False) -> BenchResult:
    """Run the sweep in ``config``; results are a pure function of the config."""
    archive = ResultsArchive(config=asdict(config))
    reports = {}
    summaries = {}
    graphs = {}
    for n in config.sizes:
        code = rep_code.build(n, config.T)
        if check_layout:
            layout_check(code)
        raw = sample_code(code, config.noise, config.shots, config.seed)
        archive.add(n, config.T, raw)
        processed = code.process_results(raw)
        weighted = weight_syndrome_graph(build_graph(code), processed["0"])
        summaries[n] = edge_probability_summary(weighted)
        graph = weighted if config.weighting == "data" else build_graph(code)
        graphs[n] = graph
        if config.decoder == "lookup":
            table = sample_code(code, config.noise, config.table_shots, config.seed, stream=1)
            reports[n] = lookup_decode(raw, table)
        else:
            reports[n] = MatchingDecoder(graph).get_logical_prob(processed)
        log.info("n=%d P0=%.3g P1=%.3g", n, reports[n]["0"].P, reports[n]["1"].P)
    return BenchResult(archive, reports, summaries, graphs)


# -- report files -----------------------------------------------------------


def reports_csv(reports: dict[int, dict[str, LogicalErrorReport]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "label", "P", "shots"])
    for n in sorted(reports):
        for label in sorted(reports[n]):
            r = reports[n][label]
            writer.writerow([n, label, repr(r.P), r.shots])
    return buf.getvalue()


def reports_json(reports: dict[int, dict[str, LogicalErrorReport]]) -> str:
    rows = [
        {"n": n, "label": label, "P": r.P, "shots": r.shots, "decoder": r.decoder, "errors": r.errors}
        for n in sorted(reports)
        for label, r in sorted(reports[n].items())
    ]
    return json.dumps({"logical_error_probability": rows}, indent=2, sort_keys=True) + "\n"


PLOT_SCRIPT = '''\
"""Plot logical error probability against code size from logical_prob.csv."""
import csv
import sys

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "logical_prob.csv"
data = {"0": ([], []), "1": ([], [])}
with open(path) as f:
    for row in csv.DictReader(f):
        if float(row["P"]) > 0:
            data[row["label"]][0].append(int(row["n"]))
            data[row["label"]][1].append(float(row["P"]))
ax = plt.gca()
for label, (xs, ys) in data.items():
    ax.scatter(xs, ys, label="logical " + label)
ax.set_xlabel("Code distance, n")
ax.set_ylabel("Logical error probability")
ax.set_yscale("log")
plt.legend()
plt.savefig(path.rsplit(".", 1)[0] + ".png")
'''


def emit_reports(out_dir, reports, summaries=None, graphs=None, plot_script=False) -> list[Path]:
    """Write CSV/JSON reports, edge statistics and optional DOT graphs.

    Returns the paths written, in a fixed order.
    """
    if not reports:
        raise ValueError("no reports to emit")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "logical_prob.csv": reports_csv(reports),
        "logical_prob.json": reports_json(reports),
    }
    for n, summary in sorted((summaries or {}).items()):
        files[f"edge_stats_n{n}.txt"] = format_summary(summary)
    for n, graph in sorted((graphs or {}).items()):
        files[f"graph_n{n}.dot"] = graph.to_dot()
    if plot_script:
        files["plot_logical_prob.py"] = PLOT_SCRIPT
    written = []
    for name, text in files.items():
        path = out / name
        path.write_text(text)
        written.append(path)
    return written


def write_bench(result: BenchResult, out_dir, dot: bool = False, plot_script: bool = False) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    archive_mod.write_archive(result.archive, out / "archive.json", "json")
    archive_mod.write_archive(result.archive, out / "raw_results.txt", "dict-literal")
    written = [out / "archive.json", out / "raw_results.txt"]
    written += emit_reports(out, result.reports, result.summaries,
                            result.graphs if dot else None, plot_script)
    return written
