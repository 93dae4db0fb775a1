"""The seeded instance grid and the benchmark runner behind ``bench``.

A suite file is CSV with the header ``n,seed,model,pattern,k,mode``; each
row names a generated host, a built-in pattern, the number of copies asked
for and the containment mode.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass
from typing import Iterable, Iterator

from .digraph import PatternDigraph, Tournament
from .embed import IMMERSION, TOPMINOR, counting_nodes
from .formats import dumps_document, outcome_document, verify_document
from .generators import generate
from .hit import EpOutcome, erdos_posa
from .patterns import CORPUS_PATTERNS, by_name

SUITE_COLUMNS = ("n", "seed", "model", "pattern", "k", "mode")
BENCH_COLUMNS = ("n", "seed", "pattern", "k", "mode", "outcome", "cert_size", "bound_value",
                 "width_used", "s_used", "nodes_expanded", "millis")

HOST_MODELS = ("uniform", "transitive", "blocks:3", "low-cutwidth:2")
SIZES = (4, 5, 6, 7, 8, 10, 12)


@dataclass(frozen=True)
class Instance:
    n: int
    seed: int
    model: str
    pattern: str
    k: int
    mode: str

    def host(self) -> Tournament:
        return generate(self.n, self.seed, self.model)

    def pattern_digraph(self) -> PatternDigraph:
        return by_name(self.pattern)

    def row(self) -> list:
        return [self.n, self.seed, self.model, self.pattern, self.k, self.mode]


def standard_corpus() -> list[Instance]:
    """Every pattern, mode, k in 1..4 and host model once: 224 instances.
    Host sizes cycle through ``SIZES`` and the seed is the row index."""
    out = []
    for pattern in CORPUS_PATTERNS:
        for mode in (IMMERSION, TOPMINOR):
            for k in (1, 2, 3, 4):
                for model in HOST_MODELS:
                    idx = len(out)
                    out.append(Instance(SIZES[idx % len(SIZES)], idx, model, pattern, k, mode))
    return out


def write_suite(instances: Iterable[Instance]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUITE_COLUMNS)
    for inst in instances:
        w.writerow(inst.row())
    return buf.getvalue()


def read_suite(text: str, source: str = "<suite>") -> list[Instance]:
    from .formats import FormatError

    reader = csv.reader(io.StringIO(text))
    rows = list(reader)
    if not rows or tuple(c.strip() for c in rows[0]) != SUITE_COLUMNS:
        raise FormatError(f"header must be {','.join(SUITE_COLUMNS)}", 1, 1, source)
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(SUITE_COLUMNS):
            raise FormatError(f"expected {len(SUITE_COLUMNS)} fields, got {len(row)}",
                              lineno, 1, source)
        n, seed, model, pattern, k, mode = (c.strip() for c in row)
        try:
            inst = Instance(int(n), int(seed), model, pattern, int(k), mode)
            inst.pattern_digraph()
        except (ValueError, KeyError) as exc:
            raise FormatError(str(exc), lineno, 1, source) from None
        if inst.mode not in (IMMERSION, TOPMINOR):
            raise FormatError(f"unknown mode {mode!r}", lineno, 6, source)
        out.append(inst)
    return out


@dataclass(frozen=True)
class RunResult:
    instance: Instance
    outcome: EpOutcome
    document: str
    nodes: int
    millis: float
    problems: tuple[str, ...]

    def bench_row(self) -> list:
        rep = self.outcome.report
        return [self.instance.n, self.instance.seed, self.instance.pattern, self.instance.k,
                self.instance.mode, self.outcome.result, rep.size, _num(rep.bound), rep.width,
                "" if rep.s is None else rep.s, self.nodes, f"{self.millis:.1f}"]


def _num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else f"{x:.6f}"


def run_instance(inst: Instance, node_budget: int | None = None) -> RunResult:
    host = inst.host()
    pattern = inst.pattern_digraph()
    start = time.perf_counter()
    with counting_nodes() as box:
        kwargs = {} if node_budget is None else {"node_budget": node_budget}
        outcome = erdos_posa(host, pattern, inst.k, inst.mode, seed=inst.seed, **kwargs)
    millis = (time.perf_counter() - start) * 1000
    doc = outcome_document(host, pattern, outcome, inst.k, inst.mode, inst.seed)
    problems = tuple(verify_document(host, doc))
    return RunResult(inst, outcome, dumps_document(doc), box[0], millis, problems)


def run_suite(instances: Iterable[Instance], node_budget: int | None = None
              ) -> Iterator[RunResult]:
    for inst in instances:
        yield run_instance(inst, node_budget)


def bench_csv(results: Iterable[RunResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BENCH_COLUMNS)
    for r in results:
        w.writerow(r.bench_row())
    return buf.getvalue()

