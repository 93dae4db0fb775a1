from __future__ import annotations

from pathlib import Path

import pytest

from epdual.corpus import (BENCH_COLUMNS, HOST_MODELS, Instance, bench_csv, read_suite,
                           run_instance, run_suite, standard_corpus, write_suite)
from epdual.formats import FormatError
from epdual.patterns import CORPUS_PATTERNS

SUITE = Path(__file__).resolve().parent.parent / "suites" / "standard.csv"


def drop_millis(csv_text: str) -> list[list[str]]:
    return [line.split(",")[:-1] for line in csv_text.splitlines()]


def test_standard_corpus_shape():
    corpus = standard_corpus()
    assert len(corpus) >= 200 and len(set(corpus)) == len(corpus)
    assert {i.pattern for i in corpus} == set(CORPUS_PATTERNS)
    assert {i.model for i in corpus} == set(HOST_MODELS)
    assert {i.k for i in corpus} == {1, 2, 3, 4}


def test_shipped_suite_matches_the_generator():
    assert SUITE.read_text() == write_suite(standard_corpus())
    assert read_suite(SUITE.read_text()) == standard_corpus()


@pytest.mark.parametrize("text,needle", [
    ("", "header"),
    ("n,seed,model,pattern,k,mode\n4,0,uniform\n", "expected 6 fields"),
    ("n,seed,model,pattern,k,mode\nx,0,uniform,C3,1,immersion\n", "invalid literal"),
    ("n,seed,model,pattern,k,mode\n4,0,uniform,Q9,1,immersion\n", "Q9"),
    ("n,seed,model,pattern,k,mode\n4,0,uniform,C3,1,minor\n", "mode"),
])
def test_suite_diagnostics(text, needle):
    with pytest.raises(FormatError, match=needle):
        read_suite(text)


def test_bench_is_deterministic_apart_from_timing():
    part = standard_corpus()[::9]
    first = bench_csv(run_suite(part))
    second = bench_csv(run_suite(part))
    assert drop_millis(first) == drop_millis(second)
    assert first.splitlines()[0] == ",".join(BENCH_COLUMNS)
    assert len(first.splitlines()) == len(part) + 1


def test_run_instance_verifies_its_document():
    result = run_instance(Instance(6, 3, "blocks:3", "C3", 2, "topminor"))
    assert result.problems == () and result.nodes > 0
    assert result.outcome.result in ("packing", "hitting")
    row = result.bench_row()
    assert row[:5] == [6, 3, "C3", 2, "topminor"]
