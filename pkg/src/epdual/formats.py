"""Text formats for tournaments, patterns and certificates.

Tournament file: the first line holds n, then n rows of n characters
``0``/``1``; character j of row i is ``1`` exactly when the arc i -> j is
present. Pattern file: ``digraph m`` followed by one ``u v`` arc per line.
Blank lines and lines starting with ``#`` are ignored in pattern files.

Certificates are JSON documents with sorted keys so that equal inputs give
byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
import re
from typing import Any

from . import __version__
from .digraph import Digraph, PatternDigraph, Tournament
from .embed import IMMERSION, TOPMINOR, Model, check_kind
from .hit import BoundReport, EpOutcome, HittingCertificate
from .pack import ARC, VERTEX, PackingCertificate

TOOL = "epdual"


class FormatError(ValueError):
    """A malformed input file; ``line`` and ``column`` are 1-based."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 source: str = "<input>"):
        where = source
        if line is not None:
            where += f":{line}"
            if column is not None:
                where += f":{column}"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.column = column


# ---------------------------------------------------------------------------
# tournaments

def parse_tournament(text: str, source: str = "<input>") -> Tournament:
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise FormatError("expected the number of vertices", 1, 1, source)
    head = lines[0].strip()
    if not head.isdigit():
        raise FormatError(f"expected a non-negative integer, got {head!r}", 1, 1, source)
    n = int(head)
    rows = lines[1:]
    while rows and not rows[-1].strip():
        rows.pop()
    if len(rows) != n:
        raise FormatError(f"expected {n} matrix rows, got {len(rows)}", len(rows) + 2, 1, source)
    matrix = []
    for i, raw in enumerate(rows):
        row = raw.rstrip("\r")
        if len(row) != n:
            raise FormatError(f"row {i} has {len(row)} characters, expected {n}",
                              i + 2, min(len(row), n) + 1, source)
        for j, ch in enumerate(row):
            if ch not in "01":
                raise FormatError(f"unexpected character {ch!r}", i + 2, j + 1, source)
        matrix.append([int(ch) for ch in row])
    for i in range(n):
        if matrix[i][i]:
            raise FormatError(f"diagonal entry ({i}, {i}) must be 0", i + 2, i + 1, source)
        for j in range(i + 1, n):
            if matrix[i][j] + matrix[j][i] != 1:
                raise FormatError(
                    f"entries ({i}, {j}) and ({j}, {i}) must be 0 and 1 in some order",
                    i + 2, j + 1, source)
    return Tournament.from_matrix(matrix)


def format_tournament(t: Tournament) -> str:
    if t.vertices != tuple(range(t.n)):
        t, _ = t.relabeled()
    rows = ["".join(str(x) for x in row) for row in t.matrix()]
    return "\n".join([str(t.n)] + rows) + "\n"


def read_tournament(path: str) -> Tournament:
    with open(path, encoding="utf-8") as fh:
        return parse_tournament(fh.read(), path)


# ---------------------------------------------------------------------------
# patterns

def parse_pattern(text: str, source: str = "<input>", name: str | None = None) -> PatternDigraph:
    m = None
    arcs = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = [(mt.group(), mt.start() + 1) for mt in re.finditer(r"\S+", raw)]
        if m is None:
            if len(tokens) != 2 or tokens[0][0] != "digraph" or not tokens[1][0].isdigit():
                raise FormatError("expected 'digraph <number of vertices>'", lineno, 1, source)
            m = int(tokens[1][0])
            continue
        if len(tokens) != 2:
            raise FormatError("expected an arc 'u v'", lineno, 1, source)
        ends = []
        for tok, col in tokens:
            if not tok.isdigit():
                raise FormatError(f"expected a vertex number, got {tok!r}", lineno, col, source)
            v = int(tok)
            if v >= m:
                raise FormatError(f"vertex {v} out of range 0..{m - 1}", lineno, col, source)
            ends.append(v)
        u, v = ends
        if u == v:
            raise FormatError(f"loop at vertex {u}", lineno, 1, source)
        if (u, v) in seen:
            raise FormatError(f"repeated arc {u} {v}", lineno, 1, source)
        seen.add((u, v))
        arcs.append((u, v))
    if m is None:
        raise FormatError("empty pattern file", 1, 1, source)
    if m == 0:
        raise FormatError("pattern must have at least one vertex", 1, 1, source)
    return PatternDigraph(m, arcs, name=name)


def format_pattern(p: PatternDigraph) -> str:
    return "\n".join([f"digraph {p.m}"] + [f"{u} {v}" for u, v in p.sorted_arcs()]) + "\n"


def read_pattern(path: str) -> PatternDigraph:
    with open(path, encoding="utf-8") as fh:
        return parse_pattern(fh.read(), path)


# ---------------------------------------------------------------------------
# certificates

def host_digest(t: Digraph) -> str:
    data = repr((t.vertices, t.sorted_arcs())).encode()
    return hashlib.sha256(data).hexdigest()


def _arcs(items) -> list[list[int]]:
    return [[int(u), int(v)] for u, v in items]


def packing_document(host: Digraph, cert: PackingCertificate, k: int, seed: int = 0,
                     report: BoundReport | None = None, trace=()) -> dict:
    return {
        "tool": TOOL,
        "version": __version__,
        "host_digest": host_digest(host),
        "pattern": {"m": cert.pattern.m, "arcs": _arcs(cert.pattern.sorted_arcs())},
        "mode": cert.kind,
        "disjointness": cert.disjointness,
        "result": "packing",
        "k": k,
        "elements": [],
        "models": [m.to_dict() for m in cert.models],
        "bound_report": report.to_dict() if report else None,
        "trace": list(trace),
        "seed": seed,
    }


def outcome_document(host: Digraph, pattern: PatternDigraph, outcome: EpOutcome, k: int,
                     mode: str, seed: int = 0) -> dict:
    if outcome.packing is not None:
        return packing_document(host, outcome.packing, k, seed, outcome.report, outcome.trace)
    hit = outcome.hitting
    elements = _arcs(hit.elements) if mode == IMMERSION else [int(v) for v in hit.elements]
    return {
        "tool": TOOL,
        "version": __version__,
        "host_digest": host_digest(host),
        "pattern": {"m": pattern.m, "arcs": _arcs(pattern.sorted_arcs())},
        "mode": mode,
        "disjointness": ARC if mode == IMMERSION else VERTEX,
        "result": "hitting",
        "k": k,
        "elements": elements,
        "models": [],
        "bound_report": outcome.report.to_dict(),
        "trace": list(outcome.trace),
        "seed": seed,
    }


def dumps_document(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def loads_document(text: str, source: str = "<certificate>") -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, exc.lineno, exc.colno, source) from None
    if not isinstance(doc, dict):
        raise FormatError("certificate must be a JSON object", 1, 1, source)
    for key in ("pattern", "mode", "disjointness", "result", "k", "elements", "models"):
        if key not in doc:
            raise FormatError(f"missing field {key!r}", None, None, source)
    return doc


def document_pattern(doc: dict) -> PatternDigraph:
    p = doc["pattern"]
    return PatternDigraph(int(p["m"]), [tuple(a) for a in p["arcs"]])


def _model(data: Any) -> Model:
    return Model.from_dict(data)


def verify_document(host: Digraph, doc: dict, deep: bool = False) -> list[str]:
    """Violations found when re-checking a certificate against a host; an
    empty list means the certificate is valid."""
    out = []
    try:
        mode = check_kind(doc["mode"])
        pattern = document_pattern(doc)
        k = int(doc["k"])
    except (KeyError, TypeError, ValueError) as exc:
        return [f"unreadable certificate: {exc}"]
    digest = doc.get("host_digest")
    if digest is not None and digest != host_digest(host):
        out.append("host does not match the certificate's host digest")
    if doc["result"] == "packing":
        try:
            models = tuple(_model(m) for m in doc["models"])
        except (KeyError, TypeError, ValueError) as exc:
            return out + [f"unreadable model: {exc}"]
        if doc["disjointness"] not in (ARC, VERTEX):
            return out + [f"unknown disjointness {doc['disjointness']!r}"]
        cert = PackingCertificate(mode, doc["disjointness"], pattern, models)
        out += cert.audit(host)
        if len(models) < k:
            out.append(f"only {len(models)} copies, {k} requested")
        if mode == TOPMINOR and doc["disjointness"] != VERTEX:
            out.append("topological-minor copies must be vertex-disjoint")
        if deep and not out:
            out += _deep_packing(host, pattern, mode, doc["disjointness"], k)
    elif doc["result"] == "hitting":
        if mode == IMMERSION:
            elements = tuple(sorted(tuple(int(x) for x in a) for a in doc["elements"]))
        else:
            elements = tuple(sorted(int(v) for v in doc["elements"]))
        hit = HittingCertificate(mode, elements)
        out += hit.audit(host, pattern)
        report = doc.get("bound_report")
        if report and len(elements) != report.get("size"):
            out.append(f"bound report size {report.get('size')} differs from {len(elements)}")
        if report and len(elements) > report.get("bound", float("inf")) + 1e-9:
            out.append(f"size {len(elements)} exceeds the reported bound {report.get('bound')}")
        if deep and not out:
            out += _deep_hitting(host, pattern, mode, hit)
    else:
        out.append(f"unknown result {doc['result']!r}")
    return out


def _deep_packing(host: Digraph, pattern: PatternDigraph, mode: str, disjointness: str,
                  k: int) -> list[str]:
    from . import oracle
    try:
        found = oracle.brute_packing_at_least(host, pattern, mode, disjointness, k)
    except oracle.OracleCapExceeded:
        return []
    return [] if found is not None else [f"the brute-force oracle finds fewer than {k} copies"]


def _deep_hitting(host: Digraph, pattern: PatternDigraph, mode: str,
                  hit: HittingCertificate) -> list[str]:
    from . import oracle
    if host.n > oracle.MAX_PACKING_N or pattern.m > oracle.MAX_PACKING_M:
        return []
    out = []
    try:
        if not oracle.naive_is_free(hit.residual(host), pattern, mode):
            out.append("the brute-force oracle finds a copy after the removal")
        best = oracle.brute_min_hitting(host, pattern, mode)
        if best.value > len(hit):
            out.append(f"smaller than the minimum hitting set {best.value}")
    except oracle.OracleCapExceeded:
        pass
    return out
