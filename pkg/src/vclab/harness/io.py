"""On-disk formats: graph and spectrum caches, CSV rows, JSON reports, config files."""

from __future__ import annotations

import base64
import configparser
import csv
import io
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from ..builders import FieldGraphSpec, Polynomial
from ..graph import DenseGraph, SpectralProfile
from ..homcount import Pattern

GRAPH_SCHEMA = "vclab-graph-v1"
SPECTRUM_SCHEMA = "vclab-spectrum-v1"
CSV_SCHEMA = "vclab-csv-v1"
REPORT_SCHEMA = "vclab-report-v1"
CSV_COLUMNS = ("suite", "family", "q", "t", "n", "d", "lambda", "U_size", "Uprime_size",
               "trial", "seed", "metric", "value", "bound", "pass")


class FormatError(ValueError):
    pass


# ---------------------------------------------------------------------------
# graph cache


def graph_to_doc(G: DenseGraph, spec: Optional[FieldGraphSpec] = None) -> dict:
    packed = np.packbits(G.adj, axis=1)
    doc = {
        "schema": GRAPH_SCHEMA,
        "family": spec.family if spec else "custom",
        "q": spec.q if spec else G.q,
        "t": spec.t if spec else (None if G.labels is None else int(G.labels.shape[1])),
        "n": G.n,
        "loops": bool(G.has_loops),
        "edges": base64.b64encode(packed.tobytes()).decode("ascii"),
        "hash": G.digest(),
    }
    if spec is not None and spec.polynomial is not None:
        doc["polynomial"] = str(spec.polynomial)
        doc["exclude_origin"] = spec.exclude_origin
    return doc


def doc_to_graph(doc: dict) -> DenseGraph:
    if doc.get("schema") != GRAPH_SCHEMA:
        raise FormatError(f"not a {GRAPH_SCHEMA} document")
    n = int(doc["n"])
    raw = np.frombuffer(base64.b64decode(doc["edges"]), dtype=np.uint8)
    width = (n + 7) // 8
    if raw.size != n * width:
        raise FormatError(f"edge payload has {raw.size} bytes, expected {n * width}")
    adj = np.unpackbits(raw.reshape(n, width), axis=1, count=n).astype(bool)
    labels, q = None, doc.get("q")
    spec = spec_from_doc(doc)
    if spec is not None:
        labels = spec.build().labels
    G = DenseGraph(adj, labels, q, name=doc.get("family", ""))
    if "hash" in doc and doc["hash"] != G.digest():
        raise FormatError("graph hash mismatch: cache corrupted")
    if bool(doc.get("loops", G.has_loops)) != G.has_loops:
        raise FormatError("loop flag disagrees with adjacency diagonal")
    return G


def spec_from_doc(doc: dict) -> Optional[FieldGraphSpec]:
    fam = doc.get("family")
    if fam not in ("distance", "dotproduct", "polynomial"):
        return None
    poly = None
    if fam == "polynomial":
        poly = Polynomial.parse(doc["polynomial"], int(doc["t"]))
    return FieldGraphSpec(fam, int(doc["q"]), int(doc["t"]), poly, bool(doc.get("exclude_origin", False)))


def save_graph(path, G: DenseGraph, spec: Optional[FieldGraphSpec] = None) -> None:
    Path(path).write_text(json.dumps(graph_to_doc(G, spec), indent=1) + "\n")


def load_graph(path) -> DenseGraph:
    return doc_to_graph(json.loads(Path(path).read_text()))


def load_graph_with_spec(path) -> tuple[DenseGraph, Optional[FieldGraphSpec]]:
    doc = json.loads(Path(path).read_text())
    return doc_to_graph(doc), spec_from_doc(doc)


def spectrum_to_doc(G: DenseGraph, P: SpectralProfile) -> dict:
    return {
        "schema": SPECTRUM_SCHEMA,
        "graph-hash": G.digest(),
        "eigenvalues": [fmt(x) for x in P.eigenvalues],
        "d": P.d,
        "lambda": fmt(P.lam),
        "lambda-without-loops": None if P.lam_without_loops is None else fmt(P.lam_without_loops),
    }


def doc_to_spectrum(doc: dict, G: Optional[DenseGraph] = None) -> SpectralProfile:
    if doc.get("schema") != SPECTRUM_SCHEMA:
        raise FormatError(f"not a {SPECTRUM_SCHEMA} document")
    if G is not None and doc["graph-hash"] != G.digest():
        raise FormatError("spectrum cache belongs to a different graph")
    eig = np.array([float(x) for x in doc["eigenvalues"]])
    nl = doc.get("lambda-without-loops")
    return SpectralProfile(eig, doc["d"], float(doc["lambda"]), 0 if G is None else G.loops,
                           None if nl is None else float(nl))


# ---------------------------------------------------------------------------
# CSV / JSON output


def fmt(x) -> str:
    """Stable text for a number: exact for integers, 12 significant digits otherwise."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".12g")


def csv_text(rows: Iterable[dict], timestamp: Optional[str] = None) -> str:
    """CSV document: a schema/timestamp comment line, the header, then rows."""
    ts = timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds")
    buf = io.StringIO()
    buf.write(f"# {CSV_SCHEMA} generated={ts}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([fmt(r.get(c)) if not isinstance(r.get(c), str) else r.get(c) for c in CSV_COLUMNS])
    return buf.getvalue()


def csv_body(text: str) -> str:
    """Everything after the timestamped first line."""
    return text.split("\n", 1)[1]


def read_csv(path) -> list[dict]:
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].startswith(f"# {CSV_SCHEMA}"):
        raise FormatError(f"{path}: missing {CSV_SCHEMA} header line")
    return list(csv.DictReader(lines[1:]))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, int) and abs(obj) >= 2**53:
        return str(obj)  # keep big integers exact
    return obj


def report_text(records: list, meta: Optional[dict] = None, timestamp: Optional[str] = None) -> str:
    """JSON report; the timestamp sits alone on the first line of the document."""
    ts = timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds")
    body = json.dumps({"schema": REPORT_SCHEMA, "meta": _jsonable(meta or {}), "records": _jsonable(records)},
                      indent=1, sort_keys=True)
    return f'{{"generated": "{ts}",\n' + body[2:]


def write_text(path, text: str) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(text)


# ---------------------------------------------------------------------------
# config files


@dataclass
class ExperimentConfig:
    """Parsed ``key = value`` config with ``[section]`` headers.

    ``[graph]`` names the graph (family, q, t, optional polynomial and
    exclude_origin).  Every other section is a suite to run; its name is the
    suite name and its keys are that suite's options.
    """

    graph: dict
    suites: list = field(default_factory=list)  # [(name, options)]
    out: str = "vclab-out"

    def graph_spec(self) -> FieldGraphSpec:
        g = self.graph
        t = int(g["t"])
        poly = Polynomial.parse(g["polynomial"], t) if g.get("polynomial") else None
        return FieldGraphSpec(g["family"], int(g["q"]), t, poly,
                              g.get("exclude_origin", "false").lower() in ("1", "true", "yes"))


def parse_config(text: str) -> ExperimentConfig:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise FormatError(f"config syntax error: {exc}") from exc
    if "graph" not in cp:
        raise FormatError("config needs a [graph] section")
    graph = dict(cp["graph"])
    for key in ("family", "q", "t"):
        if key not in graph:
            raise FormatError(f"[graph] is missing '{key}'")
    out = cp["output"]["dir"] if "output" in cp and "dir" in cp["output"] else "vclab-out"
    suites = [(s.split(":")[0].strip(), dict(cp[s])) for s in cp.sections() if s not in ("graph", "output")]
    return ExperimentConfig(graph, suites, out)


def load_config(path) -> ExperimentConfig:
    return parse_config(Path(path).read_text())


def int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def parse_pattern(text: str) -> Pattern:
    """Pattern file: a ``[pattern]`` section with ``k`` and optional
    ``required``, ``forbidden``, ``distinct`` lists of ``a-b`` pairs."""
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.read_string(text)
    if "pattern" not in cp:
        raise FormatError("pattern file needs a [pattern] section")
    sec = cp["pattern"]

    def pairs(key):
        out = []
        for tok in sec.get(key, "").replace(",", " ").split():
            a, _, b = tok.partition("-")
            out.append((int(a), int(b)))
        return frozenset(out)

    roles = tuple(sec.get("roles", "").split())
    return Pattern(int(sec["k"]), pairs("required"), pairs("forbidden"), pairs("distinct"),
                   roles, sec.get("name", "pattern"))


def read_subset(path) -> list[int]:
    return int_list(Path(path).read_text())
