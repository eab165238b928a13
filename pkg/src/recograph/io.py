"""Flat-file formats: graph TSV, CSV outputs, key=value configs, manifests.

All writers are deterministic: metadata keys are sorted, floats use the
shortest round-trip representation, and nothing emits timestamps, so a
rerun with identical inputs produces byte-identical files.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .graph import EdgeLabel, GraphBuilder, RecGraph

META_PREFIX = "#meta "


def format_float(value: float) -> str:
    """Shortest decimal string that round-trips the float exactly."""
    return repr(float(value))


# ---- graph TSV --------------------------------------------------------------


def write_graph_tsv(graph: RecGraph, path, names_path=None) -> None:
    """Write ``src<TAB>dst<TAB>label<TAB>weight`` lines with a #meta header.

    ``n_nodes`` is always recorded so isolated nodes survive a round trip.
    When ``names_path`` is given, the id -> name sidecar is written next to
    the edge list.
    """
    meta = graph.metadata
    meta["n_nodes"] = str(graph.n_nodes)
    lines = [f"{META_PREFIX}{key}={meta[key]}" for key in sorted(meta)]
    labels = [str(EdgeLabel(code)) for code in (0, 1, 2)]
    for i in range(graph.n_edges):
        lines.append(
            f"{graph.src[i]}\t{graph.dst[i]}\t"
            f"{labels[graph.label_codes[i]]}\t{graph.weights[i]}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    if names_path is not None:
        if graph.node_names is None:
            raise ValueError("graph has no node names to write")
        write_node_names(graph.node_names, names_path)


def read_graph_tsv(path, names_path=None) -> RecGraph:
    """Parse a graph TSV; ``names_path`` optionally attaches external names."""
    rows: list[tuple[int, int, EdgeLabel, int]] = []
    meta: dict[str, str] = {}
    max_id = -1
    for lineno, raw in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line.startswith(META_PREFIX):
                key, sep, value = line[len(META_PREFIX) :].partition("=")
                if not sep:
                    raise ValueError(f"{path}:{lineno}: malformed #meta line")
                meta[key.strip()] = value.strip()
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise ValueError(f"{path}:{lineno}: expected 4 tab-separated fields")
        src, dst = int(parts[0]), int(parts[1])
        rows.append((src, dst, EdgeLabel.from_string(parts[2]), int(parts[3])))
        max_id = max(max_id, src, dst)
    n_nodes = int(meta.pop("n_nodes", max_id + 1))
    names = read_node_names(names_path) if names_path is not None else None
    builder = GraphBuilder(n_nodes, metadata=meta, node_names=names)
    for src, dst, label, weight in rows:
        builder.add_edge(src, dst, label, count=weight)
    return builder.freeze()


def write_node_names(names: Sequence[str], path) -> None:
    lines = [f"{i}\t{name}" for i, name in enumerate(names)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_node_names(path) -> list[str]:
    entries: dict[int, str] = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        idx, _, name = line.partition("\t")
        entries[int(idx)] = name
    return [entries[i] for i in range(len(entries))]


# ---- feature table CSV -------------------------------------------------------


def write_features_csv(official: np.ndarray, hidden: np.ndarray, path) -> None:
    """One row per item: id, official coordinates, hidden coordinates."""
    if len(official) != len(hidden):
        raise ValueError("official and hidden feature tables must align")
    d, dh = official.shape[1], hidden.shape[1]
    header = (
        ["id"]
        + [f"official_{j}" for j in range(d)]
        + [f"hidden_{j}" for j in range(dh)]
    )
    lines = [",".join(header)]
    for i in range(len(official)):
        cells = [str(i)]
        cells.extend(format_float(v) for v in official[i])
        cells.extend(format_float(v) for v in hidden[i])
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_features_csv(path) -> tuple[np.ndarray, np.ndarray]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    header = lines[0].split(",")
    d = sum(1 for name in header if name.startswith("official_"))
    official_rows, hidden_rows = [], []
    for line in lines[1:]:
        if not line.strip():
            continue
        cells = line.split(",")
        official_rows.append([float(v) for v in cells[1 : 1 + d]])
        hidden_rows.append([float(v) for v in cells[1 + d :]])
    return np.array(official_rows), np.array(hidden_rows)


# ---- analysis output CSVs ----------------------------------------------------


def write_histogram_csv(distances, counts, path, unreachable=None, sources=None):
    """``distance,count`` rows; unreachable totals go in a trailing comment."""
    lines = ["distance,count"]
    lines.extend(f"{int(d)},{int(c)}" for d, c in zip(distances, counts))
    if unreachable is not None:
        tail = f"# unreachable={int(unreachable)}"
        if sources is not None:
            tail += f" sources={int(sources)}"
        lines.append(tail)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_scores_csv(graph: RecGraph, order: np.ndarray, scores: np.ndarray, path):
    """``src,dst,label,score`` rows in ranking order (best first)."""
    lines = ["src,dst,label,score"]
    for idx in order:
        lines.append(
            f"{graph.src[idx]},{graph.dst[idx]},"
            f"{EdgeLabel(int(graph.label_codes[idx]))},{format_float(scores[idx])}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_roc_csv(fpr, tpr, auc, positives, negatives, path) -> None:
    """``fpr,tpr`` rows plus a trailing ``# auc=... positives=... negatives=...``."""
    lines = ["fpr,tpr"]
    lines.extend(f"{format_float(x)},{format_float(y)}" for x, y in zip(fpr, tpr))
    lines.append(
        f"# auc={format_float(auc)} positives={int(positives)} "
        f"negatives={int(negatives)}"
    )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_roc_csv(path) -> tuple[np.ndarray, np.ndarray, float, int, int]:
    """Inverse of :func:`write_roc_csv`; returns (fpr, tpr, auc, pos, neg)."""
    fpr, tpr = [], []
    auc = positives = negatives = None
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line == "fpr,tpr":
            continue
        if line.startswith("#"):
            for token in line.lstrip("# ").split():
                key, sep, value = token.partition("=")
                if key == "auc":
                    auc = float(value)
                elif key == "positives":
                    positives = int(value)
                elif key == "negatives":
                    negatives = int(value)
            continue
        x, _, y = line.partition(",")
        fpr.append(float(x))
        tpr.append(float(y))
    if auc is None or positives is None or negatives is None:
        raise ValueError(f"{path}: missing the trailing # auc=... summary line")
    return np.array(fpr), np.array(tpr), auc, positives, negatives


def write_recall_csv(x: float, recall: float, path) -> None:
    Path(path).write_text(
        f"{format_float(x)},{format_float(recall)}\n", encoding="utf-8"
    )


# ---- key=value configs and manifests ------------------------------------------


def write_keyvalues(mapping: Mapping[str, object], path) -> None:
    lines = [f"{key}={mapping[key]}" for key in sorted(mapping)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_keyvalues(path) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        out[key.strip()] = value.strip()
    return out


def write_manifest(config: Mapping[str, object], path) -> None:
    """Resolved run configuration as stable JSON (sorted keys, no timestamps)."""
    Path(path).write_text(
        json.dumps(config, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def read_manifest(path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))
