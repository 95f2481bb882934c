"""CSV / JSON / SVG serialization of Jacobi set drawings.

All writers emit canonical output (segments in node-id order, floats via
``repr``) so files can be compared byte for byte across runs.
"""

from __future__ import annotations

import json
from pathlib import Path

from .connectivity import BARYCENTER

__all__ = ["CSV_HEADER", "segments_csv", "graph_json", "graph_svg", "export_segments", "FORMATS"]

CSV_HEADER = "x1,y1,x2,y2,node_kind1,node_kind2,source_vertex"
FORMATS = ("csv", "json", "svg")


def segments_csv(graph):
    lines = [CSV_HEADER]
    for (i, j), src in zip(graph.segments, graph.segment_source):
        a, b = graph.nodes[i], graph.nodes[j]
        lines.append(
            f"{a.x!r},{a.y!r},{b.x!r},{b.y!r},{a.kind},{b.kind},{'' if src < 0 else src}"
        )
    return "\n".join(lines) + "\n"


def graph_json(graph):
    doc = {
        "mode": graph.mode,
        "nodes": [
            {
                "id": n.id,
                "x": n.x,
                "y": n.y,
                "kind": n.kind,
                "source_edge": n.source_edge,
                "source_vertex": n.source_vertex,
                "valence": n.valence,
            }
            for n in graph.nodes
        ],
        "segments": [
            {"nodes": [i, j], "source_vertex": src}
            for (i, j), src in zip(graph.segments, graph.segment_source)
        ],
        "zero_length_segments": list(graph.zero_length),
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def graph_svg(graph, bounds=None, width=800):
    """Segments as ``<line>`` elements in world coordinates (y pointing up).

    Barycenter nodes are drawn as red dots. ``bounds`` is
    ``(xmin, ymin, xmax, ymax)``; by default the node bounding box is used.
    """
    if bounds is None:
        if graph.nodes:
            xs = [n.x for n in graph.nodes]
            ys = [n.y for n in graph.nodes]
            bounds = (min(xs), min(ys), max(xs), max(ys))
        else:
            bounds = (0.0, 0.0, 1.0, 1.0)
    x0, y0, x1, y1 = (float(b) for b in bounds)
    w = max(x1 - x0, 1e-12)
    h = max(y1 - y0, 1e-12)
    pad = 0.02 * max(w, h)
    stroke = 0.002 * max(w, h)
    height = max(1, round(width * (h + 2 * pad) / (w + 2 * pad)))
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="{x0 - pad!r} {-(y1 + pad)!r} {w + 2 * pad!r} {h + 2 * pad!r}">',
        f'<g id="segments" transform="scale(1,-1)" stroke="black" '
        f'stroke-width="{stroke!r}" stroke-linecap="round" fill="none">',
    ]
    for i, j in graph.segments:
        a, b = graph.nodes[i], graph.nodes[j]
        out.append(f'<line x1="{a.x!r}" y1="{a.y!r}" x2="{b.x!r}" y2="{b.y!r}"/>')
    out.append("</g>")
    out.append('<g id="barycenters" transform="scale(1,-1)" fill="red" stroke="none">')
    for n in graph.nodes:
        if n.kind == BARYCENTER:
            out.append(f'<circle cx="{n.x!r}" cy="{n.y!r}" r="{2.5 * stroke!r}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def export_segments(graph, path, format="csv", bounds=None):
    """Write ``graph`` to ``path`` in one of ``csv``, ``json`` or ``svg``."""
    if format == "csv":
        text = segments_csv(graph)
    elif format == "json":
        text = graph_json(graph)
    elif format == "svg":
        text = graph_svg(graph, bounds)
    else:
        raise ValueError(f"unknown export format {format!r}")
    Path(path).write_text(text)
    return Path(path)
