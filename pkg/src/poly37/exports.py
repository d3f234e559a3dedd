"""Mesh exporters and the machine-readable JSON report writer.

All exporters are deterministic: equal inputs produce byte-identical
files.  Floats are printed with 17 significant digits, enough to
round-trip any double exactly.
"""

from __future__ import annotations

import json
from importlib import resources

import jsonschema

from .surface import TriangleSurface

__all__ = [
    "export_obj",
    "export_ply",
    "export_surface_json",
    "report_schema",
    "validate_report",
    "write_report_json",
    "dumps_report",
]


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def export_obj(surface: TriangleSurface, path, *,
               comments: dict[str, str] | None = None) -> None:
    """Wavefront OBJ: one ``v`` line per combinatorial vertex, one ``f``
    line per triangle (1-based indices), and a comment header recording
    the generating configuration."""
    if surface.n_triangles == 0:
        raise ValueError("refusing to export an empty surface")
    lines = []
    for key, value in (comments or {}).items():
        lines.append(f"# {key}: {value}")
    for v in surface.vertices:
        lines.append(f"v {_fmt(v[0])} {_fmt(v[1])} {_fmt(v[2])}")
    for t in surface.triangles:
        lines.append(f"f {t[0] + 1} {t[1] + 1} {t[2] + 1}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def export_ply(surface: TriangleSurface, path, *,
               comments: dict[str, str] | None = None) -> None:
    """ASCII PLY 1.0 with double-precision vertex properties."""
    if surface.n_triangles == 0:
        raise ValueError("refusing to export an empty surface")
    lines = ["ply", "format ascii 1.0"]
    for key, value in (comments or {}).items():
        lines.append(f"comment {key}: {value}")
    lines += [
        f"element vertex {surface.n_vertices}",
        "property double x",
        "property double y",
        "property double z",
        f"element face {surface.n_triangles}",
        "property list uchar int vertex_indices",
        "end_header",
    ]
    for v in surface.vertices:
        lines.append(f"{_fmt(v[0])} {_fmt(v[1])} {_fmt(v[2])}")
    for t in surface.triangles:
        lines.append(f"3 {t[0]} {t[1]} {t[2]}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def export_surface_json(surface: TriangleSurface, path, *,
                        meta: dict | None = None) -> None:
    """Plain JSON mesh: vertex coordinate triples and triangle index
    triples, plus optional metadata."""
    doc = {
        "meta": meta or {},
        "vertices": [[float(x) for x in v] for v in surface.vertices],
        "triangles": [[int(x) for x in t] for t in surface.triangles],
    }
    with open(path, "w", newline="\n") as fh:
        fh.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def report_schema() -> dict:
    text = resources.files("poly37.schemas").joinpath("report.schema.json").read_text()
    return json.loads(text)


def validate_report(doc: dict) -> None:
    jsonschema.validate(doc, report_schema())


def dumps_report(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_report_json(doc: dict, path) -> None:
    """Validate the report against the repository schema and write it
    with a stable key order (re-serializing the parsed file reproduces
    the bytes exactly)."""
    validate_report(doc)
    with open(path, "w", newline="\n") as fh:
        fh.write(dumps_report(doc))
