"""Text, CSV and JSON renderings of barcodes."""

from __future__ import annotations

import csv
import io
import json
import math

from .barcode import Barcode, Interval


def format_value(x: float) -> str:
    if math.isinf(x):
        return ""
    if float(x).is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


def _vertices(vs) -> str:
    return " ".join(str(v) for v in vs) if vs else ""


def to_text(barcode: Barcode, witnesses: bool = False) -> str:
    lines = []
    for iv in barcode:
        line = f"dim {iv.degree}: [{format_value(iv.birth)}, {format_value(iv.death)})"
        if witnesses:
            line += f" birth=({_vertices(iv.birth_simplex)}) death=({_vertices(iv.death_simplex)})"
        lines.append(line)
    return "\n".join(lines) + ("\n" if lines else "")


def to_csv(barcode: Barcode, witnesses: bool = False) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["degree", "birth", "death"]
    if witnesses:
        header += ["birth_simplex", "death_simplex"]
    writer.writerow(header)
    for iv in barcode:
        row = [iv.degree, format_value(iv.birth), format_value(iv.death)]
        if witnesses:
            row += [_vertices(iv.birth_simplex), _vertices(iv.death_simplex)]
        writer.writerow(row)
    return buf.getvalue()


def to_json(barcode: Barcode, witnesses: bool = False) -> str:
    records = []
    for iv in barcode:
        rec = {"degree": iv.degree, "birth": iv.birth,
               "death": None if math.isinf(iv.death) else iv.death}
        if witnesses:
            if iv.birth_simplex is not None:
                rec["birth_simplex"] = list(iv.birth_simplex)
            if iv.death_simplex is not None:
                rec["death_simplex"] = list(iv.death_simplex)
        records.append(rec)
    if not records:
        return "[]\n"
    return "[\n" + ",\n".join(json.dumps(rec) for rec in records) + "\n]\n"


def from_json(text: str) -> Barcode:
    out = []
    for rec in json.loads(text):
        death = rec.get("death")
        bs, ds = rec.get("birth_simplex"), rec.get("death_simplex")
        out.append(Interval(int(rec["degree"]), float(rec["birth"]),
                            math.inf if death is None else float(death),
                            tuple(bs) if bs is not None else None,
                            tuple(ds) if ds is not None else None))
    return Barcode(out)


RENDERERS = {"text": to_text, "csv": to_csv, "json": to_json}


def render(barcode: Barcode, output: str = "text", witnesses: bool = False) -> str:
    try:
        fn = RENDERERS[output]
    except KeyError:
        raise ValueError(f"unknown output format {output!r}") from None
    return fn(barcode, witnesses)
