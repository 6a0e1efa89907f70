"""Reading and writing data files: bivariate CSV, edge lists, prices, reports."""

from __future__ import annotations

import csv
import json
import math
import re
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import EmptyFile, NonPositivePrice, ParseError, TooShort

_SPLIT = re.compile(r"[,\s]+")


@dataclass
class DegreeRecord:
    node: str
    out_degree: int
    in_degree: int


@dataclass
class ReturnSeries:
    returns: np.ndarray
    log: bool = False

    def __len__(self):
        return len(self.returns)


def _is_number(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def _fmt(v) -> str:
    # repr gives the shortest string that round-trips
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def read_table(path, columns=None, delimiter=",") -> tuple[list[str] | None, np.ndarray]:
    """Read numeric columns from a delimited file.

    A first row with no numeric cell among the selected columns is taken as
    a header.  ``columns`` holds 0-based indices or header names; ``None``
    selects every column.  Blank lines are skipped.  Non-numeric and
    non-finite cells raise ``ParseError`` with 1-based line and column.
    """
    with open(path, newline="") as fh:
        rows = [(i, row) for i, row in enumerate(csv.reader(fh, delimiter=delimiter), start=1)
                if row and any(c.strip() for c in row)]
    if not rows:
        raise EmptyFile(f"{path} has no data rows")
    header = None
    first = [c.strip() for c in rows[0][1]]
    idx = _resolve_columns(columns, first, len(first))
    if not any(_is_number(first[j]) for j in idx if j < len(first)):
        header = first
        rows = rows[1:]
    if header is not None and columns is not None:
        idx = _resolve_columns(columns, header, len(header))
    out = np.empty((len(rows), len(idx)))
    for r, (lineno, row) in enumerate(rows):
        if len(row) <= max(idx):
            raise ParseError(f"expected at least {max(idx) + 1} fields, got {len(row)}", lineno)
        for c, j in enumerate(idx):
            cell = row[j].strip()
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(f"not a number: {cell!r}", lineno, j + 1) from None
            if not math.isfinite(v):
                raise ParseError(f"non-finite value {cell!r}", lineno, j + 1)
            out[r, c] = v
    return header, out


def _resolve_columns(columns, names, width):
    if columns is None:
        return list(range(width))
    idx = []
    for c in columns:
        if isinstance(c, str) and not c.lstrip("-").isdigit():
            if c not in names:
                raise ParseError(f"no column named {c!r}")
            idx.append(names.index(c))
        else:
            idx.append(int(c))
    return idx


def read_xy_csv(path, delimiter=",") -> np.ndarray:
    """Two-column numeric CSV to an ``(n, 2)`` array, rows in file order."""
    header, arr = read_table(path, delimiter=delimiter)
    if arr.shape[1] != 2:
        raise ParseError(f"expected 2 columns, found {arr.shape[1]}")
    return arr


def write_xy_csv(points, path, header=("x1", "x2")) -> None:
    arr = np.asarray(points, dtype=float)
    with open(path, "w", newline="") as fh:
        if header:
            fh.write(",".join(header) + "\n")
        for a, b in arr:
            fh.write(f"{_fmt(a)},{_fmt(b)}\n")


def edges_to_degrees(path) -> list[DegreeRecord]:
    """Node-wise out- and in-degree of a directed edge list.

    Each line holds ``src dst`` separated by a comma or whitespace; extra
    fields (weights, timestamps) are ignored.  Lines starting with ``%`` or
    ``#`` are comments.  Repeated edges count with multiplicity.  Nodes are
    listed in order of first appearance.
    """
    out_deg, in_deg = Counter(), Counter()
    order = {}
    n_edges = 0
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            s = line.strip()
            if not s or s[0] in "%#":
                continue
            parts = [p for p in _SPLIT.split(s) if p]
            if len(parts) < 2:
                raise ParseError("edge line needs a source and a destination", lineno)
            src, dst = parts[0], parts[1]
            for node in (src, dst):
                order.setdefault(node, len(order))
            out_deg[src] += 1
            in_deg[dst] += 1
            n_edges += 1
    if n_edges == 0:
        raise EmptyFile(f"{path} has no edges")
    return [DegreeRecord(node, out_deg[node], in_deg[node]) for node in order]


def degrees_to_sample(records) -> np.ndarray:
    """(out-degree, in-degree) pairs as an ``(n, 2)`` float array."""
    return np.array([[r.out_degree, r.in_degree] for r in records], dtype=float).reshape(-1, 2)


def write_degrees(records, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("node,out_degree,in_degree\n")
        for r in records:
            fh.write(f"{r.node},{r.out_degree},{r.in_degree}\n")


def prices_to_returns(prices, log: bool = False) -> ReturnSeries:
    """Daily returns ``(P_t - P_{t-1}) / P_{t-1}``, or log returns with ``log``."""
    p = np.asarray(prices, dtype=float).ravel()
    if len(p) < 2:
        raise TooShort(f"need at least 2 prices, got {len(p)}")
    if np.any(~(p > 0)):
        raise NonPositivePrice(f"prices must be positive; first offender at position {int(np.argmin(p > 0))}")
    if log:
        return ReturnSeries(np.diff(np.log(p)), log=True)
    return ReturnSeries(np.diff(p) / p[:-1])


def write_curve(curve, path) -> None:
    """CSV with header ``k,value``; altHill curves get a leading ``theta`` column."""
    with open(path, "w", newline="") as fh:
        if curve.thetas is not None:
            fh.write("theta,k,value\n")
            for t, k, v in zip(curve.thetas, curve.ks, curve.values):
                fh.write(f"{_fmt(t)},{int(k)},{_fmt(v)}\n")
        else:
            fh.write("k,value\n")
            for k, v in zip(curve.ks, curve.values):
                fh.write(f"{int(k)},{_fmt(v)}\n")


def write_columns(path, header, columns) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*columns):
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_angles(sample, path) -> None:
    write_columns(path, ["theta"], [sample.thetas])


def write_s0(measure, path) -> None:
    write_columns(path, ["mu1", "mu2", "weight"], [measure.mu[:, 0], measure.mu[:, 1], measure.weights])


def write_report(report, path) -> None:
    """Write an ``HrvReport`` (or a plain dict) as one JSON object."""
    doc = report.to_dict() if hasattr(report, "to_dict") else report
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=False, allow_nan=True)
        fh.write("\n")


def read_report(path) -> dict:
    with open(path) as fh:
        return json.load(fh)
