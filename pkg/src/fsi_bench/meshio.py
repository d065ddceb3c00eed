"""Point import and analytic field export in CSV form.

Point files have the header ``id,x,y[,z][,w][,region]``; field tables have
``id,t,field,c1[,c2[,c3]]``.  Numbers are written with 17 significant digits
so that a write/read round trip is exact.
"""

import csv
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

REGIONS = ("fluid", "solid", "interface")
VECTOR_FIELDS = ("v_f", "u_s", "v_s", "t_f", "t_s")
SCALAR_FIELDS = ("p_f", "p_s")
FIELDS = ("v_f", "u_s", "v_s", "p_f", "p_s", "t_f", "t_s")
# regions at which each field is evaluated when points carry region tags
FIELD_REGIONS = {
    "v_f": ("fluid", "interface"),
    "p_f": ("fluid", "interface"),
    "u_s": ("solid", "interface"),
    "v_s": ("solid", "interface"),
    "p_s": ("solid", "interface"),
    "t_f": ("interface",),
    "t_s": ("interface",),
}


class MeshIOError(ValueError):
    """Malformed or inconsistent CSV input."""


def fmt(x):
    return format(float(x), ".17g")


@dataclass(frozen=True, eq=False)
class PointSet:
    ids: tuple
    coords: np.ndarray
    weights: Optional[np.ndarray] = None
    regions: Optional[tuple] = None

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float)
        if coords.ndim != 2 or coords.shape[1] not in (2, 3):
            raise MeshIOError("coordinates must be an (N, 2) or (N, 3) array")
        if len(self.ids) != len(coords):
            raise MeshIOError("ids and coordinates differ in length")
        if len(set(self.ids)) != len(self.ids):
            raise MeshIOError("point ids must be unique")
        object.__setattr__(self, "coords", coords)
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=float)
            if w.shape != (len(coords),):
                raise MeshIOError("one weight per point is required")
            if np.any(w < 0) or not np.all(np.isfinite(w)):
                raise MeshIOError("weights must be finite and non-negative")
            object.__setattr__(self, "weights", w)
        if self.regions is not None:
            bad = [r for r in self.regions if r not in REGIONS]
            if bad:
                raise MeshIOError(f"unknown region tag {bad[0]!r}")
            if len(self.regions) != len(coords):
                raise MeshIOError("one region tag per point is required")

    @property
    def dim(self):
        return self.coords.shape[1]

    def __len__(self):
        return len(self.ids)

    def select(self, mask):
        idx = np.flatnonzero(mask)
        return PointSet(
            tuple(self.ids[i] for i in idx),
            self.coords[idx],
            None if self.weights is None else self.weights[idx],
            None if self.regions is None else tuple(self.regions[i] for i in idx),
        )

    def index(self):
        return {pid: i for i, pid in enumerate(self.ids)}


def _parse_id(text):
    try:
        return int(text)
    except ValueError:
        return text


def load_points(path, dim=None):
    """Read a point CSV; ``dim`` (2 or 3), if given, must match the file."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise MeshIOError(f"{path}: empty file") from None
        coord_cols = ["x", "y", "z"] if "z" in header else ["x", "y"]
        expected = ["id"] + coord_cols
        if header[: len(expected)] != expected:
            raise MeshIOError(f"{path}: header must start with {','.join(expected)}")
        extra = header[len(expected):]
        if extra not in ([], ["w"], ["region"], ["w", "region"]):
            raise MeshIOError(f"{path}: unexpected columns {extra}")
        file_dim = len(coord_cols)
        if dim is not None and dim != file_dim:
            raise MeshIOError(f"{path}: file has {file_dim}D points but the case is {dim}D")
        has_w, has_region = "w" in extra, "region" in extra
        ids, coords, weights, regions = [], [], [], []
        for rowno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise MeshIOError(f"{path}: row {rowno}: expected {len(header)} fields, got {len(row)}")
            try:
                xyz = [float(row[1 + k]) for k in range(file_dim)]
                w = float(row[1 + file_dim]) if has_w else None
            except ValueError:
                raise MeshIOError(f"{path}: row {rowno}: non-numeric value") from None
            if not all(math.isfinite(v) for v in xyz):
                raise MeshIOError(f"{path}: row {rowno}: non-finite coordinate")
            if has_w and not (w >= 0 and math.isfinite(w)):
                raise MeshIOError(f"{path}: row {rowno}: weight must be finite and non-negative")
            region = row[-1].strip() if has_region else None
            if has_region and region not in REGIONS:
                raise MeshIOError(f"{path}: row {rowno}: unknown region {region!r}")
            ids.append(_parse_id(row[0].strip()))
            coords.append(xyz)
            weights.append(w)
            regions.append(region)
    if len(set(ids)) != len(ids):
        raise MeshIOError(f"{path}: duplicate point ids")
    return PointSet(
        tuple(ids),
        np.array(coords, dtype=float).reshape(-1, file_dim),
        np.array(weights, dtype=float) if has_w else None,
        tuple(regions) if has_region else None,
    )


def write_points(points, path):
    header = ["id", "x", "y", "z"][: 1 + points.dim]
    if points.weights is not None:
        header.append("w")
    if points.regions is not None:
        header.append("region")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for i, pid in enumerate(points.ids):
            row = [pid] + [fmt(c) for c in points.coords[i]]
            if points.weights is not None:
                row.append(fmt(points.weights[i]))
            if points.regions is not None:
                row.append(points.regions[i])
            writer.writerow(row)


@dataclass(frozen=True, eq=False)
class FieldTable:
    """Rows ``(id, t, field, components)`` sorted by (t, id, field)."""

    rows: tuple
    points: Optional[PointSet] = None

    def __post_init__(self):
        rows = tuple(sorted(self.rows, key=_row_key))
        for r in rows:
            if not all(math.isfinite(c) for c in r[3]) or not math.isfinite(r[1]):
                raise MeshIOError(f"non-finite value in row for point {r[0]!r}")
        object.__setattr__(self, "rows", rows)

    def __len__(self):
        return len(self.rows)

    def fields(self):
        return sorted({r[2] for r in self.rows})

    def times(self):
        return sorted({r[1] for r in self.rows})

    def select(self, field=None, t=None):
        return [r for r in self.rows
                if (field is None or r[2] == field) and (t is None or r[1] == t)]

    def write(self, path):
        width = max((len(r[3]) for r in self.rows), default=1)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["id", "t", "field"] + [f"c{k + 1}" for k in range(width)])
            for pid, t, name, comps in self.rows:
                writer.writerow([pid, fmt(t), name] + [fmt(c) for c in comps])


def _row_key(row):
    pid = row[0]
    # numeric ids sort numerically and before string ids
    return (row[1], (0, pid, "") if isinstance(pid, int) else (1, 0, str(pid)), row[2])


def read_field_table(path):
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MeshIOError(f"{path}: empty file") from None
        if header[:3] != ["id", "t", "field"] or len(header) < 4:
            raise MeshIOError(f"{path}: header must be id,t,field,c1[,c2[,c3]]")
        for rowno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                comps = tuple(float(c) for c in row[3:] if c != "")
                rows.append((_parse_id(row[0]), float(row[1]), row[2], comps))
            except (ValueError, IndexError):
                raise MeshIOError(f"{path}: row {rowno}: malformed row") from None
    return FieldTable(tuple(rows))


def interface_normal(sol, coords):
    """Outward unit normal of the fluid at interface points."""
    return sol._transverse_unit(np.asarray(coords, dtype=float))


def evaluate_field(sol, name, coords, t):
    """Field values as an (N, m) array at points ``coords`` and time ``t``."""
    coords = np.asarray(coords, dtype=float)
    if name == "v_f":
        return sol.eval_fluid_velocity(coords, t)
    if name == "u_s":
        return sol.eval_solid_displacement(coords, t)
    if name == "v_s":
        return sol.eval_solid_velocity(coords, t)
    if name == "p_f":
        return sol.eval_fluid_pressure(coords, t)[:, None]
    if name == "p_s":
        return sol.eval_solid_pressure(coords, t)[:, None]
    if name in ("t_f", "t_s"):
        n = interface_normal(sol, coords)
        if name == "t_f":
            return sol.eval_traction("fluid", coords, t, n)
        return sol.eval_traction("solid", coords, t, -n)
    raise ValueError(f"unknown field {name!r}; choose from {', '.join(FIELDS)}")


def _field_mask(points, name):
    if points.regions is None:
        return np.ones(len(points), dtype=bool)
    allowed = FIELD_REGIONS[name]
    return np.array([r in allowed for r in points.regions])


def export_fields(sol, points, times, fields=FIELDS, path=None):
    """Evaluate the selected fields at every (point, time) and optionally write CSV.

    With region tags, each field is evaluated only at points of matching
    regions (tractions at interface points only); without tags every field
    is evaluated at every point.
    """
    if points.dim != sol.dim:
        raise MeshIOError(f"points are {points.dim}D but the case is {sol.dim}D")
    for name in fields:
        if name not in FIELDS:
            raise ValueError(f"unknown field {name!r}; choose from {', '.join(FIELDS)}")
    rows = []
    for t in times:
        for name in fields:
            mask = _field_mask(points, name)
            if not np.any(mask):
                continue
            sub = points.select(mask)
            values = evaluate_field(sol, name, sub.coords, float(t))
            for pid, vals in zip(sub.ids, values):
                rows.append((pid, float(t), name, tuple(float(v) for v in vals)))
    table = FieldTable(tuple(rows), points)
    if path is not None:
        table.write(path)
    return table


def profile_points(sol, n, axial=None):
    """Uniform fluid and solid samples along the profile coordinate.

    2D: points ``(x, y)`` with ``y`` in [0, H_i] and [H_i, H_o].  3D: points
    ``(0, y, z)`` along the y-radius.  Ids are ``f0..`` and ``s0..``.
    """
    if n < 2:
        raise ValueError("at least 2 samples per profile are required")
    p = sol.params
    axial = p.L if axial is None else float(axial)
    s_f = np.linspace(0.0, p.H_i, n)
    s_s = np.linspace(p.H_i, p.H_o, n)
    s = np.concatenate([s_f, s_s])
    if sol.dim == 2:
        coords = np.column_stack([np.full(2 * n, axial), s])
    else:
        coords = np.column_stack([np.zeros(2 * n), s, np.full(2 * n, axial)])
    ids = tuple([f"f{i}" for i in range(n)] + [f"s{i}" for i in range(n)])
    regions = tuple(["fluid"] * n + ["solid"] * n)
    return PointSet(ids, coords, None, regions)


def profile_table(sol, n, times, fields=("v_f", "v_s", "u_s"), axial=None):
    """Profiles along the transverse axis at the given times (for plotting)."""
    return export_fields(sol, profile_points(sol, n, axial), times, fields)
