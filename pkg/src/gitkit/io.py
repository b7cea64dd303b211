"""JSON and CSV plumbing: instance files, group elements, trajectory dumps."""

from __future__ import annotations

import csv
import io as _io
import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ParseError, ValidationError
from .lie_core import CompactGroup, GroupPoint, build_group
from .projective import ProjectivePoint


@dataclass(frozen=True)
class Instance:
    """A group together with a point of projective space."""

    group: CompactGroup
    point: ProjectivePoint
    name: str = ""

    @property
    def hbar(self) -> float:
        return self.point.hbar


def _complex_entry(z) -> complex:
    if isinstance(z, (int, float)) and not isinstance(z, bool):
        return complex(z)
    if isinstance(z, (list, tuple)) and len(z) == 2 and all(
        isinstance(c, (int, float)) and not isinstance(c, bool) for c in z
    ):
        return complex(z[0], z[1])
    raise ParseError(f"expected a number or a [re, im] pair, got {z!r}")


def parse_vector(data) -> np.ndarray:
    if not isinstance(data, list) or not data:
        raise ParseError("vector must be a nonempty list")
    v = np.array([_complex_entry(z) for z in data], dtype=complex)
    if not np.all(np.isfinite(v)):
        raise ValidationError("vector entries must be finite")
    return v


def parse_matrix(data) -> np.ndarray:
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise ParseError("matrix must be a nonempty list of rows")
    m = np.array([[_complex_entry(z) for z in row] for row in data], dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ParseError("matrix must be square")
    if not np.all(np.isfinite(m)):
        raise ValidationError("matrix entries must be finite")
    return m


def encode_vector(v) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex)]


def encode_matrix(m) -> list:
    return [encode_vector(row) for row in np.asarray(m, dtype=complex)]


def parse_group(spec) -> CompactGroup:
    if not isinstance(spec, dict):
        raise ParseError("group must be an object")
    spec = dict(spec)
    if spec.get("preset") == "custom":
        basis = spec.get("basis")
        if not isinstance(basis, list) or not basis:
            raise ParseError("custom preset needs a nonempty basis")
        spec["basis"] = [parse_matrix(b) for b in basis]
    if spec.get("preset") == "torus" and not isinstance(spec.get("weights"), list):
        raise ParseError("torus preset needs a weights array")
    try:
        return build_group(spec)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad group description: {exc}") from exc


def load_json(path: str | Path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}") from exc


def instance_from_dict(data, name: str = "", hbar: float | None = None) -> Instance:
    """Parse ``{"group": ..., "hbar": ..., "vector": [[re, im], ...]}``.

    ``hbar`` overrides the file value when given.
    """
    if not isinstance(data, dict):
        raise ParseError("instance must be a JSON object")
    for key in ("group", "vector"):
        if key not in data:
            raise ParseError(f"instance lacks {key!r}")
    group = parse_group(data["group"])
    v = parse_vector(data["vector"])
    if v.shape[0] != group.n:
        raise ValidationError(f"vector has length {v.shape[0]} but the group acts on C^{group.n}")
    if not np.linalg.norm(v) > 0:
        raise ValidationError("vector must be nonzero")
    h = data.get("hbar", 1.0) if hbar is None else hbar
    if not isinstance(h, (int, float)) or isinstance(h, bool) or not (h > 0 and math.isfinite(h)):
        raise ValidationError("hbar must be a positive number")
    return Instance(group, ProjectivePoint(v, float(h)), name)


def load_instance(path: str | Path, hbar: float | None = None) -> Instance:
    return instance_from_dict(load_json(path), str(path), hbar)


def instance_to_dict(group: CompactGroup, x: ProjectivePoint) -> dict:
    return {"group": group.to_json(), "hbar": x.hbar, "vector": encode_vector(x.v)}


def elements_from_dict(data) -> tuple[CompactGroup, list[GroupPoint]]:
    """Parse ``{"group": ..., "elements": [matrix, ...]}``."""
    if not isinstance(data, dict) or "group" not in data or "elements" not in data:
        raise ParseError("expected an object with 'group' and 'elements'")
    group = parse_group(data["group"])
    elems = data["elements"]
    if not isinstance(elems, list) or not elems:
        raise ParseError("elements must be a nonempty list")
    out = []
    for e in elems:
        m = parse_matrix(e)
        if m.shape[0] != group.n:
            raise ValidationError("element size does not match the group")
        out.append(GroupPoint(group, m))
    return group, out


def _finite(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def dumps(obj) -> str:
    """Deterministic JSON with shortest round-trip floats; non-finite floats
    become ``null``."""
    return json.dumps(_finite(obj), sort_keys=True, allow_nan=False)


def load_schema(name: str) -> dict:
    """Shipped JSON schema ``name`` (``verdict``, ``flow_summary``, ...)."""
    try:
        text = resources.files("gitkit").joinpath("schemas", f"{name}.schema.json").read_text()
    except FileNotFoundError as exc:
        raise ValidationError(f"no schema named {name!r}") from exc
    return json.loads(text)


def trajectory_csv(traj, every: int = 1) -> str:
    """Columns ``t``, ``re_v{j}``, ``im_v{j}``, ``mu_norm``, ``grad_norm``, ``xi{a}``."""
    if every < 1:
        raise ValidationError("dump interval must be positive")
    n, d = traj.group.n, traj.group.d
    header = ["t"]
    for j in range(n):
        header += [f"re_v{j}", f"im_v{j}"]
    header += ["mu_norm", "grad_norm"] + [f"xi{a}" for a in range(d)]
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for k in range(0, len(traj.times), every):
        row = [repr(float(traj.times[k]))]
        for z in traj.points[k].v:
            row += [repr(float(z.real)), repr(float(z.imag))]
        row += [repr(float(traj.mu_norms[k])), repr(float(traj.grad_norms[k]))]
        row += [repr(float(c)) for c in traj.xi_coords[k]]
        writer.writerow(row)
    return buf.getvalue()


__all__ = [
    "Instance",
    "parse_vector",
    "parse_matrix",
    "parse_group",
    "encode_vector",
    "encode_matrix",
    "load_json",
    "load_instance",
    "instance_from_dict",
    "instance_to_dict",
    "elements_from_dict",
    "dumps",
    "load_schema",
    "trajectory_csv",
]
