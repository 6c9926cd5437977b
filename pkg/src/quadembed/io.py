"""Matrix files, problem documents and report rendering."""

from __future__ import annotations

import json
from pathlib import Path

import jsonschema
import numpy as np
import scipy.io

from .core import QuadPoly, Star, StructureClass
from .errors import DimensionMismatch, ParseError
from .seep import EigenGroup, EmbedSpec

FORMATS = ("mm", "native")
SUFFIX = {"mm": ".mtx", "native": ".npy"}


# -- matrices ----------------------------------------------------------------

def read_matrix(path) -> np.ndarray:
    """Read a Matrix Market (``.mtx``) or native (``.npy``) dense matrix."""
    path = Path(path)
    if not path.exists():
        raise ParseError(f"{path}: no such file")
    try:
        if path.suffix == ".npy":
            A = np.load(path, allow_pickle=False)
        else:
            A = scipy.io.mmread(str(path))
            if hasattr(A, "toarray"):
                A = A.toarray()
    except (ValueError, OSError, IndexError, TypeError, EOFError) as exc:
        raise ParseError(f"{path}: {exc}") from exc
    A = np.asarray(A)
    if A.ndim != 2:
        raise ParseError(f"{path}: expected a two-dimensional array, got shape {A.shape}")
    if np.iscomplexobj(A) and not np.any(A.imag):
        A = A.real
    return A


def write_matrix(path, A, fmt: str = "mm") -> Path:
    """Write ``A``; the suffix is added from ``fmt`` when ``path`` has none."""
    path = Path(path)
    if not path.suffix:
        path = path.with_suffix(SUFFIX[fmt])
    A = np.asarray(A)
    if fmt == "native":
        np.save(path, A, allow_pickle=False)
    elif fmt == "mm":
        field = "complex" if np.iscomplexobj(A) else "real"
        scipy.io.mmwrite(str(path), A, field=field, precision=17)
    else:
        raise ValueError(f"unknown matrix format {fmt!r}")
    return path


def read_poly(m_path, d_path, k_path) -> QuadPoly:
    mats = [read_matrix(p) for p in (m_path, d_path, k_path)]
    try:
        return QuadPoly(*mats)
    except DimensionMismatch as exc:
        raise DimensionMismatch(f"coefficient files are not conformal: {exc}") from exc


# -- problem documents -----------------------------------------------------------

_NUM = {"type": "number"}
_ROWS = {"type": "array", "items": {"type": "array", "items": _NUM}}
_MATRIX = {"oneOf": [
    _ROWS,
    {"type": "object", "properties": {"re": _ROWS, "im": _ROWS}, "required": ["re"],
     "additionalProperties": False},
    {"type": "object", "properties": {"file": {"type": "string"}}, "required": ["file"],
     "additionalProperties": False},
    {"type": "object", "properties": {"identity": {"type": "integer", "minimum": 1}},
     "required": ["identity"], "additionalProperties": False},
]}
_VECTOR = {"oneOf": [
    {"const": "compute"},
    {"type": "array", "items": _NUM},
    {"type": "object", "properties": {"re": {"type": "array", "items": _NUM},
                                      "im": {"type": "array", "items": _NUM}},
     "required": ["re"], "additionalProperties": False},
]}
_COMPLEX = {"oneOf": [_NUM, {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2}]}

PROBLEM_SCHEMA = {
    "type": "object",
    "required": ["class", "matrices", "groups"],
    "properties": {
        "name": {"type": "string"},
        "class": {"oneOf": [
            {"type": "string"},
            {"type": "object", "required": ["star", "eps1", "eps2"],
             "properties": {"star": {"enum": ["T", "CT", "*"]},
                            "eps1": {"enum": [1, -1]}, "eps2": {"enum": [1, -1]}}},
        ]},
        "field": {"enum": ["real", "complex"]},
        "matrices": {"type": "object", "required": ["M", "D", "K"],
                     "properties": {k: _MATRIX for k in "MDK"}},
        "groups": {"type": "array", "items": {
            "type": "object", "required": ["lam_c", "lam_a"],
            "properties": {"lam_c": _COMPLEX, "lam_a": _COMPLEX,
                           "x_c": _VECTOR, "x_partner": _VECTOR,
                           "a": _NUM, "b": _NUM, "c": _NUM, "r": _NUM},
            "additionalProperties": False}},
        "method": {"type": "string"},
        "tolerances": {"type": "object", "properties": {"eig_tol": _NUM, "spillover_tol": _NUM}},
    },
}


def _complex(v):
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    return complex(v)


def _matrix(spec, base: Path):
    if isinstance(spec, list):
        A = np.asarray(spec, dtype=float)
    elif "file" in spec:
        A = read_matrix(base / spec["file"])
    elif "identity" in spec:
        A = np.eye(spec["identity"])
    else:
        A = np.asarray(spec["re"], dtype=float)
        if "im" in spec:
            A = A + 1j * np.asarray(spec["im"], dtype=float)
    if A.ndim != 2:
        raise DimensionMismatch(f"matrix entry has shape {A.shape}")
    return A


def _vector(spec):
    if spec is None or spec == "compute":
        return None
    if isinstance(spec, list):
        return np.asarray(spec, dtype=float)
    v = np.asarray(spec["re"], dtype=float)
    return v + 1j * np.asarray(spec["im"], dtype=float) if "im" in spec else v


def _structure_class(doc) -> StructureClass:
    field = doc.get("field", "real")
    c = doc["class"]
    try:
        if isinstance(c, str):
            return StructureClass.from_name(c, field)
        star = Star.CT if c["star"] in ("CT", "*") else Star.T
        return StructureClass(star, c["eps1"], c["eps2"], "complex" if star is Star.CT else field)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


class Problem:
    """A parsed problem document: polynomial, embedding spec and options."""

    def __init__(self, Q: QuadPoly, spec: EmbedSpec, method="auto", name="", spillover_tol=1e-6):
        self.Q = Q
        self.spec = spec
        self.method = method
        self.name = name
        self.spillover_tol = spillover_tol


def parse_problem(doc: dict, base=".") -> Problem:
    try:
        jsonschema.validate(doc, PROBLEM_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ParseError(f"invalid problem document: {exc.message}") from exc
    base = Path(base)
    cls = _structure_class(doc)
    m = doc["matrices"]
    Q = QuadPoly(_matrix(m["M"], base), _matrix(m["D"], base), _matrix(m["K"], base))
    groups = []
    for g in doc["groups"]:
        extra = {k: float(g[k]) for k in ("a", "b", "c", "r") if k in g}
        groups.append(EigenGroup(_complex(g["lam_c"]), _complex(g["lam_a"]),
                                 _vector(g.get("x_c")), _vector(g.get("x_partner")), **extra))
    tols = doc.get("tolerances", {})
    spec = EmbedSpec(cls, groups, eig_tol=tols.get("eig_tol", 1e-6))
    return Problem(Q, spec, doc.get("method", "auto"), doc.get("name", ""),
                   tols.get("spillover_tol", 1e-6))


def load_problem(path) -> Problem:
    path = Path(path)
    if not path.exists():
        raise ParseError(f"{path}: no such file")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    return parse_problem(doc, path.parent)


# -- reports -------------------------------------------------------------------

def format_complex(z, digits: int = 6) -> str:
    """``a+bi`` / ``a-bi`` with ``digits`` significant digits; real values print alone."""
    z = complex(z.real + 0.0, z.imag + 0.0) if isinstance(z, complex) else complex(z) + 0.0
    re = f"{z.real:.{digits}g}"
    if z.imag == 0:
        return re
    sign = "-" if z.imag < 0 else "+"
    return f"{re}{sign}{abs(z.imag):.{digits}g}i"


def to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return {"re": obj.real.tolist(), "im": obj.imag.tolist()}
        return obj.tolist()
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not np.isfinite(obj):
        return str(obj)
    return obj


def render_report(report: dict) -> str:
    """Human-readable summary of an embedding report."""
    lines = [f"method: {report.get('method', '')}   class: {report.get('class', '')} "
             f"({report.get('field', '')})"]
    for key in ("RR_a", "RR_f", "spectrum_mismatch"):
        if report.get(key) is not None:
            lines.append(f"{key:<18}{report[key]:.4e}")
    for key in ("norm_dM", "norm_dD", "norm_dK", "rcond_P", "rcond_R"):
        if report.get(key) is not None:
            lines.append(f"{key:<18}{report[key]:.6g}")
    lines.append(f"{'structure_ok':<18}{report.get('structure_ok')}")
    dev = report.get("structure_deviation", {})
    if dev:
        lines.append("structure deviation  " + "  ".join(f"{k}: {v:.2e}" for k, v in dev.items()))
    psd = report.get("psd")
    if psd:
        lines.append(f"PSD certificates     dM: {psd['dM_ok']} (min eig {psd['dM_min_eig']:.3e})  "
                     f"dK: {psd['dK_ok']} (min eig {psd['dK_min_eig']:.3e})")
    rows = report.get("eigenvalues", [])
    if rows:
        lines.append("eigenvalues (before -> after, pairing partner)")
        for r in rows:
            lines.append(f"  {format_complex(r['before']):>24} -> {format_complex(r['after']):<24}"
                         f" partner {format_complex(r['partner'])}")
    return "\n".join(lines)
