"""File formats.

Everything is JSON.  Parsing is strict: unknown fields are errors, so
schema drift is caught instead of silently ignored.

Schemas
-------
path / symmetric family::

    {"n": 1, "kind": "path" | "symmetric_family",
     "samples": [{"t": 0.0, "matrix": [[...], [...]]}, ...],
     "starts_at_identity": bool?, "closed": bool?}

two-parameter families use "samples_2d": [{"s": 0.0, "rows": [samples]}].

clutching::   {"rank": 2, "genus": 0, "loops": [path payloads]}
system::      {"phase_space": ..., "hamiltonian": {...}, "j_convention": ...}
complex::     {"generators": [{"id", "doubled_degree", "action"?}],
               "boundary": [["from", "to"], ...]}
morse-bott::  {"components": [...], "cascades": [...], "intra": [...]}
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Union

import numpy as np

from .chain import BottComponent, ChainComplex, MorseBottData, MorsePoint, build_complex
from .chern import ClutchingData
from .errors import FileFormatError
from .hamdyn import HamiltonianSystem, harmonic_system, pendulum_system
from .splin import SymmetricFamily, SymmetricFamily2, SymplecticPath


def _check_keys(obj: dict, required: set, optional: set = frozenset(), what: str = "object"):
    if not isinstance(obj, dict):
        raise FileFormatError("%s must be a JSON object" % what)
    keys = set(obj)
    missing = required - keys
    unknown = keys - required - optional
    if missing:
        raise FileFormatError("%s missing fields: %s" % (what, sorted(missing)))
    if unknown:
        raise FileFormatError("%s has unknown fields: %s" % (what, sorted(unknown)))


def _load_json(source: Union[str, Path, dict]) -> dict:
    if isinstance(source, dict):
        return source
    try:
        text = Path(source).read_text()
    except OSError as e:
        raise FileFormatError("cannot read %s: %s" % (source, e))
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise FileFormatError("invalid JSON in %s: %s" % (source, e))


def file_digest(path: Union[str, Path]) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _matrix(entry, n: int, what: str) -> np.ndarray:
    M = np.asarray(entry, dtype=float)
    if M.shape != (2 * n, 2 * n):
        raise FileFormatError("%s matrix has shape %s, expected %s"
                              % (what, M.shape, (2 * n, 2 * n)))
    return M


def _samples(doc_samples, n: int):
    ts, mats = [], []
    for k, s in enumerate(doc_samples):
        _check_keys(s, {"t", "matrix"}, what="sample %d" % k)
        ts.append(float(s["t"]))
        mats.append(_matrix(s["matrix"], n, "sample %d" % k))
    if len(ts) < 2:
        raise FileFormatError("need at least 2 samples")
    return np.array(ts), np.stack(mats)


def load_path(source) -> SymplecticPath:
    doc = _load_json(source)
    _check_keys(doc, {"n", "kind", "samples"},
                {"starts_at_identity", "closed"}, "path file")
    if doc["kind"] != "path":
        raise FileFormatError("expected kind 'path', got %r" % doc["kind"])
    n = int(doc["n"])
    ts, mats = _samples(doc["samples"], n)
    start_id = doc.get(
        "starts_at_identity",
        bool(np.max(np.abs(mats[0] - np.eye(2 * n))) < 1e-7),
    )
    closed = doc.get("closed", bool(np.max(np.abs(mats[-1] - mats[0])) < 1e-7))
    return SymplecticPath(ts, mats, bool(start_id), bool(closed)).validate()


def load_family(source):
    """SymmetricFamily, or SymmetricFamily2 when samples_2d is present."""
    doc = _load_json(source)
    if "samples_2d" in doc:
        _check_keys(doc, {"n", "kind", "samples_2d"}, set(), "family file")
        if doc["kind"] != "symmetric_family":
            raise FileFormatError("expected kind 'symmetric_family'")
        n = int(doc["n"])
        ss, slices = [], []
        for k, row in enumerate(doc["samples_2d"]):
            _check_keys(row, {"s", "rows"}, what="samples_2d entry %d" % k)
            ss.append(float(row["s"]))
            ts, mats = _samples(row["rows"], n)
            slices.append(SymmetricFamily(ts, mats).validate())
        return SymmetricFamily2(np.array(ss), slices)
    _check_keys(doc, {"n", "kind", "samples"}, set(), "family file")
    if doc["kind"] != "symmetric_family":
        raise FileFormatError("expected kind 'symmetric_family'")
    n = int(doc["n"])
    ts, mats = _samples(doc["samples"], n)
    return SymmetricFamily(ts, mats).validate()


def dump_path(P: SymplecticPath, max_samples: int = 513) -> dict:
    stride = max(1, len(P.ts) // max_samples)
    idx = list(range(0, len(P.ts), stride))
    if idx[-1] != len(P.ts) - 1:
        idx.append(len(P.ts) - 1)
    return {
        "n": P.n,
        "kind": "path",
        "starts_at_identity": bool(P.starts_at_identity),
        "closed": bool(P.closed),
        "samples": [
            {"t": float(P.ts[k]), "matrix": P.mats[k].tolist()} for k in idx
        ],
    }


def dump_family(S: SymmetricFamily) -> dict:
    return {
        "n": S.dim // 2,
        "kind": "symmetric_family",
        "samples": [
            {"t": float(t), "matrix": m.tolist()} for t, m in zip(S.ts, S.mats)
        ],
    }


def load_clutching(source) -> ClutchingData:
    doc = _load_json(source)
    _check_keys(doc, {"rank", "genus", "loops"}, set(), "clutching file")
    loops = [load_path(p) for p in doc["loops"]]
    return ClutchingData(int(doc["rank"]), int(doc["genus"]), loops)


def _polynomial_system(spec: dict) -> HamiltonianSystem:
    _check_keys(spec, {"n", "terms"}, what="polynomial hamiltonian")
    n = int(spec["n"])
    terms = []
    for k, t in enumerate(spec["terms"]):
        _check_keys(t, {"coeff", "powers"}, what="polynomial term %d" % k)
        powers = [int(p) for p in t["powers"]]
        if len(powers) != 2 * n:
            raise FileFormatError("term %d has %d exponents, expected %d"
                                  % (k, len(powers), 2 * n))
        terms.append((float(t["coeff"]), powers))

    def H(z):
        return float(sum(c * np.prod(np.asarray(z) ** p) for c, p in terms))

    return HamiltonianSystem(H, n, "plane" if n == 1 else "r2n")


def load_system(source) -> HamiltonianSystem:
    doc = _load_json(source)
    _check_keys(doc, {"phase_space", "hamiltonian"}, {"j_convention"}, "system file")
    ham = doc["hamiltonian"]
    jconv = doc.get("j_convention", "standard")
    if "builtin" in ham:
        _check_keys(ham, {"builtin"}, {"parameters"}, "hamiltonian")
        params = ham.get("parameters", {})
        name = ham["builtin"]
        if name == "harmonic":
            _check_keys(params, set(), set(), "harmonic parameters")
            sys = harmonic_system(jconv)
        elif name == "pendulum":
            _check_keys(params, set(), {"scale"}, "pendulum parameters")
            sys = pendulum_system(jconv, float(params.get("scale", 1.0)))
        else:
            raise FileFormatError("unknown builtin hamiltonian %r" % name)
    elif "polynomial" in ham:
        _check_keys(ham, {"polynomial"}, set(), "hamiltonian")
        sys = _polynomial_system(ham["polynomial"])
        sys.j_structure = jconv
    else:
        raise FileFormatError("hamiltonian must have 'builtin' or 'polynomial'")
    if doc["phase_space"] != sys.phase_space:
        # allow overriding plane <-> cylinder for n = 1 systems
        sys = HamiltonianSystem(sys.hamiltonian, sys.n, doc["phase_space"],
                                sys.gradient, sys.hessian, sys.j_structure)
    return sys


def load_complex(source) -> ChainComplex:
    doc = _load_json(source)
    _check_keys(doc, {"generators", "boundary"}, set(), "complex file")
    gens = []
    for k, g in enumerate(doc["generators"]):
        _check_keys(g, {"id", "doubled_degree"}, {"action"}, "generator %d" % k)
        gens.append((g["id"], int(g["doubled_degree"]), g.get("action")))
    entries = []
    for k, e in enumerate(doc["boundary"]):
        if not isinstance(e, list) or len(e) not in (2, 3):
            raise FileFormatError("boundary entry %d must be [from, to(, count)]" % k)
        entries.append(tuple(e))
    return build_complex(gens, entries)


def load_morse_bott(source) -> MorseBottData:
    doc = _load_json(source)
    _check_keys(doc, {"components"}, {"cascades", "intra"}, "morse-bott file")
    comps = []
    for k, c in enumerate(doc["components"]):
        _check_keys(c, {"id", "dim", "action", "rs_trans_doubled", "morse_points"},
                    what="component %d" % k)
        pts = []
        for j, p in enumerate(c["morse_points"]):
            _check_keys(p, {"id", "morse_index"}, what="morse point %d.%d" % (k, j))
            pts.append(MorsePoint(p["id"], int(p["morse_index"])))
        comps.append(BottComponent(c["id"], int(c["dim"]), float(c["action"]),
                                   int(c["rs_trans_doubled"]), tuple(pts)))
    casc = [tuple(e) for e in doc.get("cascades", [])]
    intra = [tuple(e) for e in doc.get("intra", [])]
    return MorseBottData(comps, casc, intra)
