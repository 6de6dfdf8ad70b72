"""On-disk artifact cache.

One directory per complex (named by the spec key), one JSON document per
artifact: basis-n{n}, boundary-n{n}, snf-n{n}-{domain}, homology-n{n}-{domain}.
Each document stores the producing config and a sha256 over config and
payload; reads validate both.  Writes go to a temp file that is renamed
into place, so a crashed writer never leaves a half-written artifact.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path

from .complex import ComplexSpec, SparseMatrix, format_spec
from .ring import ZERO, RatPoly, format_poly, parse_poly
from .smith import SmithDecomposition

FORMAT_VERSION = 1


class CacheCorruption(RuntimeError):
    """Checksum or config mismatch in a cached artifact."""


def default_cache_dir() -> Path:
    env = os.environ.get("YBH_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "ybh"


def domain_tag(at) -> str:
    return "Zt" if at is None else f"t{at}"


def _checksum(config, payload) -> str:
    blob = json.dumps({"config": config, "payload": payload}, sort_keys=True,
                      separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


class Cache:
    def __init__(self, root=None):
        self.root = Path(root) if root is not None else default_cache_dir()

    def path(self, spec: ComplexSpec, name: str) -> Path:
        return self.root / spec.key / f"{name}.json"

    def config(self, spec, n, kind, at=None):
        return {"spec": format_spec(spec), "n": n, "kind": kind,
                "domain": domain_tag(at), "version": FORMAT_VERSION}

    def read(self, path: Path, config):
        """Payload of a valid artifact, None when absent."""
        if not path.exists():
            return None
        try:
            doc = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise CacheCorruption(f"{path}: unreadable JSON ({exc})") from None
        if doc.get("sha256") != _checksum(doc.get("config"), doc.get("payload")):
            raise CacheCorruption(f"{path}: checksum mismatch")
        if doc.get("config") != config:
            raise CacheCorruption(f"{path}: produced by {doc.get('config')}, expected {config}")
        return doc["payload"]

    def write(self, path: Path, config, payload):
        path.parent.mkdir(parents=True, exist_ok=True)
        doc = {"config": config, "payload": payload, "sha256": _checksum(config, payload)}
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(doc, fh, sort_keys=True, indent=1)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    # -- typed artifacts ----------------------------------------------------------

    def _get_or_make(self, spec, n, kind, at, name, make):
        config = self.config(spec, n, kind, at)
        path = self.path(spec, name)
        payload = self.read(path, config)
        hit = payload is not None
        if not hit:
            payload = make()
            self.write(path, config, payload)
        return payload, hit

    def basis(self, spec, n, make):
        return self._get_or_make(spec, n, "basis", None, f"basis-n{n}", make)

    def boundary(self, spec, n, make):
        return self._get_or_make(spec, n, "boundary", None, f"boundary-n{n}", make)

    def snf(self, spec, n, at, make):
        return self._get_or_make(spec, n, "snf", at, f"snf-n{n}-{domain_tag(at)}", make)

    def homology(self, spec, n, at, make):
        return self._get_or_make(spec, n, "homology", at, f"homology-n{n}-{domain_tag(at)}", make)

    def checkpoint(self, name: str):
        return self.root / "jobs" / f"{name}.json"

    def gc(self):
        """Delete leftover temp files and artifacts that fail their checksum."""
        removed = []
        if not self.root.exists():
            return removed
        for path in sorted(self.root.rglob("*.json")):
            if path.name.startswith(".tmp-"):
                path.unlink()
                removed.append(str(path))
                continue
            try:
                doc = json.loads(path.read_text())
                ok = doc.get("sha256") == _checksum(doc.get("config"), doc.get("payload"))
            except (json.JSONDecodeError, AttributeError):
                ok = False
            if not ok:
                path.unlink()
                removed.append(str(path))
        return removed


# -- serialization ----------------------------------------------------------------

def matrix_to_json(A: SparseMatrix):
    entries = []
    for j, col in enumerate(A.cols):
        for i in sorted(col):
            v = col[i]
            entries.append([i, j, v if isinstance(v, int) else format_poly(v.coeffs)])
    return {"shape": [A.nrows, A.ncols], "entries": entries}


def matrix_from_json(obj, symbolic=True) -> SparseMatrix:
    nrows, ncols = obj["shape"]
    cols = [dict() for _ in range(ncols)]
    for i, j, v in obj["entries"]:
        cols[j][i] = parse_poly(v) if symbolic else int(v)
    return SparseMatrix(nrows, ncols, cols, zero=ZERO if symbolic else 0)


def _encode_entry(d, domain):
    if domain == "Z":
        return d
    if domain == "Z[t]":
        return format_poly(d.coeffs)
    return [str(c) for c in d.coeffs]


def _decode_entry(x, domain):
    if domain == "Z":
        return int(x)
    if domain == "Z[t]":
        return parse_poly(x)
    return RatPoly(tuple(Fraction(c) for c in x))


def decomposition_to_json(dec: SmithDecomposition):
    """The diagonal and flags; P and Q are not stored."""
    return {
        "shape": [dec.nrows, dec.ncols],
        "domain": dec.domain,
        "at": dec.at,
        "rank": dec.rank,
        "diagonal": [_encode_entry(d, dec.domain) for d in dec.diagonal],
        "certified_over_Zt": dec.certified_over_Zt,
        "residual_ok": dec.residual_ok,
        "notes": list(dec.notes),
    }


def decomposition_from_json(obj) -> SmithDecomposition:
    nrows, ncols = obj["shape"]
    domain = obj["domain"]
    return SmithDecomposition(
        nrows=nrows, ncols=ncols,
        diagonal=[_decode_entry(x, domain) for x in obj["diagonal"]],
        domain=domain, at=obj.get("at"),
        certified_over_Zt=obj.get("certified_over_Zt", False),
        residual_ok=obj.get("residual_ok"),
        notes=list(obj.get("notes", [])),
    )

