"""Isogeny-class records and curve-existence facts.

Records live in a small in-memory store that can be filled from JSON-lines
files, from a cache directory, or (when not offline) from an HTTP endpoint.
One record per line:

    {"label": "2.2.a_ae", "q": 2, "g": 2, "counts": [3, 5, 9, 33],
     "jacobian_count": 0, "simple": true}

``jacobian_count`` and ``simple`` are optional.  ``has_jacobian`` (bool) may
stand in for a count when only existence is known.  Every record is checked
against the polynomial decoded from its label before it is served.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, Optional

from .weil import WeilError, WeilPoly, label_decode, label_encode, parse_label
from .weil import point_counts as _point_counts

CACHE_ENV = "RELCLASS_CACHE_DIR"
URL_ENV = "RELCLASS_LMFDB_URL"
# only a template; the client never contacts anything unless offline=False
DEFAULT_URL_TEMPLATE = "https://www.lmfdb.org/api/av_fq_isog/?label={label}&_format=json"

YES, NO, UNKNOWN = "yes", "no", "unknown"

_KEYS = {"label", "q", "g", "counts", "jacobian_count", "simple", "has_jacobian", "source"}


class DataError(ValueError):
    """Schema or integrity violation in ingested data."""


class UnknownLabel(LookupError):
    pass


@dataclass(frozen=True)
class IsogenyRecord:
    label: str
    q: int
    g: int
    counts: tuple = ()
    jacobian_count: Optional[int] = None
    simple: Optional[bool] = None
    has_jacobian: Optional[bool] = None
    source: str = ""

    @property
    def weil(self) -> WeilPoly:
        return label_decode(self.label)

    def jacobian(self) -> str:
        if self.jacobian_count is not None:
            return YES if self.jacobian_count > 0 else NO
        if self.has_jacobian is not None:
            return YES if self.has_jacobian else NO
        return UNKNOWN

    def to_json(self) -> dict:
        d = {"label": self.label, "q": self.q, "g": self.g, "counts": list(self.counts)}
        for k in ("jacobian_count", "simple", "has_jacobian"):
            v = getattr(self, k)
            if v is not None:
                d[k] = v
        if self.source:
            d["source"] = self.source
        return d


def point_counts(W: WeilPoly, m: int) -> tuple:
    return _point_counts(W, m).values


def validate(rec: IsogenyRecord) -> IsogenyRecord:
    try:
        W = label_decode(rec.label)
    except WeilError as e:
        raise DataError(str(e)) from None
    if (W.q, W.g) != (rec.q, rec.g):
        raise DataError(f"{rec.label}: q/g fields ({rec.q}, {rec.g}) disagree with the label")
    if rec.counts:
        want = point_counts(W, len(rec.counts))
        if tuple(rec.counts) != want:
            raise DataError(f"{rec.label}: counts {tuple(rec.counts)} != {want} from the polynomial")
    if rec.jacobian_count is not None and rec.has_jacobian is not None:
        if (rec.jacobian_count > 0) != rec.has_jacobian:
            raise DataError(f"{rec.label}: jacobian_count and has_jacobian disagree")
    return rec


def record_from_json(obj: dict) -> IsogenyRecord:
    if not isinstance(obj, dict):
        raise DataError("record must be a JSON object")
    extra = set(obj) - _KEYS
    if extra:
        raise DataError(f"unknown fields {sorted(extra)}")
    for k in ("label", "q", "g"):
        if k not in obj:
            raise DataError(f"missing field {k!r}")
    jc = obj.get("jacobian_count")
    if jc is not None and (not isinstance(jc, int) or jc < 0):
        raise DataError("jacobian_count must be a nonnegative integer")
    counts = obj.get("counts", [])
    if not isinstance(counts, list) or not all(isinstance(c, int) for c in counts):
        raise DataError("counts must be a list of integers")
    return IsogenyRecord(str(obj["label"]), int(obj["q"]), int(obj["g"]), tuple(counts), jc,
                         obj.get("simple"), obj.get("has_jacobian"), obj.get("source", ""))


def from_lmfdb_api(obj: dict) -> IsogenyRecord:
    """Map one row of the site's JSON API onto a record."""
    counts = obj.get("curve_counts") or obj.get("curve_count") or []
    jc = obj.get("jacobian_count")
    if jc is not None and jc < 0:
        jc = None  # the site uses -1 for "not computed"
    hj = obj.get("has_jacobian")
    hj = bool(hj) if hj in (0, 1) else None  # -1 is "unknown" there too
    return IsogenyRecord(obj["label"], obj["q"], obj["g"], tuple(counts), jc, obj.get("is_simple"), hj, "lmfdb")


class CurveStore:
    """Read-mostly label -> record map with optional cache and HTTP fill."""

    def __init__(self, records: Iterable[IsogenyRecord] = (), offline: bool = True,
                 cache_dir=None, url_template: Optional[str] = None):
        self._recs: Dict[str, IsogenyRecord] = {}
        self._lock = threading.Lock()
        self.offline = offline
        cd = cache_dir if cache_dir is not None else os.environ.get(CACHE_ENV)
        self.cache_dir = Path(cd) if cd else None
        self.url_template = url_template or os.environ.get(URL_ENV) or DEFAULT_URL_TEMPLATE
        for r in records:
            self.add(r)

    def __len__(self):
        return len(self._recs)

    def __getstate__(self):
        st = dict(self.__dict__)
        del st["_lock"]
        return st

    def __setstate__(self, st):
        self.__dict__.update(st)
        self._lock = threading.Lock()

    def __contains__(self, label):
        return label in self._recs

    def labels(self) -> list:
        return sorted(self._recs)

    def add(self, rec: IsogenyRecord) -> None:
        validate(rec)
        with self._lock:
            old = self._recs.get(rec.label)
            if old is not None and old.jacobian() != UNKNOWN and rec.jacobian() != UNKNOWN \
                    and old.jacobian() != rec.jacobian():
                raise DataError(f"{rec.label}: conflicting Jacobian facts")
            if old is not None:
                rec = _merge(old, rec)
            self._recs[rec.label] = rec

    def update(self, other: "CurveStore") -> "CurveStore":
        for r in other._recs.values():
            self.add(r)
        return self

    def coverage(self) -> set:
        return {(r.q, r.g) for r in self._recs.values()}

    # ---- queries

    def fetch_isogeny(self, label: str) -> IsogenyRecord:
        parse_label(label)  # raises on malformed input
        rec = self._recs.get(label)
        if rec is not None:
            return rec
        rec = self._from_cache(label)
        if rec is None and not self.offline:
            try:
                rec = self._from_http(label)
            except (OSError, json.JSONDecodeError, KeyError):
                rec = None  # network trouble: degrade to what we have
        if rec is None:
            raise UnknownLabel(label)
        self.add(rec)
        self._to_cache(rec)
        return rec

    def jacobian_exists(self, W) -> str:
        label = W if isinstance(W, str) else str(label_encode(W))
        rec = self._recs.get(label)
        if rec is None:
            try:
                rec = self.fetch_isogeny(label)
            except UnknownLabel:
                return UNKNOWN
        return rec.jacobian()

    # ---- persistence

    def _cache_path(self, label: str) -> Optional[Path]:
        return self.cache_dir / f"{label}.json" if self.cache_dir else None

    def _from_cache(self, label: str) -> Optional[IsogenyRecord]:
        p = self._cache_path(label)
        if p is None or not p.exists():
            return None
        return validate(record_from_json(json.loads(p.read_text())))

    def _to_cache(self, rec: IsogenyRecord) -> None:
        p = self._cache_path(rec.label)
        if p is None or p.exists():
            return
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(json.dumps(rec.to_json(), sort_keys=True) + "\n")

    def _from_http(self, label: str) -> Optional[IsogenyRecord]:
        import urllib.request
        url = self.url_template.format(label=label)
        with urllib.request.urlopen(url, timeout=20) as fh:
            payload = json.load(fh)
        rows = payload.get("data", payload) if isinstance(payload, dict) else payload
        if not rows:
            return None
        return from_lmfdb_api(rows[0])  # validated by add()

    def cache_export(self, path) -> Path:
        """Write all records as sorted JSON lines (byte-stable)."""
        path = Path(path)
        lines = [json.dumps(self._recs[k].to_json(), sort_keys=True) for k in sorted(self._recs)]
        path.write_text("".join(line + "\n" for line in lines))
        return path


def _merge(a: IsogenyRecord, b: IsogenyRecord) -> IsogenyRecord:
    counts = a.counts if len(a.counts) >= len(b.counts) else b.counts
    pick = lambda x, y: x if x is not None else y
    src = a.source if not b.source or b.source == a.source else ",".join(sorted({a.source, b.source}))
    return IsogenyRecord(a.label, a.q, a.g, counts, pick(a.jacobian_count, b.jacobian_count),
                         pick(a.simple, b.simple), pick(a.has_jacobian, b.has_jacobian), src)


def bulk_load(path, offline: bool = True, cache_dir=None) -> CurveStore:
    """Load a JSON-lines file; schema errors report the line number."""
    recs = []
    with open(path) as fh:
        for n, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                recs.append(validate(record_from_json(json.loads(line))))
            except (json.JSONDecodeError, DataError) as e:
                raise DataError(f"{path}:{n}: {e}") from None
    return CurveStore(recs, offline=offline, cache_dir=cache_dir)


def load_dir(path, offline: bool = True) -> CurveStore:
    store = CurveStore(offline=offline)
    for p in sorted(Path(path).glob("*.jsonl")):
        store.update(bulk_load(p))
    return store


DATA_DIR = Path(__file__).with_name("data")
FIXTURE_DIR = DATA_DIR / "fixtures"


def order_one_fixture() -> CurveStore:
    return bulk_load(FIXTURE_DIR / "order_one.jsonl")


def curve_fixture() -> CurveStore:
    """Curve facts read off the published tables (see README, Data)."""
    return load_dir(FIXTURE_DIR)
