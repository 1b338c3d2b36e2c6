"""Element catalogs: CVSS v3.1 vectors, control frameworks, custom lists.

A catalog is the domain set a session draws its elements from. CVSS vectors
are parsed and rendered in the canonical 8-metric string form; vectors whose
impact metrics are all None describe no vulnerability and are excluded, which
leaves 2496 legal vectors. Control catalogs (e.g. privacy or cyber security
framework subcategories) load from JSON with id/title/description entries.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

CATALOG_FORMAT_VERSION = 1

CVSS_PREFIX = "CVSS:3.1/"

CVSS_METRICS: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("AV", ("N", "A", "L", "P")),
    ("AC", ("L", "H")),
    ("PR", ("N", "L", "H")),
    ("UI", ("N", "R")),
    ("S", ("U", "C")),
    ("C", ("N", "L", "H")),
    ("I", ("N", "L", "H")),
    ("A", ("N", "L", "H")),
)
_METRIC_KEYS = tuple(k for k, _ in CVSS_METRICS)
_LEGAL = {k: set(vals) for k, vals in CVSS_METRICS}


class CatalogError(ValueError):
    """Malformed catalog data."""


class CvssParseError(CatalogError):
    def __init__(self, message: str, code: str) -> None:
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class CvssVector:
    av: str
    ac: str
    pr: str
    ui: str
    s: str
    c: str
    i: str
    a: str

    def __post_init__(self) -> None:
        for key, value in zip(_METRIC_KEYS, self.values()):
            if value not in _LEGAL[key]:
                raise CvssParseError(
                    f"illegal value {value!r} for metric {key}", code="illegal-value"
                )
        if self.c == self.i == self.a == "N":
            raise CvssParseError(
                "vector has no impact (C, I and A all None)", code="no-impact"
            )

    def values(self) -> tuple[str, ...]:
        return (self.av, self.ac, self.pr, self.ui, self.s, self.c, self.i, self.a)

    def value(self, key: str) -> str:
        return self.values()[_METRIC_KEYS.index(key)]

    def __str__(self) -> str:
        return "/".join(f"{k}:{v}" for k, v in zip(_METRIC_KEYS, self.values()))


def parse_cvss_vector(text: str) -> CvssVector:
    """Parse a base vector string, tolerating the CVSS:3.1/ prefix."""
    body = text[len(CVSS_PREFIX):] if text.startswith(CVSS_PREFIX) else text
    found: dict[str, str] = {}
    for part in body.split("/"):
        if ":" not in part:
            raise CvssParseError(f"malformed metric {part!r}", code="malformed")
        key, _, value = part.partition(":")
        if key not in _LEGAL:
            raise CvssParseError(f"unknown metric {key!r}", code="unknown-metric")
        if key in found:
            raise CvssParseError(f"duplicate metric {key!r}", code="duplicate-metric")
        found[key] = value
    missing = [k for k in _METRIC_KEYS if k not in found]
    if missing:
        raise CvssParseError(f"missing metrics {missing}", code="missing-metric")
    return CvssVector(*(found[k] for k in _METRIC_KEYS))


def enumerate_cvss_vectors() -> list[CvssVector]:
    """All 2496 legal vectors, in metric-definition order."""
    vectors: list[CvssVector] = []

    def walk(prefix: list[str], idx: int) -> None:
        if idx == len(CVSS_METRICS):
            if not (prefix[5] == prefix[6] == prefix[7] == "N"):
                vectors.append(CvssVector(*prefix))
            return
        for value in CVSS_METRICS[idx][1]:
            walk(prefix + [value], idx + 1)

    walk([], 0)
    return vectors


@dataclass(frozen=True)
class MetricHint:
    """Per-metric rendering hint for the comparison console."""

    key: str
    left: str
    right: str
    shared: bool


def comparison_hints(left: CvssVector, right: CvssVector) -> list[MetricHint]:
    return [
        MetricHint(k, lv, rv, lv == rv)
        for k, lv, rv in zip(_METRIC_KEYS, left.values(), right.values())
    ]


# -- frequency-ranked CVSS elements -------------------------------------------


@dataclass(frozen=True)
class FrequencyEntry:
    vector: CvssVector
    count: int


class FrequencyTable:
    """Vectors ranked by observed count, descending, ties broken by string."""

    def __init__(self, entries: Iterable[FrequencyEntry]) -> None:
        self.entries = sorted(entries, key=lambda e: (-e.count, str(e.vector)))
        self._total = sum(e.count for e in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def total_count(self) -> int:
        return self._total

    def top(self, k: int) -> list[str]:
        return [str(e.vector) for e in self.entries[:k]]

    def coverage(self, k: int) -> float:
        if self._total == 0:
            return 0.0
        return sum(e.count for e in self.entries[:k]) / self._total

    def top_for_coverage(self, fraction: float) -> list[str]:
        """Smallest prefix covering at least the given fraction of counts."""
        acc = 0
        out: list[str] = []
        for e in self.entries:
            out.append(str(e.vector))
            acc += e.count
            if self._total and acc / self._total >= fraction:
                break
        return out


def load_frequency_ranked(path: str | Path) -> FrequencyTable:
    """Read "vector,count" CSV rows into a ranked table."""
    return parse_frequency_csv(Path(path).read_text("utf-8"))


def parse_frequency_csv(text: str) -> FrequencyTable:
    entries: list[FrequencyEntry] = []
    reader = csv.reader(io.StringIO(text))
    for lineno, row in enumerate(reader, start=1):
        if not row or row[0].startswith("#"):
            continue
        if row[0].strip().lower() == "vector":
            continue  # header
        if len(row) != 2:
            raise CatalogError(f"line {lineno}: expected 'vector,count', got {row!r}")
        try:
            count = int(row[1])
        except ValueError as exc:
            raise CatalogError(f"line {lineno}: bad count {row[1]!r}") from exc
        if count < 0:
            raise CatalogError(f"line {lineno}: negative count")
        entries.append(FrequencyEntry(parse_cvss_vector(row[0].strip()), count))
    return FrequencyTable(entries)


# -- control catalogs ----------------------------------------------------------

_LEVELS = ("function", "category", "subcategory")


@dataclass(frozen=True)
class ControlEntry:
    id: str
    title: str
    description: str
    level: str

    def __post_init__(self) -> None:
        if self.level not in _LEVELS:
            raise CatalogError(f"unknown control level {self.level!r}")


def load_control_catalog(path: str | Path) -> list[ControlEntry]:
    return parse_control_catalog(json.loads(Path(path).read_text("utf-8")))


def parse_control_catalog(data: Mapping) -> list[ControlEntry]:
    """Validate a control hierarchy document and return its entries."""
    if data.get("formatVersion") != CATALOG_FORMAT_VERSION:
        raise CatalogError(f"unsupported catalog formatVersion {data.get('formatVersion')!r}")
    raw = data.get("elements") or []
    if not raw:
        raise CatalogError("catalog has no elements")
    entries = [
        ControlEntry(
            id=item["id"],
            title=item.get("title", ""),
            description=item.get("description", ""),
            level=item.get("level", "subcategory"),
        )
        for item in raw
    ]
    ids = [e.id for e in entries]
    if len(set(ids)) != len(ids):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        raise CatalogError(f"duplicate control ids: {dupes}")
    expected = data.get("expectedCounts") or {}
    for level, want in expected.items():
        got = sum(1 for e in entries if e.level == level)
        if got != want:
            raise CatalogError(f"expected {want} {level} entries, found {got}")
    return entries


# -- generic catalogs (what sessions draw from) ---------------------------------


@dataclass(frozen=True)
class Catalog:
    """A named, ordered element domain plus rendering payloads."""

    ref: str
    kind: str  # "cvss" | "controls" | "custom"
    elements: tuple[str, ...]
    controls: Mapping[str, ControlEntry] | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("cvss", "controls", "custom"):
            raise CatalogError(f"unknown catalog kind {self.kind!r}")
        if not self.elements:
            raise CatalogError("catalog has no elements")
        if len(set(self.elements)) != len(self.elements):
            raise CatalogError("catalog elements contain duplicates")
        if self.kind == "cvss":
            for e in self.elements:
                parse_cvss_vector(e)

    def render_element(self, element: str) -> dict:
        if element not in self.elements:
            raise CatalogError(f"element {element!r} not in catalog {self.ref!r}")
        if self.kind == "controls" and self.controls and element in self.controls:
            c = self.controls[element]
            return {"id": c.id, "title": c.title, "description": c.description}
        return {"id": element}

    def render_question(self, new_element: str, probe: str) -> dict:
        """Payload the comparison console renders without any domain logic."""
        if self.kind == "cvss":
            hints = comparison_hints(
                parse_cvss_vector(new_element), parse_cvss_vector(probe)
            )
            return {
                "kind": "cvss",
                "metrics": [
                    {"key": h.key, "new": h.left, "probe": h.right, "shared": h.shared}
                    for h in hints
                ],
            }
        return {
            "kind": self.kind,
            "new": self.render_element(new_element),
            "probe": self.render_element(probe),
        }

    def to_json_dict(self) -> dict:
        doc: dict = {
            "formatVersion": CATALOG_FORMAT_VERSION,
            "ref": self.ref,
            "kind": self.kind,
            "elements": list(self.elements),
        }
        if self.kind == "controls" and self.controls:
            doc["controls"] = [
                {
                    "id": c.id,
                    "title": c.title,
                    "description": c.description,
                    "level": c.level,
                }
                for c in self.controls.values()
            ]
        return doc


def load_catalog(path: str | Path) -> Catalog:
    data = json.loads(Path(path).read_text("utf-8"))
    return catalog_from_json(data, default_ref=Path(path).stem)


def catalog_from_json(data: Mapping, default_ref: str = "catalog") -> Catalog:
    if data.get("formatVersion") != CATALOG_FORMAT_VERSION:
        raise CatalogError(f"unsupported catalog formatVersion {data.get('formatVersion')!r}")
    kind = data.get("kind", "custom")
    ref = data.get("ref", default_ref)
    if kind == "controls" and "controls" in data:
        entries = [
            ControlEntry(
                id=item["id"],
                title=item.get("title", ""),
                description=item.get("description", ""),
                level=item.get("level", "subcategory"),
            )
            for item in data["controls"]
        ]
        controls = {e.id: e for e in entries}
        elements = tuple(data.get("elements") or [e.id for e in entries if e.level == "subcategory"])
        return Catalog(ref, "controls", elements, controls)
    return Catalog(ref, kind, tuple(data["elements"]))


def control_catalog(ref: str, entries: Sequence[ControlEntry]) -> Catalog:
    """Catalog of a control hierarchy's subcategories, in document order."""
    subs = tuple(e.id for e in entries if e.level == "subcategory")
    return Catalog(ref, "controls", subs, {e.id: e for e in entries})


def cvss_catalog_from_frequency(ref: str, table: FrequencyTable, top: int | None = None) -> Catalog:
    elements = table.top(top) if top is not None else table.top(len(table))
    return Catalog(ref, "cvss", tuple(elements))


# -- bundled data assets ---------------------------------------------------------


def _data_text(name: str) -> str:
    return resources.files("scoregraph.data").joinpath(name).read_text("utf-8")


def builtin_catalog(name: str) -> Catalog:
    """Catalogs shipped with the package.

    "cvss-top65" is the head of the bundled frequency snapshot; "pf" and
    "csf" are privacy / cyber security framework subcategory hierarchies.
    """
    if name == "cvss-top65":
        table = parse_frequency_csv(_data_text("cvss_frequency_snapshot.csv"))
        return cvss_catalog_from_frequency("cvss-top65", table, top=65)
    if name == "pf":
        entries = parse_control_catalog(json.loads(_data_text("pf_subcategories.json")))
        return control_catalog("pf", entries)
    if name == "csf":
        entries = parse_control_catalog(json.loads(_data_text("csf_subcategories.json")))
        return control_catalog("csf", entries)
    raise CatalogError(f"unknown builtin catalog {name!r}")


def builtin_frequency_table() -> FrequencyTable:
    return parse_frequency_csv(_data_text("cvss_frequency_snapshot.csv"))
