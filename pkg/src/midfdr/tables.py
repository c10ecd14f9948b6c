"""Count-table ingestion and per-table multiple-testing reports.

Input is a UTF-8 CSV with header ``id,c1,c2`` (binomial tests) or
``id,c1,c2,N1,N2`` (Fisher's exact tests).
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .exact import binomial_half, hypergeometric
from .procedures import adaptive_bh, bh, sarp, storey_pi0
from .pvalues import PValueRecord, pvalue_record, pvalue_support

__all__ = [
    "IngestError",
    "CountRow",
    "CountTable",
    "RunReport",
    "ingest",
    "read_count_table",
    "run_tests",
    "METHOD_NAMES",
]

METHOD_NAMES = {"bh": "BH", "bh-midp": "BH-Midp", "abh": "aBH", "abh-midp": "aBH-Midp", "sarp": "SARP"}


class IngestError(ValueError):
    pass


@dataclass(frozen=True)
class CountRow:
    id: str
    c1: int
    c2: int
    N1: Optional[int] = None
    N2: Optional[int] = None

    @property
    def total(self) -> int:
        return self.c1 + self.c2


@dataclass
class CountTable:
    rows: list[CountRow]
    family: str = "bt"
    removed: int = 0

    def __len__(self):
        return len(self.rows)


def _parse_int(raw: str, col: str, rownum: int) -> int:
    try:
        value = int(raw.strip())
    except (ValueError, AttributeError):
        raise IngestError(f"row {rownum}: column {col} is not an integer: {raw!r}") from None
    if value < 0:
        raise IngestError(f"row {rownum}: column {col} is negative ({value})")
    return value


def read_count_table(path) -> CountTable:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise IngestError(f"{path} is empty") from None
        if header[:3] != ["id", "c1", "c2"] or header[3:] not in ([], ["N1", "N2"]):
            raise IngestError(f"unexpected header {header}; want id,c1,c2[,N1,N2]")
        fet = len(header) == 5
        rows, seen = [], set()
        for rownum, fields in enumerate(reader, start=1):
            if not fields or all(not f.strip() for f in fields):
                continue
            if len(fields) != len(header):
                raise IngestError(f"row {rownum}: expected {len(header)} fields, got {len(fields)}")
            rid = fields[0].strip()
            if rid in seen:
                raise IngestError(f"row {rownum}: duplicate id {rid!r}")
            seen.add(rid)
            c1, c2 = _parse_int(fields[1], "c1", rownum), _parse_int(fields[2], "c2", rownum)
            if fet:
                N1, N2 = _parse_int(fields[3], "N1", rownum), _parse_int(fields[4], "N2", rownum)
                if N1 < 1 or N2 < 1:
                    raise IngestError(f"row {rownum}: group sizes must be positive")
                if c1 > N1 or c2 > N2:
                    raise IngestError(f"row {rownum}: counts exceed group sizes")
                rows.append(CountRow(rid, c1, c2, N1, N2))
            else:
                rows.append(CountRow(rid, c1, c2))
    return CountTable(rows, "fet" if fet else "bt")


def ingest(path, min_total: int = 0) -> CountTable:
    """Read a count table and drop rows whose total count is below ``min_total``."""
    if min_total < 0:
        raise ValueError("min_total must be non-negative")
    table = read_count_table(path)
    kept = [r for r in table.rows if r.total >= min_total]
    return CountTable(kept, table.family, len(table.rows) - len(kept))


def _null_pmf(row: CountRow, family: str):
    if family == "fet":
        return hypergeometric(row.N1, row.N2, row.total)
    return binomial_half(row.total)


@dataclass
class RunReport:
    alpha: float
    methods: list[str]
    lam: float
    seed: Optional[int]
    ids: list[str]
    conventional: list[Fraction]
    mid: list[Fraction]
    flags: dict[str, str] = field(default_factory=dict)
    pi0: dict[str, float] = field(default_factory=dict)
    rejected: dict[str, list[bool]] = field(default_factory=dict)
    removed: int = 0

    @property
    def discoveries(self) -> dict[str, int]:
        return {k: int(sum(v)) for k, v in self.rejected.items()}

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "methods": list(self.methods),
            "lambda": self.lam,
            "seed": self.seed,
            "removed": self.removed,
            "tests": [
                {"id": i, "conventional": str(p), "mid": str(q)}
                for i, p, q in zip(self.ids, self.conventional, self.mid)
            ],
            "flags": dict(self.flags),
            "pi0": dict(self.pi0),
            "rejected": {k: list(v) for k, v in self.rejected.items()},
            "discoveries": self.discoveries,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "RunReport":
        tests = d["tests"]
        return cls(
            alpha=d["alpha"],
            methods=list(d["methods"]),
            lam=d["lambda"],
            seed=d["seed"],
            ids=[t["id"] for t in tests],
            conventional=[Fraction(t["conventional"]) for t in tests],
            mid=[Fraction(t["mid"]) for t in tests],
            flags=dict(d["flags"]),
            pi0=dict(d["pi0"]),
            rejected={k: list(v) for k, v in d["rejected"].items()},
            removed=d.get("removed", 0),
        )

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls.from_dict(json.loads(text))

    def csv_rows(self) -> list[dict]:
        out = []
        for k, rid in enumerate(self.ids):
            row = {
                "id": rid,
                "conventional": float(self.conventional[k]),
                "mid": float(self.mid[k]),
                "flag": self.flags.get(rid, ""),
            }
            for name in self.methods:
                row[name] = int(self.rejected[name][k])
            out.append(row)
        return out


def table_records(table: CountTable) -> tuple[list[Optional[PValueRecord]], dict[str, str]]:
    """P-value records per row; ``None`` for untestable rows (total 0)."""
    records, flags = [], {}
    for row in table.rows:
        if row.total == 0:
            records.append(None)
            flags[row.id] = "untestable"
            continue
        pmf = _null_pmf(row, table.family)
        records.append(pvalue_record(pmf, row.c1))
        if len(pvalue_support(pmf).entries) == 1:
            flags[row.id] = "dirac"
    return records, flags


def run_tests(
    table: CountTable,
    alpha: float = 0.05,
    methods: Sequence[str] = ("bh", "bh-midp"),
    lam: float = 0.5,
    seed: Optional[int] = None,
) -> RunReport:
    names = []
    for m in methods:
        key = m.lower()
        if key not in METHOD_NAMES:
            raise ValueError(f"unknown method {m!r}; choose from {', '.join(METHOD_NAMES)}")
        if METHOD_NAMES[key] not in names:
            names.append(METHOD_NAMES[key])
    if "SARP" in names and seed is None:
        raise ValueError("SARP uses randomized p-values and needs an explicit seed")
    if not 0 < alpha < 1:
        raise ValueError(f"alpha={alpha} outside (0, 1)")

    records, flags = table_records(table)
    one = PValueRecord(-1, Fraction(1), Fraction(0))
    records = [r if r is not None else one for r in records]
    conv = [r.conventional for r in records]
    mid = [r.mid for r in records]
    report = RunReport(alpha, names, lam, seed, [r.id for r in table.rows], conv, mid, flags, removed=table.removed)
    if not records:
        report.rejected = {n: [] for n in names}
        return report

    pc = np.array([float(p) for p in conv])
    pm = np.array([float(p) for p in mid])
    m = len(records)
    for name in names:
        if name == "BH":
            res = bh(pc, alpha)
        elif name == "BH-Midp":
            res = bh(pm, alpha)
        elif name == "aBH":
            report.pi0[name] = storey_pi0(pc, lam)
            res = adaptive_bh(pc, alpha, report.pi0[name])
        elif name == "aBH-Midp":
            report.pi0[name] = storey_pi0(pm, lam)
            res = adaptive_bh(pm, alpha, report.pi0[name])
        else:
            res = sarp(records, alpha, lam, seed)
            report.pi0[name] = res.pi0
        mask = res.mask() if m else []
        report.rejected[name] = [bool(b) for b in mask]
    return report
