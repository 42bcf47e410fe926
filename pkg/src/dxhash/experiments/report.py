"""CSV report format shared by every experiment.

Layout: comment header lines starting with '#' (always `# seed=S version=V`
first), then a header row and data rows with the columns

    experiment,algorithm,param_json,metric,value

param_json is compact JSON with sorted keys, and float values are written
with repr (shortest round-trip form), so a report is byte-identical across
runs of the same configuration and seed. Metrics whose values depend on the
machine or the moment (timings) are named with a `wallclock_` prefix;
everything else is reproducible.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Iterable, Mapping

COLUMNS = ("experiment", "algorithm", "param_json", "metric", "value")

WALLCLOCK_PREFIX = "wallclock_"


@dataclass(frozen=True)
class ReportRow:
    experiment: str
    algorithm: str
    params: Mapping[str, object]
    metric: str
    value: float | int

    def as_csv_row(self) -> tuple[str, str, str, str, str]:
        return (
            self.experiment,
            self.algorithm,
            json.dumps(dict(self.params), sort_keys=True, separators=(",", ":")),
            self.metric,
            _format_value(self.value),
        )


def _format_value(value: float | int) -> str:
    if isinstance(value, bool):
        raise TypeError("boolean metrics are not allowed")
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def render_report(
    rows: Iterable[ReportRow], seed: int, version: str, extra_header: Mapping[str, str] | None = None
) -> str:
    buf = io.StringIO()
    buf.write(f"# seed={seed} version={version}\n")
    for key, val in (extra_header or {}).items():
        buf.write(f"# {key}={val}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow(row.as_csv_row())
    return buf.getvalue()


def write_report(
    path: str,
    rows: Iterable[ReportRow],
    seed: int,
    version: str,
    extra_header: Mapping[str, str] | None = None,
) -> None:
    text = render_report(rows, seed, version, extra_header)
    with open(path, "w", newline="") as f:
        f.write(text)


def read_report(path: str) -> tuple[dict[str, str], list[dict[str, str]]]:
    """Parse a report back into (header metadata, data rows)."""
    meta: dict[str, str] = {}
    data_lines: list[str] = []
    with open(path, "r", newline="") as f:
        for line in f:
            if line.startswith("#"):
                for part in line[1:].strip().split():
                    if "=" in part:
                        key, _, val = part.partition("=")
                        meta[key] = val
            else:
                data_lines.append(line)
    reader = csv.DictReader(data_lines)
    return meta, list(reader)
