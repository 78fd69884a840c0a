"""CSV and JSON ingestion/emission for panels, TE matrices and reports.

Panel CSV: one header row of channel labels, one row per time sample of
decimal floats, LF line endings. TE matrix CSV: "from/to" corner cell,
rows are sources, columns targets, values printed with 4 decimals and
same-process cells as "--". Reports travel as a JSON document carrying the
per-target outcomes, both TE matrices (raw and clamped) and provenance.

All writers are byte-deterministic for identical inputs; the only
timestamp lives in the provenance block.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ParseError
from .panel import TEMatrix, TimeSeriesPanel
from .selection import RedundancyReport

CURVES_FILE = "redundancy_curves.csv"
HIDDEN_HIST_FILE = "hidden_histogram.csv"
RELEVANT_HIST_FILE = "relevant_histogram.csv"
TSET_HIST_FILE = "target_relevant_histogram.csv"


def load_panel_csv(path) -> TimeSeriesPanel:
    """Parse a labeled-channel CSV into a validated panel.

    Raises ParseError with the 1-based line (and column) of the offense;
    non-finite values surface as NonFiniteError with channel and sample.
    """
    path = Path(path)
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty panel file", line=1) from None
        labels = [h.strip() for h in header]
        if any(not lab for lab in labels):
            raise ParseError("blank channel label in header", line=1)
        rows = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(labels):
                raise ParseError(
                    f"expected {len(labels)} values, found {len(row)}", line=line_no
                )
            values = []
            for col_no, cell in enumerate(row, start=1):
                try:
                    values.append(float(cell))
                except ValueError:
                    raise ParseError(
                        f"not a decimal float: {cell!r}", line=line_no, column=col_no
                    ) from None
            rows.append(values)
    if not rows:
        raise ParseError("panel file has no sample rows", line=1)
    return TimeSeriesPanel(tuple(labels), np.asarray(rows, dtype=np.float64).T)


def save_panel_csv(panel: TimeSeriesPanel, path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(panel.channels) + "\n")
        for t in range(panel.sample_count):
            fh.write(",".join(repr(float(v)) for v in panel.data[:, t]) + "\n")


def _label_of(matrix: TEMatrix, pid: int) -> str:
    if matrix.labels and 0 <= pid < len(matrix.labels):
        return matrix.labels[pid]
    return f"p{pid}"


def save_te_matrix_csv(matrix: TEMatrix, path, raw: bool = False) -> None:
    """Write sources-by-targets TE values, 4 decimals, "--" where absent."""
    values = matrix.raw_values if raw else matrix.values
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("from/to," + ",".join(_label_of(matrix, j) for j in matrix.col_ids) + "\n")
        for r, i in enumerate(matrix.row_ids):
            cells = [
                "--" if np.isnan(values[r, c]) else f"{values[r, c]:.4f}"
                for c in range(len(matrix.col_ids))
            ]
            fh.write(_label_of(matrix, i) + "," + ",".join(cells) + "\n")


def load_te_matrix_csv(path) -> tuple[list[str], list[str], np.ndarray]:
    """Read back a TE matrix CSV: (source labels, target labels, values)."""
    path = Path(path)
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if not header or header[0] != "from/to":
            raise ParseError("first header cell must be 'from/to'", line=1)
        targets = header[1:]
        sources = []
        rows = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(targets) + 1:
                raise ParseError("ragged TE matrix row", line=line_no)
            sources.append(row[0])
            rows.append([np.nan if cell == "--" else float(cell) for cell in row[1:]])
    return sources, targets, np.asarray(rows, dtype=np.float64)


@dataclass(frozen=True)
class ReportBundle:
    """Everything one analysis run produced, ready for serialization."""

    channels: tuple
    reports: tuple
    te_source_to_target: TEMatrix
    te_among_sources: TEMatrix
    provenance: dict

    def label(self, pid: int) -> str:
        return self.channels[pid]


@dataclass(frozen=True)
class RunConfig:
    """Effective parameters of one analysis run, echoed into provenance.

    ``targets`` and ``sources`` are channel labels; they must resolve in
    the panel being analyzed (the CLI validates this on load).
    """

    input: str
    targets: tuple
    sources: tuple
    max_lag: int
    horizon: int
    k_neighbors: int
    jitter_amplitude: float
    eta_t: float
    eta_h: float
    seed: int

    def as_dict(self) -> dict:
        return {
            "input": self.input,
            "targets": list(self.targets),
            "sources": list(self.sources),
            "max_lag": self.max_lag,
            "horizon": self.horizon,
            "k_neighbors": self.k_neighbors,
            "jitter_amplitude": self.jitter_amplitude,
            "eta_t": self.eta_t,
            "eta_h": self.eta_h,
        }


def make_provenance(config, seed: int) -> dict:
    if isinstance(config, RunConfig):
        config = config.as_dict()
    return {
        "tool": "redte",
        "version": __version__,
        "seed": int(seed),
        "config": config,
        "created_at": datetime.now(timezone.utc).isoformat(),
    }


def _matrix_payload(matrix: TEMatrix, channels) -> dict:
    def clean(arr):
        return [[None if np.isnan(v) else float(v) for v in row] for row in arr]

    return {
        "sources": [channels[i] for i in matrix.row_ids],
        "targets": [channels[j] for j in matrix.col_ids],
        "values": clean(matrix.values),
        "raw_values": clean(matrix.raw_values),
    }


def _report_payload(report: RedundancyReport, channels) -> dict:
    return {
        "target": channels[report.target],
        "target_relevant": [channels[j] for j in report.target_relevant],
        "hidden": channels[report.hidden],
        "relevant": [channels[j] for j in report.relevant],
        "r_phi_to_z": report.r_phi_to_z,
        "r_phi_to_set": report.r_phi_to_set,
        "r_set_to_z": report.r_set_to_z,
        "bound": report.bound,
        "degenerate_flags": list(report.degenerate_flags),
    }


def save_reports_json(bundle: ReportBundle, path) -> None:
    doc = {
        "provenance": bundle.provenance,
        "channels": list(bundle.channels),
        "te_source_to_target": _matrix_payload(bundle.te_source_to_target, bundle.channels),
        "te_among_sources": _matrix_payload(bundle.te_among_sources, bundle.channels),
        "reports": [_report_payload(r, bundle.channels) for r in bundle.reports],
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def load_reports_json(path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def emit_plot_data(bundle: ReportBundle, out_dir) -> list[Path]:
    """Write per-target bound-term curves and selection histograms.

    Produces the curve CSV (one row per target), histograms of how often
    each source is chosen as hidden and as relevant, and the membership
    histogram of the target-relevant sets. Empty bundles produce
    headers-only files.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    curves = out_dir / CURVES_FILE
    with curves.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("target,r_phi_to_z,r_phi_to_set,r_set_to_z,bound\n")
        for rep in bundle.reports:
            fh.write(
                f"{bundle.label(rep.target)},{rep.r_phi_to_z!r},{rep.r_phi_to_set!r},"
                f"{rep.r_set_to_z!r},{rep.bound!r}\n"
            )
    written.append(curves)

    source_ids = list(bundle.te_among_sources.row_ids)
    specs = [
        (HIDDEN_HIST_FILE, lambda rep: [rep.hidden]),
        (RELEVANT_HIST_FILE, lambda rep: rep.relevant),
        (TSET_HIST_FILE, lambda rep: rep.target_relevant),
    ]
    for filename, extract in specs:
        counts = {pid: 0 for pid in source_ids}
        for rep in bundle.reports:
            for pid in extract(rep):
                if pid in counts:
                    counts[pid] += 1
        path = out_dir / filename
        with path.open("w", encoding="utf-8", newline="\n") as fh:
            fh.write("source,count\n")
            for pid in source_ids:
                fh.write(f"{bundle.label(pid)},{counts[pid]}\n")
        written.append(path)
    return written
