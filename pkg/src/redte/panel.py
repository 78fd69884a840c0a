"""Core data carriers: labeled multichannel time series and TE matrices.

A panel stores J channels of N real samples each, row-contiguous per
channel so that sliding history windows are contiguous reads. Panels are
immutable after construction and safe to share across workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConstantChannelError,
    DuplicateLabelError,
    LengthMismatchError,
    NonFiniteError,
)

# 0-based channel index into a TimeSeriesPanel.
ProcessId = int


@dataclass(frozen=True)
class TimeSeriesPanel:
    """J labeled channels x N samples of real-valued observations.

    ``data`` has shape (J, N); ``data[j]`` is channel ``channels[j]``.
    Construction validates labels, shape and finiteness.
    """

    channels: tuple[str, ...]
    data: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "channels", tuple(self.channels))
        arr = np.ascontiguousarray(self.data, dtype=np.float64)
        if arr.ndim != 2:
            raise LengthMismatchError("panel data must be a 2-d channels x samples array")
        if arr.shape[0] != len(self.channels):
            raise LengthMismatchError(
                f"{len(self.channels)} labels for {arr.shape[0]} data rows"
            )
        if arr.shape[1] < 1:
            raise LengthMismatchError("panel needs at least one sample")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)
        validate_panel(self)

    @property
    def n_channels(self) -> int:
        return self.data.shape[0]

    @property
    def sample_count(self) -> int:
        return self.data.shape[1]

    def channel(self, j: ProcessId) -> np.ndarray:
        return self.data[j]

    def index_of(self, label: str) -> ProcessId:
        try:
            return self.channels.index(label)
        except ValueError:
            raise KeyError(f"no channel labeled {label!r}") from None

    @classmethod
    def from_channels(cls, named: dict[str, np.ndarray]) -> "TimeSeriesPanel":
        labels = tuple(named)
        rows = [np.asarray(v, dtype=np.float64) for v in named.values()]
        lengths = {r.shape for r in rows}
        if any(r.ndim != 1 for r in rows) or len(lengths) > 1:
            raise LengthMismatchError("all channels must be 1-d and equally long")
        return cls(labels, np.vstack(rows) if rows else np.empty((0, 0)))


def validate_panel(panel: TimeSeriesPanel) -> TimeSeriesPanel:
    """Check panel invariants and return the panel unchanged.

    Raises NonFiniteError (with channel/sample location), DuplicateLabelError
    or LengthMismatchError. Idempotent.
    """
    seen = set()
    for label in panel.channels:
        if label in seen:
            raise DuplicateLabelError(label)
        seen.add(label)
    finite = np.isfinite(panel.data)
    if not finite.all():
        j, t = np.argwhere(~finite)[0]
        raise NonFiniteError(panel.channels[j], int(t))
    return panel


_VAR_FLOOR = 1e-15


def _standardize_channel(x: np.ndarray, label: str = "?") -> np.ndarray:
    var = float(np.var(x, ddof=1)) if x.size > 1 else 0.0
    if var < _VAR_FLOOR:
        raise ConstantChannelError(label)
    return (x - np.mean(x)) / np.sqrt(var)


def standardize(panel: TimeSeriesPanel) -> TimeSeriesPanel:
    """Rescale every channel to sample mean 0 and unbiased variance 1.

    Raises ConstantChannelError if any channel's variance is below 1e-15.
    Idempotent to 1e-12 and invariant under affine rescaling of a channel.
    """
    rows = [
        _standardize_channel(panel.data[j], panel.channels[j])
        for j in range(panel.n_channels)
    ]
    return TimeSeriesPanel(panel.channels, np.vstack(rows))


_ABSENT = np.nan


@dataclass(frozen=True)
class TEMatrix:
    """Directed transfer-entropy estimates in bits among chosen processes.

    Rows are sources, columns targets. Entries where source and target are
    the same panel process are undefined and stored as NaN ("absent"), never
    0. ``values`` clamps estimator noise at 0; ``raw_values`` keeps the
    signed estimates.
    """

    row_ids: tuple[ProcessId, ...]
    col_ids: tuple[ProcessId, ...]
    values: np.ndarray
    raw_values: np.ndarray
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "row_ids", tuple(int(i) for i in self.row_ids))
        object.__setattr__(self, "col_ids", tuple(int(j) for j in self.col_ids))
        vals = np.ascontiguousarray(self.values, dtype=np.float64)
        raw = np.ascontiguousarray(self.raw_values, dtype=np.float64)
        shape = (len(self.row_ids), len(self.col_ids))
        if vals.shape != shape or raw.shape != shape:
            raise LengthMismatchError(f"TE matrix shape must be {shape}")
        with np.errstate(invalid="ignore"):
            if np.any(vals < 0):
                raise ValueError("clamped TE values must be nonnegative")
        for r, i in enumerate(self.row_ids):
            for c, j in enumerate(self.col_ids):
                if i == j and not (np.isnan(vals[r, c]) and np.isnan(raw[r, c])):
                    raise ValueError("same-process entries must be absent (NaN)")
        vals.setflags(write=False)
        raw.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "raw_values", raw)
        object.__setattr__(self, "labels", tuple(self.labels))

    def value(self, source: ProcessId, target: ProcessId) -> float:
        return float(self.values[self.row_ids.index(source), self.col_ids.index(target)])

    def raw(self, source: ProcessId, target: ProcessId) -> float:
        return float(self.raw_values[self.row_ids.index(source), self.col_ids.index(target)])

    @staticmethod
    def is_absent(x: float) -> bool:
        return bool(np.isnan(x))
