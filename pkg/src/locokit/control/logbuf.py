"""Time-series log buffer and its CSV export.

Column layout (bit-exact contract):
``time,q_0..q_{n-1},q_des_0..,qd_0..,tau_0..,tau_ffwd_0..`` plus
``base_x,base_y,base_z,base_roll,base_pitch,base_yaw`` for floating-base
robots. One row per tick, ``%.9g`` formatting, LF line endings.
"""
from __future__ import annotations

import numpy as np

from ..errors import ChannelSchemaFrozen


class LogBuffer:
    """Named channels sharing one timestamp column; grows without bound.
    The channel schema freezes at the first append."""

    def __init__(self):
        self._channels = {}  # name -> column labels
        self._rows = []
        self._t = []
        self._frozen = False

    def _labels_for(self, name, width):
        if width == 1:
            return [name] if name.startswith("base_") else [f"{name}_0"]
        return [f"{name}_{i}" for i in range(width)]

    def append(self, t, values: dict, labels: dict | None = None):
        """Append one tick. ``labels`` may give explicit per-channel column
        names (e.g. base_x..base_yaw); defaults to ``name_i``."""
        widths = {k: len(np.atleast_1d(v)) for k, v in values.items()}
        if self._frozen:
            expected = {k: len(v) for k, v in self._channels.items()}
            if widths != expected:
                raise ChannelSchemaFrozen(
                    "channel schema is frozen after the first append"
                )
        else:
            self._channels = {
                k: (labels or {}).get(k, self._labels_for(k, w))
                for k, w in widths.items()
            }
            self._frozen = True
        if self._t and t <= self._t[-1]:
            raise ValueError("timestamps must be strictly increasing")
        self._t.append(float(t))
        self._rows.append(
            np.concatenate([np.atleast_1d(values[k]).astype(float)
                            for k in self._channels])
        )

    def __len__(self):
        return len(self._rows)

    @property
    def channels(self):
        return {k: len(v) for k, v in self._channels.items()}

    def column_names(self):
        names = ["time"]
        for labels in self._channels.values():
            names.extend(labels)
        return names

    def times(self):
        return np.array(self._t)

    def channel(self, name):
        """All rows of one channel as an (n_rows, width) array."""
        offset = 0
        for ch, labels in self._channels.items():
            width = len(labels)
            if ch == name:
                return np.array([row[offset:offset + width] for row in self._rows])
            offset += width
        raise KeyError(name)


def export_csv(buffer: LogBuffer, path) -> str:
    """Deterministic CSV dump; re-exporting the same buffer is byte-identical."""
    lines = [",".join(buffer.column_names())]
    for t, row in zip(buffer._t, buffer._rows):
        lines.append(",".join(f"{v:.9g}" for v in [t, *row]))
    text = "\n".join(lines) + "\n"
    with open(path, "w", newline="\n") as f:
        f.write(text)
    return str(path)
