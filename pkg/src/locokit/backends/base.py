"""The plant contract both the simulator and the mock hardware driver
satisfy; the control loop is written against this seam only, so swapping
plants is a single flag."""
from __future__ import annotations

from abc import ABC, abstractmethod

from ..errors import UnsupportedMode

INTERFACES = ("effort", "position", "velocity")


class Backend(ABC):
    """One loop owns a backend instance; state reads return immutable
    snapshots that may be shared freely."""

    capabilities: frozenset

    @abstractmethod
    def read_state(self):
        """Current JointState (monotone timestamps)."""

    def base_state(self):
        """BaseState for floating-base plants, else None."""
        return None

    @abstractmethod
    def write_command(self, *, effort=None, position=None, velocity=None):
        """Stage the actuation command applied at the next step."""

    def step(self, dt):
        """Advance a simulated plant; a live driver advances on its own."""

    def _check_interface(self, name):
        if name not in self.capabilities:
            raise UnsupportedMode(
                f"{type(self).__name__} does not expose the {name!r} interface "
                f"(capabilities: {sorted(self.capabilities)})"
            )
