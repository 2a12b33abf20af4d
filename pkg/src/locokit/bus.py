"""In-process publish/subscribe bus.

Replaces external middleware for the topic triad ``/command``,
``/joint_states``, ``/ground_truth`` (plus ``/diagnostics``). Delivery is
poll-based so the control loop owns its own timing; per-subscriber queues
drop oldest on overflow and count the drops.
"""
from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import DeadHandle, KindMismatch, NonFiniteInput, UnknownTopic

TOPIC_COMMAND = "/command"
TOPIC_JOINT_STATES = "/joint_states"
TOPIC_GROUND_TRUTH = "/ground_truth"
TOPIC_DIAGNOSTICS = "/diagnostics"

DEFAULT_CAPACITY = 10


def _frozen(a):
    arr = np.asarray(a, dtype=float)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class JointState:
    """Measured joint positions, velocities and efforts at time t."""

    t: float
    q: np.ndarray
    qd: np.ndarray
    tau: np.ndarray

    def __post_init__(self):
        for f in ("q", "qd", "tau"):
            object.__setattr__(self, f, _frozen(getattr(self, f)))
        if not (len(self.q) == len(self.qd) == len(self.tau)):
            raise KindMismatch("JointState vectors must share one length")


@dataclass(frozen=True)
class Command:
    """Set-points: desired positions, velocities and feed-forward torques."""

    t: float
    q_des: np.ndarray
    qd_des: np.ndarray
    tau_ffwd: np.ndarray

    def __post_init__(self):
        for f in ("q_des", "qd_des", "tau_ffwd"):
            object.__setattr__(self, f, _frozen(getattr(self, f)))
        if not (len(self.q_des) == len(self.qd_des) == len(self.tau_ffwd)):
            raise KindMismatch("Command vectors must share one length")
        for f in ("q_des", "qd_des", "tau_ffwd"):
            if not np.all(np.isfinite(getattr(self, f))):
                raise NonFiniteInput(f"Command.{f} contains non-finite values")


@dataclass(frozen=True)
class BaseState:
    """World-frame base pose (position + rpy) and twist."""

    t: float
    pos: np.ndarray
    rpy: np.ndarray
    lin: np.ndarray
    ang: np.ndarray

    def __post_init__(self):
        for f in ("pos", "rpy", "lin", "ang"):
            object.__setattr__(self, f, _frozen(getattr(self, f)))
            if not np.all(np.isfinite(getattr(self, f))):
                raise NonFiniteInput(f"BaseState.{f} contains non-finite values")
        if np.any(self.rpy <= -np.pi) or np.any(self.rpy > np.pi):
            raise NonFiniteInput("BaseState.rpy must lie in (-pi, pi]")


@dataclass(frozen=True)
class Diagnostics:
    t: float
    level: str  # info | warning | error
    source: str
    text: str


class Subscription:
    """Per-subscriber FIFO; poll from a single consumer at a time."""

    def __init__(self, topic_name, capacity):
        self.topic_name = topic_name
        self.capacity = capacity
        self._queue = deque()
        self._drops = 0
        self._alive = True
        self._lock = threading.Lock()

    def _push(self, msg):
        with self._lock:
            if len(self._queue) >= self.capacity:
                self._queue.popleft()
                self._drops += 1
            self._queue.append(msg)

    def poll(self, max_count=None):
        """Up to ``max_count`` messages in publication order; non-blocking."""
        if not self._alive:
            raise DeadHandle(f"subscription to {self.topic_name} was closed")
        out = []
        with self._lock:
            while self._queue and (max_count is None or len(out) < max_count):
                out.append(self._queue.popleft())
        return out

    def latest(self):
        """Drain the queue, returning only the newest message (or None)."""
        msgs = self.poll()
        return msgs[-1] if msgs else None

    @property
    def drops(self):
        with self._lock:
            return self._drops

    def close(self):
        self._alive = False


class _Topic:
    def __init__(self, name, kind, capacity):
        self.name = name
        self.kind = kind
        self.capacity = capacity
        self.subscribers = []


class MessageBus:
    def __init__(self):
        self._topics = {}
        self._lock = threading.Lock()

    def create_topic(self, name, kind, capacity=DEFAULT_CAPACITY):
        if capacity < 1:
            raise ValueError("topic capacity must be >= 1")
        with self._lock:
            if name in self._topics:
                raise ValueError(f"topic {name!r} already exists")
            self._topics[name] = _Topic(name, kind, capacity)

    def has_topic(self, name):
        return name in self._topics

    def _get(self, name):
        try:
            return self._topics[name]
        except KeyError:
            raise UnknownTopic(f"no topic {name!r}") from None

    def publish(self, name, msg):
        topic = self._get(name)
        if not isinstance(msg, topic.kind):
            raise KindMismatch(
                f"topic {name!r} carries {topic.kind.__name__}, "
                f"got {type(msg).__name__}"
            )
        with self._lock:
            subs = list(topic.subscribers)
        for sub in subs:
            sub._push(msg)

    def subscribe(self, name, capacity=None):
        topic = self._get(name)
        sub = Subscription(name, capacity or topic.capacity)
        with self._lock:
            topic.subscribers.append(sub)
        return sub


def standard_bus(command_capacity=DEFAULT_CAPACITY):
    """Bus with the reserved topics pre-created."""
    bus = MessageBus()
    bus.create_topic(TOPIC_COMMAND, Command, command_capacity)
    bus.create_topic(TOPIC_JOINT_STATES, JointState)
    bus.create_topic(TOPIC_GROUND_TRUTH, BaseState)
    bus.create_topic(TOPIC_DIAGNOSTICS, Diagnostics)
    return bus
