"""Data model for hierarchical multirate synchronous machine ensembles.

A component is either a leaf machine (local state plus a pure transition
function) or an ensemble of wired sub-components. Fast members run an
integer `rate` of internal steps per step of their ensemble, so within one
ensemble every member satisfies  member.period * member.rate == ensemble.period.

Values flowing through ports are plain floats, `Status` records, or the
don't-care padding value `BOT`. Components, ports and snapshots are
immutable by contract: step operations always build new objects.
"""

from __future__ import annotations

import pickle
from dataclasses import dataclass, fields, is_dataclass
from hashlib import blake2b
from typing import Any, Callable, Mapping, Sequence, Union


class ModelError(Exception):
    """Structural misuse of a model: unknown ports, missing adaptors, etc."""


class ExecutionError(Exception):
    """A step could not be performed (input underflow, bad behavior output)."""


class Bot:
    """The don't-care value used to pad rate-mismatched communications."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "bot"


BOT = Bot()


@dataclass(frozen=True)
class Status:
    """Position report: current direction, roll, yaw and goal direction."""

    dir: float
    roll: float
    yaw: float
    goal: float


# A port value: bot, a numeric angle, or a status record.
Value = Union[Bot, float, Status]

IN = "in"
OUT = "out"


class Port:
    """A named input or output port holding an ordered list of values."""

    __slots__ = ("id", "direction", "content")

    def __init__(self, id: str, direction: str, content: tuple[Value, ...] = ()):
        self.id = id
        self.direction = direction
        self.content = content

    def __repr__(self):
        return f"Port({self.id!r}, {self.direction!r}, {self.content!r})"

    def __eq__(self, other):
        if not isinstance(other, Port):
            return NotImplemented
        return (
            self.id == other.id
            and self.direction == other.direction
            and self.content == other.content
        )

    def __hash__(self):
        return hash((self.id, self.direction, self.content))


@dataclass(frozen=True)
class Wire:
    """Machine-to-machine connection; delivered at the next synchronous step."""

    src: str
    src_port: str
    dst: str
    dst_port: str


@dataclass(frozen=True)
class EnvIn:
    """Connection from an ensemble input port to a member input port."""

    env_port: str
    dst: str
    dst_port: str


@dataclass(frozen=True)
class EnvOut:
    """Connection from a member output port to an ensemble output port."""

    src: str
    src_port: str
    env_port: str


Connection = Union[Wire, EnvIn, EnvOut]

# behavior(state, inputs, period_ms) -> (state', outputs); one input value is
# consumed per In port (BOT when the port is empty) and exactly one output
# value must be produced per Out port.
Behavior = Callable[[Any, Mapping[str, Value], int], tuple[Any, Mapping[str, Value]]]

# adaptor(values) -> reshaped values; output length must equal the consumer's rate.
Adaptor = Callable[[tuple[Value, ...]], Sequence[Value]]

# keyed by (machine id, input port id); the port id "*" matches any port.
AdaptorTable = Mapping[tuple[str, str], Adaptor]


@dataclass(frozen=True)
class Leaf:
    """Leaf machine body: local state plus its transition function."""

    state: Any
    behavior: Behavior


@dataclass(frozen=True, eq=False)
class EnsembleBody:
    machines: tuple[Component, ...]
    connections: tuple[Connection, ...]
    adaptors: AdaptorTable


class Component:
    """A typed machine instance or a hierarchical ensemble of them.

    `rate` is the deceleration factor relative to the enclosing ensemble;
    `period` is the duration of one own step in milliseconds. `env_rules`
    is only meaningful on a top-level component: the declared alternatives
    for the nondeterministic environment (None means a closed, deterministic
    model). Equality is identity; compare snapshots via SystemState.
    """

    __slots__ = ("id", "rate", "period", "ports", "body", "env_rules", "_ckey")

    def __init__(
        self,
        id: str,
        rate: int,
        period: int,
        ports: tuple[Port, ...],
        body: Union[Leaf, EnsembleBody],
        env_rules: tuple[EnvChoice, ...] | None = None,
    ):
        self.id = id
        self.rate = rate
        self.period = period
        self.ports = ports
        self.body = body
        self.env_rules = env_rules
        self._ckey = None

    def __repr__(self):
        kind = "Leaf" if isinstance(self.body, Leaf) else "Ensemble"
        return f"<{kind} {self.id!r} rate={self.rate} period={self.period}>"

    def port(self, port_id: str) -> Port:
        for p in self.ports:
            if p.id == port_id:
                return p
        raise ModelError(f"component {self.id!r} has no port {port_id!r}")

    def machine(self, machine_id: str) -> Component:
        if not isinstance(self.body, EnsembleBody):
            raise ModelError(f"component {self.id!r} is not an ensemble")
        for m in self.body.machines:
            if m.id == machine_id:
                return m
        raise ModelError(f"ensemble {self.id!r} has no machine {machine_id!r}")

    @property
    def is_ensemble(self) -> bool:
        return isinstance(self.body, EnsembleBody)


@dataclass(frozen=True)
class EnvChoice:
    """One assignment of value lists to top-level environment input ports."""

    assignments: tuple[tuple[str, tuple[Value, ...]], ...] = ()

    @staticmethod
    def of(mapping: Mapping[str, Sequence[Value] | Value]) -> EnvChoice:
        """Build a choice from a mapping; bare values become one-element lists."""
        items = []
        for port_id in sorted(mapping):
            vs = mapping[port_id]
            if isinstance(vs, (list, tuple)):
                values = tuple(_as_value(v) for v in vs)
            else:
                values = (_as_value(vs),)
            items.append((port_id, values))
        return EnvChoice(tuple(items))

    def items(self):
        return self.assignments

    def ports(self) -> frozenset[str]:
        return frozenset(p for p, _ in self.assignments)

    def __bool__(self):
        return bool(self.assignments)


EMPTY_CHOICE = EnvChoice()


def _as_value(v) -> Value:
    if isinstance(v, bool):
        raise TypeError("port values must be numbers, Status or BOT")
    if isinstance(v, (int, float)):
        return float(v)
    if isinstance(v, (Status, Bot)):
        return v
    raise TypeError(f"not a port value: {v!r}")


# ---------------------------------------------------------------------------
# Canonical state keys.
#
# Snapshot equality is structural equality of the dynamic configuration
# (port contents and local machine states) with exact numeric comparison;
# -0.0 is identified with 0.0 so that the key agrees with float equality.


def _norm_data(x, ndigits=None):
    if isinstance(x, float):
        if ndigits is not None:
            x = round(x, ndigits)
        return x + 0.0
    if isinstance(x, Bot):
        return ("\x00bot",)
    if isinstance(x, (tuple, list)):
        return tuple(_norm_data(v, ndigits) for v in x)
    if is_dataclass(x):
        return (x.__class__.__qualname__,) + tuple(
            _norm_data(getattr(x, f.name), ndigits) for f in fields(x)
        )
    if x is None or isinstance(x, (int, str, bytes)):
        return x
    raise TypeError(f"cannot build a state key from {x!r}")


def _behavior_name(b) -> str:
    return getattr(b, "__qualname__", None) or b.__class__.__qualname__


def component_key(c: Component, ndigits=None, clear_top_inputs: frozenset | None = None):
    """Nested-tuple canonical form of a component's configuration.

    `clear_top_inputs` names top-level input ports whose content is left
    out of the key (used to quotient away retained environment injections
    that are always overwritten before being read). The plain form is
    cached on the immutable component.
    """
    plain = ndigits is None and clear_top_inputs is None
    if plain and c._ckey is not None:
        return c._ckey
    ports = []
    for p in c.ports:
        if clear_top_inputs and p.direction == IN and p.id in clear_top_inputs:
            ports.append((p.id, p.direction, ()))
        else:
            ports.append(
                (p.id, p.direction, tuple(_norm_data(v, ndigits) for v in p.content))
            )
    if isinstance(c.body, Leaf):
        body = (_behavior_name(c.body.behavior), _norm_data(c.body.state, ndigits))
    else:
        body = tuple(component_key(m, ndigits) for m in c.body.machines)
    key = (c.id, c.rate, c.period, tuple(ports), body)
    if plain:
        c._ckey = key
    return key


def fingerprint(
    c: Component, ndigits=None, clear_top_inputs: frozenset | None = None
) -> bytes:
    """128-bit digest of the canonical form, used for deduplication."""
    raw = pickle.dumps(component_key(c, ndigits, clear_top_inputs), protocol=4)
    return blake2b(raw, digest_size=16).digest()


class SystemState:
    """Immutable snapshot of a whole component tree plus elapsed model time.

    Equality and hashing consider the tree only (not elapsed time), so that
    revisits of the same configuration at different times deduplicate.
    """

    __slots__ = ("tree", "elapsed_ms", "_key")

    def __init__(self, tree: Component, elapsed_ms: int = 0):
        self.tree = tree
        self.elapsed_ms = elapsed_ms
        self._key = None

    def __repr__(self):
        return f"<SystemState {self.tree.id!r} at {self.elapsed_ms} ms>"

    def key(self) -> bytes:
        k = self._key
        if k is None:
            k = self._key = fingerprint(self.tree)
        return k

    def __eq__(self, other):
        if not isinstance(other, SystemState):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


# ---------------------------------------------------------------------------
# Common adaptors.


def pad_with_bots(k: int) -> Adaptor:
    """Adapt a single value for a rate-k consumer: (v,) -> (v, bot, ..., bot)."""

    def adapt(values: tuple[Value, ...]) -> tuple[Value, ...]:
        if len(values) != 1:
            raise ExecutionError(
                f"pad adaptor expects exactly one value, got {len(values)}"
            )
        return values + (BOT,) * (k - 1)

    adapt.__qualname__ = f"pad_with_bots({k})"
    return adapt


def take_last(values: tuple[Value, ...]) -> tuple[Value, ...]:
    """Collapse a produced tuple to its most recent value."""
    return (values[-1],)


def identity(values: tuple[Value, ...]) -> tuple[Value, ...]:
    return values
