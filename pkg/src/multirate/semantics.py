"""Executable semantics of one synchronous step of a component tree.

One step of an ensemble is the pipeline

    transfer_results(execute(transfer_inputs(e)))

where transfer_inputs moves pending values onto member input ports (one
value per call from an ensemble input port, the whole pending batch from a
feedback output port), execute runs every member through its input adaptors
and then `rate` many internal transitions, and transfer_results moves member
outputs onto the ensemble's own output ports.

A full top-level step additionally clears the previous round's environment
outputs and injects one environment choice; see `sync_step`.
"""

from __future__ import annotations

import pickle
from dataclasses import dataclass

from .model import (
    BOT,
    EMPTY_CHOICE,
    IN,
    OUT,
    AdaptorTable,
    Component,
    EnsembleBody,
    EnvChoice,
    EnvIn,
    EnvOut,
    ExecutionError,
    Leaf,
    ModelError,
    Port,
    SystemState,
    Wire,
    _as_value,
    component_key,
)


def _with_ports(c: Component, ports: tuple[Port, ...]) -> Component:
    return Component(c.id, c.rate, c.period, ports, c.body, c.env_rules)


def _with_machines(c: Component, machines: tuple[Component, ...]) -> Component:
    body = c.body
    return Component(
        c.id,
        c.rate,
        c.period,
        c.ports,
        EnsembleBody(machines, body.connections, body.adaptors),
        c.env_rules,
    )


def clear_outputs(c: Component) -> Component:
    """Empty every output port in the whole tree; everything else unchanged."""
    ports = tuple(
        Port(p.id, p.direction) if p.direction == OUT and p.content else p
        for p in c.ports
    )
    if isinstance(c.body, EnsembleBody):
        machines = tuple(clear_outputs(m) for m in c.body.machines)
        return _with_machines(_with_ports(c, ports), machines)
    return _with_ports(c, ports)


def _clear_own_outputs(c: Component) -> Component:
    # Only the component's own (environment-facing) output ports. Used by
    # sync_step: member output ports may hold pending feedback values that
    # must survive into the next step's transfer_inputs.
    ports = tuple(
        Port(p.id, p.direction) if p.direction == OUT and p.content else p
        for p in c.ports
    )
    return _with_ports(c, ports)


def _clear_own_inputs(c: Component) -> Component:
    # Each step re-injects the whole environment input bank: values a
    # previous injection left behind must not be consumed twice.
    ports = tuple(
        Port(p.id, p.direction) if p.direction == IN and p.content else p
        for p in c.ports
    )
    return _with_ports(c, ports)


def env_output(choice: EnvChoice, c: Component) -> Component:
    """Replace the content of each input port named in the choice."""
    if not choice.assignments:
        return c
    ports = list(c.ports)
    index = {p.id: i for i, p in enumerate(ports)}
    for port_id, values in choice.assignments:
        i = index.get(port_id)
        if i is None or ports[i].direction != IN:
            raise ModelError(
                f"environment choice names unknown input port {port_id!r} "
                f"of component {c.id!r}"
            )
        ports[i] = Port(port_id, IN, values)
    return _with_ports(c, tuple(ports))


def transfer_inputs(e: Component) -> Component:
    """Move pending values onto member input ports.

    From an ensemble input port the head value moves (the remaining values
    are consumed one per internal step of a decelerated ensemble); from a
    member output port the whole pending batch moves. A source feeding
    several destinations delivers to each of them.
    """
    body = e.body
    appends: dict[tuple[str, str], list] = {}
    env_pops: set[str] = set()
    wire_clears: set[tuple[str, str]] = set()
    env_ports = {p.id: p for p in e.ports}
    members = {m.id: m for m in body.machines}

    for conn in body.connections:
        if isinstance(conn, EnvIn):
            src = env_ports[conn.env_port]
            if src.content:
                appends.setdefault((conn.dst, conn.dst_port), []).append(
                    src.content[0]
                )
                env_pops.add(conn.env_port)
        elif isinstance(conn, Wire):
            src = members[conn.src].port(conn.src_port)
            if src.content:
                appends.setdefault((conn.dst, conn.dst_port), []).extend(src.content)
                wire_clears.add((conn.src, conn.src_port))

    if not appends and not env_pops:
        return e

    new_machines = []
    for m in body.machines:
        touched = False
        ports = list(m.ports)
        for i, p in enumerate(ports):
            extra = appends.get((m.id, p.id))
            if extra:
                ports[i] = Port(p.id, p.direction, p.content + tuple(extra))
                touched = True
            elif (m.id, p.id) in wire_clears:
                ports[i] = Port(p.id, p.direction)
                touched = True
        new_machines.append(_with_ports(m, tuple(ports)) if touched else m)

    new_env_ports = tuple(
        Port(p.id, p.direction, p.content[1:]) if p.id in env_pops else p
        for p in e.ports
    )
    return _with_machines(_with_ports(e, new_env_ports), tuple(new_machines))


def _lookup_adaptor(table: AdaptorTable, comp_id: str, port_id: str):
    fn = table.get((comp_id, port_id))
    if fn is None:
        fn = table.get((comp_id, "*"))
    return fn


def apply_adaptors(c: Component, table: AdaptorTable) -> Component:
    """Reshape every pending input batch through the component's adaptors.

    Ports with no pending content are skipped (no data arrived this round);
    a nonempty port without an adaptor is a model error, and an adaptor must
    produce exactly `rate` values.
    """
    ports = None
    for i, p in enumerate(c.ports):
        if p.direction != IN or not p.content:
            continue
        fn = _lookup_adaptor(table, c.id, p.id)
        if fn is None:
            raise ModelError(f"no adaptor for input port {c.id}.{p.id}")
        out = tuple(fn(p.content))
        if len(out) != c.rate:
            raise ExecutionError(
                f"adaptor for {c.id}.{p.id} produced {len(out)} values, "
                f"expected rate {c.rate}"
            )
        if ports is None:
            ports = list(c.ports)
        ports[i] = Port(p.id, IN, out)
    if ports is None:
        return c
    return _with_ports(c, tuple(ports))


def _leaf_delta(c: Component) -> Component:
    leaf = c.body
    inputs = {}
    ports = list(c.ports)
    for i, p in enumerate(ports):
        if p.direction == IN:
            if p.content:
                inputs[p.id] = p.content[0]
                ports[i] = Port(p.id, IN, p.content[1:])
            else:
                inputs[p.id] = BOT

    state, outputs = leaf.behavior(leaf.state, inputs, c.period)

    seen = set()
    for i, p in enumerate(ports):
        if p.direction == OUT:
            if p.id not in outputs:
                raise ExecutionError(
                    f"behavior of {c.id!r} produced no value for output {p.id!r}"
                )
            ports[i] = Port(p.id, OUT, p.content + (_as_value(outputs[p.id]),))
            seen.add(p.id)
    extra = set(outputs) - seen
    if extra:
        raise ExecutionError(f"behavior of {c.id!r} wrote unknown ports {sorted(extra)}")

    return Component(c.id, c.rate, c.period, tuple(ports), Leaf(state, leaf.behavior), c.env_rules)


def k_delta(c: Component) -> Component:
    """Apply the component's transition function `rate` many times.

    Each application consumes one head value per input port (BOT when the
    port is empty for the whole round) and appends one value per output
    port. A port holding fewer pending values than the rate, but not zero,
    is an input underflow.
    """
    rate = c.rate
    for p in c.ports:
        if p.direction == IN and 0 < len(p.content) < rate:
            raise ExecutionError(
                f"input underflow on {c.id}.{p.id}: "
                f"{len(p.content)} values for rate {rate}"
            )
    for _ in range(rate):
        c = delta(c)
    return c


def execute(e: Component, _memo: dict | None = None) -> Component:
    """Run every member through its adaptors and its decelerated transitions.

    `_memo` caches member results by configuration within one group of
    related steps (the alternative environment choices of one expansion
    share almost all member work); it applies to this level's members only.
    """
    table = e.body.adaptors
    machines = []
    for m in e.body.machines:
        if _memo is None:
            machines.append(k_delta(apply_adaptors(m, table)))
            continue
        key = (m.id, pickle.dumps(component_key(m), protocol=4))
        hit = _memo.get(key)
        if hit is None:
            hit = k_delta(apply_adaptors(m, table))
            _memo[key] = hit
        machines.append(hit)
    return _with_machines(e, tuple(machines))


def transfer_results(e: Component) -> Component:
    """Move pending member outputs onto the ensemble's own output ports."""
    body = e.body
    appends: dict[str, list] = {}
    clears: set[tuple[str, str]] = set()
    members = {m.id: m for m in body.machines}
    for conn in body.connections:
        if isinstance(conn, EnvOut):
            src = members[conn.src].port(conn.src_port)
            if src.content:
                appends.setdefault(conn.env_port, []).extend(src.content)
                clears.add((conn.src, conn.src_port))
    if not appends:
        return e

    new_machines = []
    for m in body.machines:
        if any((m.id, p.id) in clears for p in m.ports):
            ports = tuple(
                Port(p.id, p.direction) if (m.id, p.id) in clears else p
                for p in m.ports
            )
            new_machines.append(_with_ports(m, ports))
        else:
            new_machines.append(m)
    new_env_ports = tuple(
        Port(p.id, p.direction, p.content + tuple(appends[p.id]))
        if p.id in appends
        else p
        for p in e.ports
    )
    return _with_machines(_with_ports(e, new_env_ports), tuple(new_machines))


def delta(c: Component, _memo: dict | None = None) -> Component:
    """One transition of a component: behavior call or the ensemble pipeline."""
    if isinstance(c.body, Leaf):
        return _leaf_delta(c)
    return transfer_results(execute(transfer_inputs(c), _memo))


def sync_step(
    s: SystemState, choice: EnvChoice = EMPTY_CHOICE, _memo: dict | None = None
) -> SystemState:
    """One synchronous step of the top component under one environment choice.

    Clears the previous round's environment outputs, replaces the whole
    environment input bank with the choice, performs delta, and advances
    elapsed time by the top period. Afterwards the top input ports hold
    exactly the injected choice (nothing, for the empty choice), so an
    injection is never consumed twice.
    """
    tree = _clear_own_outputs(s.tree)
    tree = _clear_own_inputs(tree)
    tree = env_output(choice, tree)
    tree = delta(tree, _memo)
    tree = env_output(choice, tree)
    return SystemState(tree, s.elapsed_ms + tree.period)


def env_choices(model: Component) -> tuple[EnvChoice, ...]:
    """The declared environment alternatives of a top-level component.

    A model with no declared rules is closed and deterministic: the single
    empty choice. Declaring an explicitly empty rule set is an error, since
    such a system could not step.
    """
    if model.env_rules is None:
        return (EMPTY_CHOICE,)
    if not model.env_rules:
        raise ModelError(f"component {model.id!r} declares no environment choices")
    seen = []
    for ch in model.env_rules:
        if ch not in seen:
            seen.append(ch)
    return tuple(seen)


def initial_state(model: Component) -> SystemState:
    return SystemState(model, 0)


# ---------------------------------------------------------------------------
# Static validation.


@dataclass(frozen=True)
class ValidationIssue:
    kind: str
    where: str
    message: str

    def __str__(self):
        return f"[{self.kind}] {self.where}: {self.message}"


def validate(model: Component) -> list[ValidationIssue]:
    """Check the structural well-formedness rules of a component tree.

    Returns the list of violations (empty means valid): duplicate ids,
    dangling connection endpoints, member input ports without exactly one
    source, connections between two fast machines, rate/period
    inconsistencies and non-integer period divisions, plus missing or
    wrongly-shaped input adaptors.
    """
    issues: list[ValidationIssue] = []
    _validate_component(model, model.id, issues)
    return issues


def _validate_component(c: Component, path: str, issues: list[ValidationIssue]):
    seen_ports = set()
    for p in c.ports:
        if p.direction not in (IN, OUT):
            issues.append(
                ValidationIssue("bad-direction", path, f"port {p.id!r} has direction {p.direction!r}")
            )
        if p.id in seen_ports:
            issues.append(ValidationIssue("duplicate-id", path, f"duplicate port {p.id!r}"))
        seen_ports.add(p.id)

    if not isinstance(c.body, EnsembleBody):
        return

    body = c.body
    members: dict[str, Component] = {}
    for m in body.machines:
        if m.id in members:
            issues.append(ValidationIssue("duplicate-id", path, f"duplicate machine {m.id!r}"))
        members[m.id] = m

    for m in body.machines:
        if c.period % m.rate != 0:
            issues.append(
                ValidationIssue(
                    "period-division",
                    f"{path}/{m.id}",
                    f"ensemble period {c.period} is not divisible by rate {m.rate}",
                )
            )
        elif m.period != c.period // m.rate:
            issues.append(
                ValidationIssue(
                    "rate-period",
                    f"{path}/{m.id}",
                    f"rate {m.rate} requires period {c.period // m.rate}, found {m.period}",
                )
            )

    def member_port(mid: str, pid: str, direction: str) -> bool:
        m = members.get(mid)
        if m is None:
            return False
        return any(p.id == pid and p.direction == direction for p in m.ports)

    def own_port(pid: str, direction: str) -> bool:
        return any(p.id == pid and p.direction == direction for p in c.ports)

    fan_in: dict[tuple[str, str], int] = {}
    for conn in body.connections:
        if isinstance(conn, EnvIn):
            ok = own_port(conn.env_port, IN) and member_port(conn.dst, conn.dst_port, IN)
            if not ok:
                issues.append(
                    ValidationIssue("dangling-connection", path, f"{conn!r} has a bad endpoint")
                )
                continue
            fan_in[(conn.dst, conn.dst_port)] = fan_in.get((conn.dst, conn.dst_port), 0) + 1
        elif isinstance(conn, Wire):
            ok = member_port(conn.src, conn.src_port, OUT) and member_port(
                conn.dst, conn.dst_port, IN
            )
            if not ok:
                issues.append(
                    ValidationIssue("dangling-connection", path, f"{conn!r} has a bad endpoint")
                )
                continue
            fan_in[(conn.dst, conn.dst_port)] = fan_in.get((conn.dst, conn.dst_port), 0) + 1
            if members[conn.src].rate > 1 and members[conn.dst].rate > 1:
                issues.append(
                    ValidationIssue(
                        "fast-fast-connection",
                        path,
                        f"{conn.src} (rate {members[conn.src].rate}) -> "
                        f"{conn.dst} (rate {members[conn.dst].rate})",
                    )
                )
        else:
            ok = member_port(conn.src, conn.src_port, OUT) and own_port(conn.env_port, OUT)
            if not ok:
                issues.append(
                    ValidationIssue("dangling-connection", path, f"{conn!r} has a bad endpoint")
                )

    for m in body.machines:
        for p in m.ports:
            if p.direction != IN:
                continue
            n = fan_in.get((m.id, p.id), 0)
            if n != 1:
                issues.append(
                    ValidationIssue(
                        "input-fanin",
                        f"{path}/{m.id}",
                        f"input port {p.id!r} has {n} sources, expected 1",
                    )
                )
            else:
                _validate_adaptor(c, m, p.id, path, issues)

    for m in body.machines:
        _validate_component(m, f"{path}/{m.id}", issues)


def _source_batch_size(e: Component, mid: str, pid: str) -> int | None:
    members = {m.id: m for m in e.body.machines}
    for conn in e.body.connections:
        if isinstance(conn, EnvIn) and (conn.dst, conn.dst_port) == (mid, pid):
            return 1
        if isinstance(conn, Wire) and (conn.dst, conn.dst_port) == (mid, pid):
            return members[conn.src].rate
    return None


def _validate_adaptor(e, m, port_id, path, issues):
    fn = _lookup_adaptor(e.body.adaptors, m.id, port_id)
    if fn is None:
        issues.append(
            ValidationIssue(
                "adaptor-missing", f"{path}/{m.id}", f"no adaptor for input port {port_id!r}"
            )
        )
        return
    n = _source_batch_size(e, m.id, port_id)
    if n is None:
        return
    try:
        out = tuple(fn((BOT,) * n))
    except Exception:
        return  # adaptor not evaluable on a probe; shape checked at runtime
    if len(out) != m.rate:
        issues.append(
            ValidationIssue(
                "adaptor-shape",
                f"{path}/{m.id}",
                f"adaptor for {port_id!r} maps {n} values to {len(out)}, "
                f"expected rate {m.rate}",
            )
        )
