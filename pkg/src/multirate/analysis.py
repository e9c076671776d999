"""State-space analysis over synchronous steps.

Three entry points mirror the three kinds of bounded commands the engine
supports: `simulate` runs one behavior under a fixed choice policy,
`search` breadth-first enumerates reachable states satisfying a predicate,
and `check_ltl` model-checks a time-bounded LTL formula over the reachable
state graph closed with self-loops at the time bound.
"""

from __future__ import annotations

from array import array
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .buchi import Buchi, nnf_to_buchi
from .formulas import Formula, parse_formula, prop_names, to_nnf
from .model import Component, EnvChoice, ModelError, SystemState, fingerprint
from .semantics import env_choices, sync_step

DEFAULT_NODE_BUDGET = 5_000_000


class ResourceError(Exception):
    """Node budget exceeded; carries the partially explored size."""

    def __init__(self, message: str, node_count: int):
        super().__init__(message)
        self.node_count = node_count


class PropRegistry:
    """Named pure predicates over system states."""

    def __init__(self):
        self._props: dict[str, Callable[[SystemState], bool]] = {}

    def register(self, name: str, fn: Callable[[SystemState], bool]) -> None:
        if name in self._props:
            raise ModelError(f"proposition {name!r} already registered")
        self._props[name] = fn

    def resolve(self, name: str) -> Callable[[SystemState], bool]:
        try:
            return self._props[name]
        except KeyError:
            raise ModelError(f"unknown proposition {name!r}") from None

    def evaluate(self, name: str, state: SystemState) -> bool:
        return bool(self.resolve(name)(state))

    def names(self) -> list[str]:
        return sorted(self._props)


def eval_prop(registry: PropRegistry, name: str, state: SystemState) -> bool:
    return registry.evaluate(name, state)


@dataclass
class Trace:
    """One simulated behavior: states[i+1] = sync_step(states[i], choices[i])."""

    states: list[SystemState]
    choices: list[EnvChoice]

    @property
    def steps(self) -> int:
        return len(self.choices)

    @property
    def elapsed_ms(self) -> int:
        return self.states[-1].elapsed_ms - self.states[0].elapsed_ms


def simulate(init: SystemState, policy=None, bound: int = 0) -> Trace:
    """Run one behavior for every full period within the time bound.

    `policy` may be None (closed model, empty choice each step), a single
    EnvChoice applied at every step, or a sequence providing one choice per
    step.
    """
    period = init.tree.period
    steps = max(0, bound) // period
    states = [init]
    chosen: list[EnvChoice] = []
    s = init
    for i in range(steps):
        c = _policy_choice(policy, i, steps)
        s = sync_step(s, c)
        states.append(s)
        chosen.append(c)
    return Trace(states, chosen)


def _policy_choice(policy, i, steps) -> EnvChoice:
    if policy is None:
        return EnvChoice()
    if isinstance(policy, EnvChoice):
        return policy
    if len(policy) < steps:
        raise ModelError(
            f"policy supplies {len(policy)} choices for {steps} steps"
        )
    return policy[i]


def replay(init: SystemState, choices: Sequence[EnvChoice | None]) -> list[SystemState]:
    """Re-run sync_step along recorded choices; None repeats the state
    (the implicit self-loop at the time bound)."""
    states = [init]
    s = init
    for c in choices:
        s = s if c is None else sync_step(s, c)
        states.append(s)
    return states


@dataclass
class StateGraph:
    """Deduplicated bounded reachability graph.

    Nodes are indexed in BFS discovery order (node 0 is the initial state);
    states of non-frontier nodes were expanded under every environment
    choice, frontier nodes (discovery depth equal to the step bound) carry
    an implicit self-loop for LTL semantics. Edges are stored in CSR form.
    """

    choices: tuple[EnvChoice, ...]
    max_steps: int
    period: int
    depth: array
    edge_start: array
    edge_choice: array
    edge_dst: array
    n_expanded: int
    states: list[SystemState] | None = None
    labels: list[int] | None = None

    @property
    def node_count(self) -> int:
        return len(self.depth)

    @property
    def edge_count(self) -> int:
        return len(self.edge_dst)

    def is_frontier(self, i: int) -> bool:
        return self.depth[i] >= self.max_steps

    def successors(self, i: int) -> list[tuple[EnvChoice | None, int]]:
        """Outgoing edges as (choice, target); frontier nodes self-loop
        with choice None."""
        if self.is_frontier(i):
            return [(None, i)]
        lo, hi = self.edge_start[i], self.edge_start[i + 1]
        return [
            (self.choices[self.edge_choice[k]], self.edge_dst[k]) for k in range(lo, hi)
        ]

    def _succ_raw(self, i: int) -> list[tuple[int | None, int]]:
        if self.is_frontier(i):
            return [(None, i)]
        lo, hi = self.edge_start[i], self.edge_start[i + 1]
        return [(self.edge_choice[k], self.edge_dst[k]) for k in range(lo, hi)]


def _env_input_ports(model: Component) -> frozenset | None:
    """The top-level input ports, excluded from deduplication keys.

    Values those ports retain after a step are dead: sync_step replaces
    the whole input bank before anything reads them, so snapshots that
    differ only there are bisimilar and may share a graph node.
    """
    ports = frozenset(p.id for p in model.ports if p.direction == "in")
    return ports or None


def _key_fn(model, quantize, canonicalize_env_inputs):
    clear = _env_input_ports(model) if canonicalize_env_inputs else None
    if clear is None and quantize is None:
        return lambda s: s.key()
    return lambda s: fingerprint(s.tree, quantize, clear)


def explore(
    init: SystemState,
    bound: int,
    *,
    choices: tuple[EnvChoice, ...] | None = None,
    budget: int = DEFAULT_NODE_BUDGET,
    quantize: int | None = None,
    props: Sequence[Callable[[SystemState], bool]] = (),
    store_states: bool = True,
    canonicalize_env_inputs: bool = True,
) -> StateGraph:
    """Breadth-first exploration of all states reachable within the bound.

    States are deduplicated by structural equality of the component tree
    (optionally quantized to `quantize` decimals); the first discovery of a
    configuration wins. With `canonicalize_env_inputs` (default), retained
    top-level input injections that every choice overwrites are excluded
    from deduplication; propositions must then not read those ports.
    Exceeding the node budget raises ResourceError.
    """
    model = init.tree
    if choices is None:
        choices = env_choices(model)
    period = model.period
    max_steps = max(0, bound) // period
    keyf = _key_fn(model, quantize, canonicalize_env_inputs)

    index: dict[bytes, int] = {keyf(init): 0}
    depth = array("l", [0])
    states = [init] if store_states else None
    labels = [_label_mask(props, init)] if props else None
    edge_start = array("l", [0])
    edge_choice = array("h")
    edge_dst = array("l")
    queue: deque[tuple[int, SystemState]] = deque()
    n_expanded = 0
    if max_steps > 0:
        queue.append((0, init))

    while queue:
        idx, s = queue.popleft()
        d = depth[idx] + 1
        memo: dict = {}
        for ci, choice in enumerate(choices):
            t = sync_step(s, choice, memo)
            k = keyf(t)
            j = index.get(k)
            if j is None:
                j = len(index)
                if j >= budget:
                    raise ResourceError(
                        f"node budget {budget} exceeded (bound {bound} ms)", j
                    )
                index[k] = j
                depth.append(d)
                if states is not None:
                    states.append(t)
                if labels is not None:
                    labels.append(_label_mask(props, t))
                if d < max_steps:
                    queue.append((j, t))
            edge_choice.append(ci)
            edge_dst.append(j)
        n_expanded += 1
        edge_start.append(len(edge_dst))

    # frontier nodes carry empty CSR rows
    while len(edge_start) <= len(depth):
        edge_start.append(len(edge_dst))

    return StateGraph(
        choices=choices,
        max_steps=max_steps,
        period=period,
        depth=depth,
        edge_start=edge_start,
        edge_choice=edge_choice,
        edge_dst=edge_dst,
        n_expanded=n_expanded,
        states=states,
        labels=labels,
    )


def _label_mask(props, state) -> int:
    m = 0
    for i, fn in enumerate(props):
        if fn(state):
            m |= 1 << i
    return m


@dataclass
class SearchHit:
    """A state satisfying the searched predicate plus its shortest witness."""

    state: SystemState
    path: list[tuple[EnvChoice, SystemState]]  # from the initial state, exclusive

    @property
    def steps(self) -> int:
        return len(self.path)


def search(
    init: SystemState,
    pred: Callable[[SystemState], bool] | str,
    *,
    bound: int,
    max_solutions: int = 1,
    registry: PropRegistry | None = None,
    choices: tuple[EnvChoice, ...] | None = None,
    budget: int = DEFAULT_NODE_BUDGET,
    quantize: int | None = None,
    canonicalize_env_inputs: bool = True,
) -> list[SearchHit]:
    """Breadth-first bounded search for states satisfying a predicate.

    Returns up to `max_solutions` hits in BFS discovery order, each with a
    shortest witness path; an empty list means no reachable state within
    the bound satisfies the predicate.
    """
    if isinstance(pred, str):
        if registry is None:
            raise ModelError("a registry is required to resolve a named predicate")
        pred = registry.resolve(pred)
    if max_solutions < 1:
        raise ValueError("max_solutions must be at least 1")

    model = init.tree
    if choices is None:
        choices = env_choices(model)
    max_steps = max(0, bound) // model.period
    keyf = _key_fn(model, quantize, canonicalize_env_inputs)

    hits: list[SearchHit] = []
    parent: list[tuple[int, int]] = [(-1, -1)]
    index: dict[bytes, int] = {keyf(init): 0}
    depth = [0]
    queue: deque[tuple[int, SystemState]] = deque()

    def witness(idx: int) -> list[EnvChoice]:
        rev = []
        while idx != 0:
            p, ci = parent[idx]
            rev.append(choices[ci])
            idx = p
        rev.reverse()
        return rev

    def record(idx: int, state: SystemState) -> bool:
        if pred(state):
            chosen = witness(idx)
            path_states = replay(init, chosen)[1:]
            hits.append(SearchHit(state, list(zip(chosen, path_states))))
        return len(hits) >= max_solutions

    if record(0, init):
        return hits
    if max_steps > 0:
        queue.append((0, init))

    while queue:
        idx, s = queue.popleft()
        d = depth[idx] + 1
        memo: dict = {}
        for ci, choice in enumerate(choices):
            t = sync_step(s, choice, memo)
            k = keyf(t)
            if k in index:
                continue
            j = len(index)
            if j >= budget:
                raise ResourceError(f"node budget {budget} exceeded", j)
            index[k] = j
            parent.append((idx, ci))
            depth.append(d)
            if record(j, t):
                return hits
            if d < max_steps:
                queue.append((j, t))
    return hits


@dataclass
class Counterexample:
    """Lasso-shaped violating behavior: finite prefix plus repeated cycle.

    Each step is (choice, state); a None choice is the implicit self-loop
    taken at the time bound (the state repeats)."""

    prefix: list[tuple[EnvChoice | None, SystemState]]
    cycle: list[tuple[EnvChoice | None, SystemState]]


def _eval_on_lasso(f: Formula, labels: list[int], loop_start: int, prop_index) -> bool:
    """Evaluate a formula on the ultimately periodic word labels[0:] with
    positions >= loop_start repeating forever. Until/Always/Eventually are
    solved as fixpoints over the finitely many distinct suffixes."""
    from . import formulas as F

    n = len(labels)
    nxt = [i + 1 for i in range(n)]
    nxt[n - 1] = loop_start
    full = frozenset(range(n))

    def sat(g) -> frozenset:
        if isinstance(g, F.TrueF):
            return full
        if isinstance(g, F.FalseF):
            return frozenset()
        if isinstance(g, F.Prop):
            bit = 1 << prop_index[g.name]
            return frozenset(i for i in range(n) if labels[i] & bit)
        if isinstance(g, F.Not):
            return full - sat(g.operand)
        if isinstance(g, F.And):
            return sat(g.left) & sat(g.right)
        if isinstance(g, F.Or):
            return sat(g.left) | sat(g.right)
        if isinstance(g, F.Implies):
            return (full - sat(g.left)) | sat(g.right)
        if isinstance(g, F.Next):
            inner = sat(g.operand)
            return frozenset(i for i in range(n) if nxt[i] in inner)
        if isinstance(g, F.Eventually):
            s = set(sat(g.operand))
            _lfp(s, full, nxt)
            return frozenset(s)
        if isinstance(g, F.Always):
            inner = sat(g.operand)
            s = set(inner)
            _gfp(s, nxt)
            return frozenset(s)
        if isinstance(g, F.Until):
            a, b = sat(g.left), sat(g.right)
            s = set(b)
            _lfp(s, a, nxt)
            return frozenset(s)
        raise TypeError(f"not a formula: {g!r}")

    return 0 in sat(f)


def _lfp(s: set, allow, nxt):
    changed = True
    while changed:
        changed = False
        for i in range(len(nxt)):
            if i not in s and i in allow and nxt[i] in s:
                s.add(i)
                changed = True


def _gfp(s: set, nxt):
    changed = True
    while changed:
        changed = False
        for i in list(s):
            if nxt[i] not in s:
                s.discard(i)
                changed = True


def _short_violating_lasso(graph: StateGraph, formula: Formula, prop_index, cap=4000):
    """Search for a short violating lasso (minimal prefix first).

    Tries lassos in order of total length, giving up after `cap` candidate
    paths; returns (stem_edges, cycle_edges) like the product search, or
    None. Only used to tidy counterexamples, never for the verdict."""
    labels = graph.labels if graph.labels is not None else [0] * graph.node_count
    tried = 0
    for total in range(1, 13):
        stack = [(0, [])]  # (node, edges so far)
        while stack:
            node, edges = stack.pop()
            if len(edges) >= total:
                continue
            for ci, succ in graph._succ_raw(node):
                path = edges + [(ci, succ)]
                tried += 1
                if tried > cap:
                    return None
                # close a cycle back to any position on the path
                nodes = [0] + [t for _, t in path]
                if succ in nodes[:-1]:
                    loop_start = nodes.index(succ)
                    word = [labels[k] for k in nodes[:-1]]
                    if not _eval_on_lasso(formula, word, loop_start, prop_index):
                        return path[:loop_start], path[loop_start:]
                if len(path) < total:
                    stack.append((succ, path))
    return None


@dataclass
class CheckResult:
    holds: bool
    counterexample: Counterexample | None
    explored: int
    graph: StateGraph = field(repr=False)


def check_ltl(
    init: SystemState,
    formula: Formula | str,
    bound: int,
    registry: PropRegistry,
    *,
    choices: tuple[EnvChoice, ...] | None = None,
    budget: int = DEFAULT_NODE_BUDGET,
    quantize: int | None = None,
    canonicalize_env_inputs: bool = True,
) -> CheckResult:
    """Check an LTL formula over every behavior within the time bound.

    The bounded state graph, closed with self-loops on frontier states, is
    product-composed with the Buchi automaton of the negated formula; an
    accepting lasso is returned as a counterexample, its absence means the
    formula holds.
    """
    if isinstance(formula, str):
        formula = parse_formula(formula)
    names = sorted(prop_names(formula))
    fns = [registry.resolve(n) for n in names]
    prop_index = {n: i for i, n in enumerate(names)}

    graph = explore(
        init,
        bound,
        choices=choices,
        budget=budget,
        quantize=quantize,
        props=fns,
        store_states=False,
        canonicalize_env_inputs=canonicalize_env_inputs,
    )
    automaton = nnf_to_buchi(to_nnf(formula, negate=True), prop_index)
    lasso = _find_accepting_lasso(graph, automaton)
    if lasso is None:
        return CheckResult(True, None, graph.node_count, graph)

    tidy = _short_violating_lasso(graph, formula, prop_index)
    stem_edges, cycle_edges = tidy if tidy is not None else lasso
    state = init
    prefix = []
    for ci, _ in stem_edges:
        choice = None if ci is None else graph.choices[ci]
        state = state if choice is None else sync_step(state, choice)
        prefix.append((choice, state))
    cycle = []
    for ci, _ in cycle_edges:
        choice = None if ci is None else graph.choices[ci]
        state = state if choice is None else sync_step(state, choice)
        cycle.append((choice, state))
    return CheckResult(False, Counterexample(prefix, cycle), graph.node_count, graph)


# ---------------------------------------------------------------------------
# Emptiness of the product (nested depth-first search).


def _find_accepting_lasso(graph: StateGraph, aut: Buchi):
    """Find an accepting lasso in (graph x automaton), or None.

    Returns (stem_edges, cycle_edges), each a list of (choice_index | None,
    kripke_node) transitions; stem starts at the initial state.
    """
    labels = graph.labels if graph.labels is not None else [0] * graph.node_count
    nb = aut.n_states
    succ_raw = graph._succ_raw
    aut_succ = aut.succ
    accepting = aut.accepting

    def psucc(p):
        k, b = divmod(p, nb)
        for ci, k2 in succ_raw(k):
            lbl = labels[k2]
            base = k2 * nb
            for b2 in aut_succ[b]:
                if aut.enterable(b2, lbl):
                    yield (ci, k2), base + b2

    blue: set[int] = set()
    red: set[int] = set()

    init_label = labels[0]
    roots = [b for b in aut.initial if aut.enterable(b, init_label)]

    for b0 in roots:
        p0 = 0 * nb + b0
        if p0 in blue:
            continue
        result = _blue_dfs(p0, psucc, blue, red, accepting, nb)
        if result is not None:
            return result
    return None


def _blue_dfs(p0, psucc, blue, red, accepting, nb):
    blue.add(p0)
    stack = [(p0, psucc(p0), None)]
    pos = {p0: 0}
    while stack:
        p, it, _ = stack[-1]
        advanced = False
        for edge, q in it:
            if q not in blue:
                blue.add(q)
                pos[q] = len(stack)
                stack.append((q, psucc(q), edge))
                advanced = True
                break
        if advanced:
            continue
        # postorder of p
        if accepting[p % nb]:
            found = _red_dfs(p, psucc, red, pos)
            if found is not None:
                red_edges, closing = found
                stem = [e for _, _, e in stack[1:]]
                t_pos = pos[closing]
                cycle = red_edges + [e for _, _, e in stack[t_pos + 1 :]]
                return stem, cycle
        stack.pop()
        del pos[p]
    return None


def _red_dfs(seed, psucc, red, blue_pos):
    """Search from an accepting seed for any state on the blue stack.

    Returns (edges along the red path including the closing edge, the blue
    stack state that closes the cycle)."""
    stack = [(seed, psucc(seed), None)]
    on_red = {seed}
    while stack:
        p, it, _ = stack[-1]
        advanced = False
        for edge, q in it:
            if q in blue_pos:
                edges = [e for _, _, e in stack[1:]] + [edge]
                return edges, q
            if q not in red and q not in on_red:
                on_red.add(q)
                stack.append((q, psucc(q), edge))
                advanced = True
                break
        if advanced:
            continue
        stack.pop()
        red.add(p)
    return None
