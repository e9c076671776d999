"""Translation of LTL formulas to Buchi automata.

Classic on-the-fly tableau construction: nodes carry the obligations that
must hold now (`old`) and at the next instant (`next`); Until and Release
obligations split nodes; one acceptance set per Until subformula keeps
eventualities from being postponed forever. The generalized automaton is
then degeneralized with a counter.

Transitions are label-checked on the node being entered: a step reading a
state with label set L may enter node q only if every positive literal of
q is in L and no negated literal is.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .formulas import FALSE, TRUE, And, FalseF, Lit, Next, Or, Release, TrueF, Until

_INIT = -1


@dataclass
class _Node:
    incoming: set[int]
    new: set
    old: frozenset = frozenset()
    next: frozenset = frozenset()


def _until_subformulas(f, acc):
    if isinstance(f, Until):
        acc.append(f)
    if isinstance(f, (Until, Release, And, Or)):
        _until_subformulas(f.left, acc)
        _until_subformulas(f.right, acc)
    elif isinstance(f, Next):
        _until_subformulas(f.operand, acc)
    return acc


class _Tableau:
    def __init__(self):
        self.nodes: list[dict] = []  # {"old", "next", "incoming"}
        self.index: dict[tuple, int] = {}

    def expand(self, q: _Node):
        if not q.new:
            key = (q.old, q.next)
            i = self.index.get(key)
            if i is not None:
                self.nodes[i]["incoming"] |= q.incoming
                return
            i = len(self.nodes)
            self.nodes.append({"old": q.old, "next": q.next, "incoming": set(q.incoming)})
            self.index[key] = i
            self.expand(_Node(incoming={i}, new=set(q.next)))
            return

        eta = q.new.pop()
        if isinstance(eta, FalseF):
            return  # contradiction, discard the node
        if isinstance(eta, TrueF):
            # recorded in `old` so an Until discharged by True is visible
            # to the acceptance-set construction
            self.expand(_Node(q.incoming, q.new, q.old | {eta}, q.next))
            return
        if isinstance(eta, Lit):
            if Lit(eta.name, not eta.negated) in q.old:
                return
            self.expand(_Node(q.incoming, q.new, q.old | {eta}, q.next))
            return
        if isinstance(eta, And):
            new = q.new | ({eta.left, eta.right} - set(q.old))
            self.expand(_Node(q.incoming, new, q.old | {eta}, q.next))
            return
        if isinstance(eta, Next):
            self.expand(_Node(q.incoming, set(q.new), q.old | {eta}, q.next | {eta.operand}))
            return
        if isinstance(eta, Or):
            self.expand(_Node(q.incoming, q.new | ({eta.left} - set(q.old)), q.old | {eta}, q.next))
            self.expand(_Node(set(q.incoming), set(q.new) | ({eta.right} - set(q.old)), q.old | {eta}, q.next))
            return
        if isinstance(eta, Until):
            self.expand(
                _Node(q.incoming, q.new | ({eta.left} - set(q.old)), q.old | {eta}, q.next | {eta})
            )
            self.expand(
                _Node(set(q.incoming), set(q.new) | ({eta.right} - set(q.old)), q.old | {eta}, q.next)
            )
            return
        if isinstance(eta, Release):
            self.expand(
                _Node(q.incoming, q.new | ({eta.right} - set(q.old)), q.old | {eta}, q.next | {eta})
            )
            self.expand(
                _Node(
                    set(q.incoming),
                    set(q.new) | ({eta.left, eta.right} - set(q.old)),
                    q.old | {eta},
                    q.next,
                )
            )
            return
        raise TypeError(f"formula not in negation normal form: {eta!r}")


@dataclass
class Buchi:
    """Degeneralized Buchi automaton over bitmask-labelled alphabet letters."""

    n_states: int
    initial: list[int]
    succ: list[list[int]]
    need1: list[int]  # label bits required set to enter the state
    need0: list[int]  # label bits required clear to enter the state
    accepting: list[bool]

    def enterable(self, state: int, label: int) -> bool:
        return (label & self.need1[state]) == self.need1[state] and not (
            label & self.need0[state]
        )


def nnf_to_buchi(nnf, prop_index: dict[str, int]) -> Buchi:
    """Build the automaton accepting exactly the models of an NNF formula."""
    tableau = _Tableau()
    tableau.expand(_Node(incoming={_INIT}, new={nnf}))
    nodes = tableau.nodes

    untils = []
    for u in _until_subformulas(nnf, []):
        if u not in untils:
            untils.append(u)

    # F_g = nodes where the Until obligation g is absent or already discharged
    n = len(nodes)
    in_fset = [[(u not in nd["old"]) or (u.right in nd["old"]) for nd in nodes] for u in untils]
    k = max(1, len(untils))
    if not untils:
        in_fset = [[True] * n]

    node_succ = [[] for _ in range(n)]
    node_init = []
    for j, nd in enumerate(nodes):
        for i in nd["incoming"]:
            if i == _INIT:
                node_init.append(j)
            else:
                node_succ[i].append(j)

    def masks(nd):
        m1 = m0 = 0
        for f in nd["old"]:
            if isinstance(f, Lit):
                bit = 1 << prop_index[f.name]
                if f.negated:
                    m0 |= bit
                else:
                    m1 |= bit
        return m1, m0

    node_masks = [masks(nd) for nd in nodes]

    # counter product: leave an F_i state -> advance the counter
    def sid(node, ctr):
        return node * k + ctr

    n_states = n * k
    succ = [[] for _ in range(n_states)]
    need1 = [0] * n_states
    need0 = [0] * n_states
    accepting = [False] * n_states
    for j in range(n):
        m1, m0 = node_masks[j]
        for c in range(k):
            s = sid(j, c)
            need1[s], need0[s] = m1, m0
            accepting[s] = c == 0 and in_fset[0][j]
            nxt = (c + 1) % k if in_fset[c][j] else c
            succ[s] = [sid(t, nxt) for t in node_succ[j]]

    initial = [sid(j, 0) for j in node_init]
    return Buchi(n_states, initial, succ, need1, need0, accepting)
