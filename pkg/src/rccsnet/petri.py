"""Safe Petri nets with lazily truncated place/transition spaces.

A LazyNet is an initial marking plus a pure function mapping any marking
to a finite truncation that contains at least every transition enabled
there, with its exact global preset and postset.  All global questions
(reachability, safety, firing sequences) take an explicit depth bound.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Union

from .names import (
    BWD,
    DirectedTransition,
    PlaceName,
    TransitionName,
    render_directed,
    render_place,
)

Marking = frozenset  # of PlaceName
Arcs = tuple  # (preset, postset) pair of frozensets
Execution = frozenset  # of (DirectedTransition, count) pairs


class NetError(Exception):
    pass


class NotEnabledError(NetError):
    def __init__(self, t: DirectedTransition, missing: Iterable[PlaceName]):
        names = ", ".join(sorted(render_place(s) for s in missing))
        super().__init__(f"{render_directed(t)} not enabled; missing {{{names}}}")
        self.transition = t
        self.missing = frozenset(missing)


class SafetyViolationError(NetError):
    def __init__(self, t: DirectedTransition, places: Iterable[PlaceName]):
        names = ", ".join(sorted(render_place(s) for s in places))
        super().__init__(
            f"firing {render_directed(t)} would double tokens on {{{names}}}"
        )
        self.transition = t
        self.places = frozenset(places)


@dataclass
class FiniteNet:
    places: frozenset
    transitions: dict  # DirectedTransition -> (preset, postset)
    initial: Marking

    def preset(self, t: DirectedTransition) -> Marking:
        return self.transitions[t][0]

    def postset(self, t: DirectedTransition) -> Marking:
        return self.transitions[t][1]


@dataclass
class LazyNet:
    initial: Marking
    truncate: Callable[[Marking], FiniteNet]
    # encoder hook: rebuild the forward transition a key place signals,
    # as (directed transition, preset, postset); used to reverse lazily
    key_resolver: Optional[Callable] = None
    _cache: dict = field(default_factory=dict, repr=False)

    def trunc(self, m: Marking) -> FiniteNet:
        got = self._cache.get(m)
        if got is None:
            got = self.truncate(m)
            self._cache[m] = got
        return got


Net = Union[FiniteNet, LazyNet]


def _transitions_at(n: Net, m: Marking) -> dict:
    if isinstance(n, LazyNet):
        return n.trunc(m).transitions
    return n.transitions


def enabled(n: Net, m: Marking, forward_only: bool = False) -> set:
    """Transitions of the truncation at m whose presets are contained in m."""
    out = set()
    for t, (pre, _post) in _transitions_at(n, m).items():
        if forward_only and t.direction == BWD:
            continue
        if pre and pre <= m:
            out.add(t)
    return out


def fire(n: Net, m: Marking, t: DirectedTransition) -> Marking:
    arcs = _transitions_at(n, m).get(t)
    if arcs is None:
        raise NotEnabledError(t, frozenset())
    pre, post = arcs
    if not pre <= m:
        raise NotEnabledError(t, pre - m)
    leftover = m - pre
    overlap = post & leftover
    if overlap:
        raise SafetyViolationError(t, overlap)
    return leftover | post


def reachable_markings(
    n: Net, depth: int, forward_only: bool = False
) -> set:
    """BFS from the initial marking up to the given number of firings."""
    start = n.initial
    seen = {start}
    frontier = [start]
    for _ in range(depth):
        nxt = []
        for m in frontier:
            for t in enabled(n, m, forward_only):
                m2 = fire(n, m, t)
                if m2 not in seen:
                    seen.add(m2)
                    nxt.append(m2)
        if not nxt:
            break
        frontier = nxt
    return seen


def firing_sequences(
    n: Net, depth: int, forward_only: bool = False
) -> set:
    """All firing sequences from the initial marking of length <= depth,
    as tuples of directed transitions (the empty sequence included)."""
    out = {()}
    frontier = [((), n.initial)]
    for _ in range(depth):
        nxt = []
        for seq, m in frontier:
            for t in enabled(n, m, forward_only):
                m2 = fire(n, m, t)
                seq2 = seq + (t,)
                out.add(seq2)
                nxt.append((seq2, m2))
        if not nxt:
            break
        frontier = nxt
    return out


def execution_of(seq: Iterable[DirectedTransition]) -> Execution:
    return frozenset(Counter(seq).items())


def executions(n: Net, depth: int, forward_only: bool = False) -> set:
    """Multisets of transitions fired along sequences of length <= depth."""
    return {execution_of(seq) for seq in firing_sequences(n, depth, forward_only)}


def is_safe(n: Net, depth: int, forward_only: bool = False) -> bool:
    """True iff no firing within depth would place a second token on a
    marked place (set semantics hold on every explored path)."""
    seen = {n.initial}
    frontier = [n.initial]
    for _ in range(depth):
        nxt = []
        for m in frontier:
            for t in enabled(n, m, forward_only):
                try:
                    m2 = fire(n, m, t)
                except SafetyViolationError:
                    return False
                if m2 not in seen:
                    seen.add(m2)
                    nxt.append(m2)
        if not nxt:
            break
        frontier = nxt
    return True


def subnet(n: FiniteNet, ts: Iterable[DirectedTransition]) -> FiniteNet:
    """The subnet generated by ts: places restricted to their pre/postsets,
    flow and initial marking restricted accordingly."""
    ts = set(ts)
    unknown = ts - set(n.transitions)
    if unknown:
        raise NetError(f"unknown transitions: {sorted(map(render_directed, unknown))}")
    places = frozenset().union(
        *(n.transitions[t][0] | n.transitions[t][1] for t in ts)
    ) if ts else frozenset()
    transitions = {t: n.transitions[t] for t in ts}
    return FiniteNet(places=places, transitions=transitions, initial=n.initial & places)


def explore(n: Net, depth: Optional[int] = None, forward_only: bool = False) -> FiniteNet:
    """Materialize the union of truncations reachable within depth firings
    (all reachable markings when depth is None; diverges on infinite nets).
    """
    places = set(n.initial)
    transitions: dict = {}
    seen = {n.initial}
    frontier = deque([(n.initial, 0)])
    while frontier:
        m, d = frontier.popleft()
        if depth is not None and d >= depth:
            continue
        local = _transitions_at(n, m)
        for t, (pre, post) in local.items():
            if forward_only and t.direction == BWD:
                continue
            if not pre <= m:
                continue
            known = transitions.get(t)
            if known is None:
                transitions[t] = (pre, post)
                places.update(pre | post)
            elif known != (pre, post):
                raise NetError(
                    f"inconsistent truncations for {render_directed(t)}"
                )
            m2 = fire(n, m, t)
            if m2 not in seen:
                seen.add(m2)
                frontier.append((m2, d + 1))
    return FiniteNet(
        places=frozenset(places), transitions=transitions, initial=n.initial
    )
