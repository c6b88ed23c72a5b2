"""Bounded-depth forward-reverse bisimulation between a coherent state and
a reversible net.

The product of the two transition systems is explored breadth-first.  At
every product state each LTS step must be answered by a net firing of the
matching decorated name (and vice versa), with the successor marking equal
to the successor state's marking; the concrete state witnesses the
existentials of the net-to-process clauses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .names import ActTrans, BWD, DirectedTransition, FWD, render_directed
from .petri import LazyNet, enabled, fire
from .rccs import (
    RProcess,
    backward_steps_named,
    forward_steps_named,
    marking_of,
    render_rccs,
    split_normalize,
)


@dataclass
class BisimVerdict:
    ok: bool
    depth: int
    counterexample: Optional[dict] = None

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "depth": self.depth,
            "counterexample": self.counterexample,
        }


def _clause(t: DirectedTransition, process_moved: bool) -> int:
    single = isinstance(t.base, ActTrans)
    if process_moved:
        if single:
            return 1 if t.direction == FWD else 2
        return 3 if t.direction == FWD else 4
    if single:
        return 5 if t.direction == FWD else 6
    return 7 if t.direction == FWD else 8


def _violation(depth, trace, t, clause, r, detail) -> BisimVerdict:
    return BisimVerdict(
        False,
        depth,
        {
            "clause": clause,
            "trace": [render_directed(x) for x in trace],
            "transition": render_directed(t),
            "state": render_rccs(r),
            "detail": detail,
        },
    )


def check_frbisim(r: RProcess, n: LazyNet, depth: int) -> BisimVerdict:
    """Explore to the given depth; returns the first violated clause (1-8)
    or ok-to-depth."""
    r0 = split_normalize(r)
    start = (r0, n.initial)
    seen = {start}
    frontier = [(r0, n.initial, ())]
    for d in range(depth + 1):
        if not frontier:
            break
        next_frontier = []
        for state, m, trace in frontier:
            steps = {}
            for s in forward_steps_named(state):
                steps.setdefault(DirectedTransition(s.transition, FWD), []).append(s)
            for s in backward_steps_named(state):
                steps.setdefault(DirectedTransition(s.transition, BWD), []).append(s)
            firings = enabled(n, m)
            # process moves answered by firings (clauses 1-4)
            for t, cands in sorted(steps.items(), key=lambda kv: render_directed(kv[0])):
                if t not in firings:
                    return _violation(
                        d, trace, t, _clause(t, True), state, "no matching firing"
                    )
                m2 = fire(n, m, t)
                matched = [s for s in cands if marking_of(s.result) == m2]
                if not matched:
                    return _violation(
                        d,
                        trace,
                        t,
                        _clause(t, True),
                        state,
                        "successor marking differs from successor state's marking",
                    )
            # firings answered by process moves (clauses 5-8)
            for t in sorted(firings, key=render_directed):
                cands = steps.get(t)
                if not cands:
                    return _violation(
                        d, trace, t, _clause(t, False), state, "no matching process step"
                    )
                m2 = fire(n, m, t)
                matched = [s for s in cands if marking_of(s.result) == m2]
                if not matched:
                    return _violation(
                        d,
                        trace,
                        t,
                        _clause(t, False),
                        state,
                        "no process step reaches this marking",
                    )
                if d < depth:
                    succ_state = split_normalize(matched[0].result)
                    succ = (succ_state, m2)
                    if succ not in seen:
                        seen.add(succ)
                        next_frontier.append((succ_state, m2, trace + (t,)))
        frontier = next_frontier
    return BisimVerdict(True, depth)
