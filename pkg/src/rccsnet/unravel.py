"""Recognizers for causal nets, unravel nets, completeness, and reversible
unravel nets, plus the reversing construction.

All whole-net checks on possibly-infinite nets are depth bounded and report
"verified up to depth d"; finite nets are checked exactly where possible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .names import (
    BWD,
    FWD,
    ActTrans,
    DirectedTransition,
    KeyPlace,
    SyncKeyPlace,
    SyncTrans,
    TransitionName,
    bwd,
    render_directed,
    render_place,
    render_transition,
)
from .petri import (
    FiniteNet,
    LazyNet,
    Marking,
    NetError,
    executions,
    fire,
    is_safe,
    subnet,
)


@dataclass
class Verdict:
    ok: bool
    violated_condition: Optional[str] = None
    witness: Optional[str] = None

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "violated_condition": self.violated_condition,
            "witness": self.witness,
        }


OK = Verdict(True)


def _pre_of_place(n: FiniteNet, s) -> set:
    return {t for t, (pre, post) in n.transitions.items() if s in post}


def _post_of_place(n: FiniteNet, s) -> set:
    return {t for t, (pre, post) in n.transitions.items() if s in pre}


def _flow_acyclic(n: FiniteNet) -> Optional[list]:
    """Topological check over the place/transition bipartite graph; returns
    a cycle witness (node list) or None.  Ties broken by rendered name."""

    def node_name(x):
        if isinstance(x, DirectedTransition):
            return render_directed(x)
        return render_place(x)

    succs: dict = {s: set() for s in n.places}
    for t, (pre, post) in n.transitions.items():
        succs[t] = set(post)
        for s in pre:
            succs.setdefault(s, set()).add(t)
    WHITE, GREY, BLACK = 0, 1, 2
    color = {x: WHITE for x in succs}
    stack_path: list = []

    def visit(x) -> Optional[list]:
        color[x] = GREY
        stack_path.append(x)
        for y in sorted(succs.get(x, ()), key=node_name):
            if color.get(y, WHITE) == GREY:
                i = stack_path.index(y)
                return stack_path[i:] + [y]
            if color.get(y, WHITE) == WHITE:
                cyc = visit(y)
                if cyc is not None:
                    return cyc
        stack_path.pop()
        color[x] = BLACK
        return None

    for x in sorted(succs, key=node_name):
        if color[x] == WHITE:
            cyc = visit(x)
            if cyc is not None:
                return cyc
    return None


def _all_transitions_fireable(n: FiniteNet) -> Optional[DirectedTransition]:
    """Greedy scheduling; complete on nets without place branching (no two
    transitions share an input place), which holds once the cardinality
    conditions passed.  Returns a transition left unfired, or None."""
    remaining = dict(n.transitions)
    m = set(n.initial)
    progress = True
    while remaining and progress:
        progress = False
        for t in sorted(remaining, key=render_directed):
            pre, post = remaining[t]
            if pre <= m:
                m -= pre
                m |= post
                del remaining[t]
                progress = True
                break
    if remaining:
        return sorted(remaining, key=render_directed)[0]
    return None


def is_causal_net(n: FiniteNet) -> Verdict:
    """Causal net: safe, no forward/backward branching on places, acyclic
    flow, every transition fireable in one run, minimal places marked."""
    for s in sorted(n.places, key=render_place):
        pre = _pre_of_place(n, s)
        if len(pre) > 1:
            return Verdict(False, "place-backward-branching", render_place(s))
        post = _post_of_place(n, s)
        if len(post) > 1:
            return Verdict(False, "place-forward-branching", render_place(s))
    cycle = _flow_acyclic(n)
    if cycle is not None:
        names = [
            render_directed(x) if isinstance(x, DirectedTransition) else render_place(x)
            for x in cycle
        ]
        return Verdict(False, "flow-cycle", " -> ".join(names))
    for s in sorted(n.places, key=render_place):
        if not _pre_of_place(n, s) and s not in n.initial:
            return Verdict(False, "unmarked-minimal-place", render_place(s))
    # depth bound |T| suffices: acyclic and each transition fires once
    if not is_safe(n, len(n.transitions) + 1):
        return Verdict(False, "not-safe", None)
    left = _all_transitions_fireable(n)
    if left is not None:
        return Verdict(False, "transition-not-fireable", render_directed(left))
    return Verdict(True)


def is_unravel_net(n: FiniteNet, depth: int) -> Verdict:
    """Unravel net up to depth: safe, execution-generated subnets are causal,
    and no two distinct transitions share both preset and postset."""
    if not is_safe(n, depth):
        return Verdict(False, "not-safe", f"violation within depth {depth}")
    seen_arcs: dict = {}
    for t, arcs in n.transitions.items():
        other = seen_arcs.get(arcs)
        if other is not None:
            return Verdict(
                False,
                "duplicate-pre-post",
                f"{render_directed(other)} / {render_directed(t)}",
            )
        seen_arcs[arcs] = t
    for x in sorted(executions(n, depth), key=lambda e: sorted(map(str, e))):
        ts = {t for t, _count in x}
        sub = subnet(n, ts)
        verdict = is_causal_net(sub)
        if not verdict:
            names = sorted(render_directed(t) for t in ts)
            return Verdict(
                False,
                "execution-subnet-not-causal",
                f"execution {{{', '.join(names)}}}: {verdict.violated_condition}"
                f" ({verdict.witness})",
            )
    return Verdict(True)


@dataclass
class KeyPlaceResult:
    ok: bool
    mapping: dict = field(default_factory=dict)  # TransitionName -> PlaceName
    missing: list = field(default_factory=list)  # transitions lacking a key

    def __bool__(self):
        return self.ok


def key_places(n: FiniteNet) -> KeyPlaceResult:
    """For each forward transition, the place marking its firing: sole
    producer is the transition, no consumers, and the postset holds more
    than the key alone.  Candidate ties break by rendered name."""
    mapping: dict = {}
    missing: list = []
    for t in sorted(n.transitions, key=render_directed):
        if t.direction == BWD:
            continue
        pre, post = n.transitions[t]
        if len(post) <= 1:
            missing.append(t)
            continue
        candidates = [
            s
            for s in post
            if _pre_of_place(n, s) == {t} and not _post_of_place(n, s)
        ]
        if not candidates:
            missing.append(t)
            continue
        mapping[t.base] = min(candidates, key=render_place)
    if missing:
        return KeyPlaceResult(False, mapping, missing)
    return KeyPlaceResult(True, mapping, [])


class CompletenessError(NetError):
    def __init__(self, transitions: Iterable[DirectedTransition]):
        names = ", ".join(sorted(render_directed(t) for t in transitions))
        super().__init__(f"no key place for transitions: {names}")
        self.transitions = list(transitions)


def reverse(n, u: Optional[Iterable[TransitionName]] = None):
    """Reversing construction: each reversed transition gains a backward
    twin with preset and postset swapped.  Defaults to reversing all."""
    if isinstance(n, FiniteNet):
        return _reverse_finite(n, u)
    return _reverse_lazy(n, u)


def _reverse_finite(n: FiniteNet, u) -> FiniteNet:
    kp = key_places(n)
    if not kp.ok:
        raise CompletenessError(kp.missing)
    chosen = set(u) if u is not None else {t.base for t in n.transitions}
    transitions = dict(n.transitions)
    for t in list(n.transitions):
        if t.direction == BWD:
            raise NetError("net already contains backward transitions")
        if t.base in chosen:
            pre, post = n.transitions[t]
            transitions[bwd(t.base)] = (post, pre)
    return FiniteNet(places=n.places, transitions=transitions, initial=n.initial)


def _reverse_lazy(n: LazyNet, u) -> LazyNet:
    if n.key_resolver is None:
        raise NetError("lazy net has no key resolver; reverse a finite explore")
    chosen = None if u is None else set(u)

    def truncate(m: Marking) -> FiniteNet:
        base = n.trunc(m)
        transitions = dict(base.transitions)
        places = set(base.places)
        for t, (pre, post) in base.transitions.items():
            if not any(isinstance(s, (KeyPlace, SyncKeyPlace)) for s in post):
                raise CompletenessError([t])
        for s in m:
            if not isinstance(s, (KeyPlace, SyncKeyPlace)):
                continue
            resolved = n.key_resolver(s)
            if resolved is None:
                continue
            t, pre, post = resolved
            if chosen is not None and t.base not in chosen:
                continue
            transitions[bwd(t.base)] = (post, pre)
            places.update(pre | post)
        return FiniteNet(
            places=frozenset(places), transitions=transitions, initial=m
        )

    return LazyNet(initial=n.initial, truncate=truncate, key_resolver=n.key_resolver)


def is_reversible_unravel(
    n: FiniteNet, u: Iterable[DirectedTransition], depth: int = 32
) -> Verdict:
    """Reversible unravel net: every reversing transition undoes a unique
    forward partner, the net without reversing transitions is a complete
    unravel net, and the whole net is safe (to the given bound)."""
    u = set(u)
    forward = [t for t in n.transitions if t not in u]
    for r in sorted(u, key=render_directed):
        rpre, rpost = n.transitions[r]
        partners = [
            t
            for t in forward
            if n.transitions[t] == (rpost, rpre)
        ]
        if len(partners) != 1:
            return Verdict(
                False,
                "no-unique-inverse-partner",
                f"{render_directed(r)} has {len(partners)} partners",
            )
    sub = subnet(n, forward)
    # restriction drops places only touched by reversing transitions;
    # keep initially marked ones so behaviour is preserved
    sub = FiniteNet(
        places=sub.places | n.initial,
        transitions=sub.transitions,
        initial=n.initial,
    )
    un = is_unravel_net(sub, depth)
    if not un:
        return Verdict(False, "forward-part-not-unravel", un.witness)
    kp = key_places(sub)
    if not kp.ok:
        names = ", ".join(render_directed(t) for t in kp.missing)
        return Verdict(False, "forward-part-not-complete", names)
    if not is_safe(n, depth):
        return Verdict(False, "not-safe", f"violation within depth {depth}")
    return Verdict(True)
