"""Reversible CCS: monitored processes, the forward/backward LTS,
structural normalization, ancestor computation, and the path/marking
functions connecting states to net names.

States are kept in a normal form: parallel bodies are split eagerly (each
sequential component owns its memory stack) and restrictions float out of
monitors.  A floated restriction remembers the monitor's memory at the
moment of exposure, so decorated names can re-insert the restriction at
its original syntactic position.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .ccs import (
    NIL,
    Action,
    Par,
    Process,
    Restrict,
    Sum,
    action_channels,
    dual,
    free_names,
    render,
    unfold_heads,
    validate,
)
from . import ccs
from .encode import init_places
from .names import (
    ActTrans,
    KeyPlace,
    ParSide,
    Past,
    Path,
    ProcPlace,
    Restr,
    SumBranch,
    SyncKeyPlace,
    SyncTrans,
    TransitionName,
    render_action,
    render_residual,
    render_transition,
)


class RCCSError(Exception):
    pass


class IncoherenceError(RCCSError):
    pass


# ---------------------------------------------------------------------------
# Memories


@dataclass(frozen=True)
class Split:
    side: int  # 0 = left, 1 = right


@dataclass(frozen=True)
class PartialSync:
    action: Action
    branch: int
    discarded: Process  # sum of the non-chosen branches; NIL for unitary sums
    continuation: Process = NIL  # chosen branch body, kept verbatim for undo


@dataclass(frozen=True)
class FullSync:
    partner: "Memory"
    action: Action
    branch: int
    discarded: Process
    continuation: Process = NIL


MemoryEvent = Union[Split, PartialSync, FullSync]


@dataclass(frozen=True)
class Memory:
    events: tuple = ()  # most recent first

    def push(self, e: MemoryEvent) -> "Memory":
        return Memory((e,) + self.events)

    def pop(self) -> "Memory":
        return Memory(self.events[1:])

    @property
    def top(self) -> Optional[MemoryEvent]:
        return self.events[0] if self.events else None

    def __len__(self):
        return len(self.events)


EMPTY_MEMORY = Memory(())


def memory_names(m: Memory) -> set[str]:
    names: set[str] = set()
    for e in m.events:
        if isinstance(e, Split):
            continue
        names |= action_channels(e.action) | free_names(e.discarded)
        if isinstance(e, FullSync):
            names |= memory_names(e.partner)
    return names


def _event_decorations(e: MemoryEvent) -> Path:
    if isinstance(e, Split):
        return (ParSide(e.side),)
    if e.discarded == NIL:
        return (Past(e.action),)
    return (SumBranch(e.branch), Past(e.action))


def path(m: Memory) -> Path:
    """Decoration path from the term's root recorded by a memory,
    oldest event outermost."""
    decs: list = []
    for e in reversed(m.events):
        decs.extend(_event_decorations(e))
    return tuple(decs)


# ---------------------------------------------------------------------------
# Reversible processes


@dataclass(frozen=True)
class Monitored:
    memory: Memory
    body: Process


@dataclass(frozen=True)
class RPar:
    left: "RProcess"
    right: "RProcess"


@dataclass(frozen=True)
class RRestrict:
    body: "RProcess"
    channel: str
    anchor: Memory = EMPTY_MEMORY  # memory of the monitor at exposure time


RProcess = Union[Monitored, RPar, RRestrict]


def initial(p: Process) -> Monitored:
    return Monitored(EMPTY_MEMORY, validate(p))


def parse_rccs(text: str) -> Monitored:
    """Parse "<> |> P" (or a bare CCS term) into an initial state."""
    text = text.strip()
    if text.startswith("<>"):
        rest = text[2:].lstrip()
        if not rest.startswith("|>"):
            raise RCCSError("expected '|>' after '<>'")
        text = rest[2:]
    return initial(ccs.parse_process(text))


def split_normalize(r: RProcess) -> RProcess:
    """Canonical form: monitors hold sums only; parallel compositions are
    split (memories gain split events) and restrictions float out, keeping
    the exposure memory as their anchor."""
    match r:
        case Monitored(memory=m, body=body):
            body = unfold_heads(body)
            match body:
                case Par(left=l, right=rgt):
                    return RPar(
                        split_normalize(Monitored(m.push(Split(0)), l)),
                        split_normalize(Monitored(m.push(Split(1)), rgt)),
                    )
                case Restrict(body=inner, channel=c):
                    if c in memory_names(m):
                        raise IncoherenceError(
                            f"restriction binder {c!r} not fresh for its memory"
                        )
                    return RRestrict(
                        split_normalize(Monitored(m, inner)), c, anchor=m
                    )
                case _:
                    return Monitored(m, body)
        case RPar(left=l, right=rgt):
            return RPar(split_normalize(l), split_normalize(rgt))
        case RRestrict(body=b, channel=c, anchor=anchor):
            return RRestrict(split_normalize(b), c, anchor)
    raise TypeError(r)


# ---------------------------------------------------------------------------
# Labels


@dataclass(frozen=True)
class RLabel:
    memories: tuple  # one memory, or (left, right) for synchronisations
    action: Action

    def __post_init__(self):
        assert len(self.memories) in (1, 2)
        assert len(self.memories) == 1 or self.action.is_tau


# tree addresses: "L"/"R" descend an RPar, "B" descends an RRestrict
_Addr = tuple


def _subtrees(r: RProcess, addr: _Addr = ()) -> Iterable[tuple[_Addr, RProcess]]:
    yield addr, r
    match r:
        case RPar(left=l, right=rgt):
            yield from _subtrees(l, addr + ("L",))
            yield from _subtrees(rgt, addr + ("R",))
        case RRestrict(body=b):
            yield from _subtrees(b, addr + ("B",))


def _leaves(r: RProcess) -> list[tuple[_Addr, Monitored]]:
    return [(a, s) for a, s in _subtrees(r) if isinstance(s, Monitored)]


def _replace(r: RProcess, addr: _Addr, new: RProcess) -> RProcess:
    if not addr:
        return new
    head, rest = addr[0], addr[1:]
    match r:
        case RPar(left=l, right=rgt):
            if head == "L":
                return RPar(_replace(l, rest, new), rgt)
            return RPar(l, _replace(rgt, rest, new))
        case RRestrict(body=b, channel=c, anchor=anchor):
            return RRestrict(_replace(b, rest, new), c, anchor)
    raise TypeError(r)


def _node_at(r: RProcess, addr: _Addr) -> RProcess:
    for step in addr:
        match r:
            case RPar(left=l, right=rgt):
                r = l if step == "L" else rgt
            case RRestrict(body=b):
                r = b
    return r


def _restrictions_along(r: RProcess, addr: _Addr) -> list[RRestrict]:
    """RRestrict nodes from the root down to (excluding) the addressed node."""
    out = []
    for step in addr:
        if isinstance(r, RRestrict):
            out.append(r)
            r = r.body
        else:
            r = r.left if step == "L" else r.right
    return out


def _blocked_by(restrs: Iterable[RRestrict], a: Action) -> bool:
    if a.is_tau:
        return False
    return any(n.channel == a.channel for n in restrs)


def _weave(base: Path, restrs: Iterable[RRestrict]) -> Path:
    """Insert restriction decorations at the positions recorded by their
    anchors (innermost node first, so outer insertions shift it right)."""
    result = list(base)
    for node in reversed(list(restrs)):
        result.insert(len(path(node.anchor)), Restr(node.channel))
    return tuple(result)


def _transition_for(
    memory: Memory, restrs: Iterable[RRestrict], z: int, action: Action, multibranch: bool
) -> ActTrans:
    base = path(memory)
    if multibranch:
        base = base + (SumBranch(z),)
    return ActTrans(_weave(base, restrs), action)


def _branches(body: Process):
    assert isinstance(body, Sum)
    return body.branches


def _discard(branches: tuple, z: int) -> Process:
    rest = branches[:z] + branches[z + 1 :]
    return Sum(rest)


def _reinsert(discarded: Process, z: int, branch) -> Process:
    assert isinstance(discarded, Sum)
    rest = discarded.branches
    return Sum(rest[:z] + (branch,) + rest[z:])


def _is_suffix(suffix: Memory, m: Memory) -> bool:
    k = len(suffix.events)
    return k <= len(m.events) and (k == 0 or m.events[-k:] == suffix.events)


def _undo_keeps_anchors(r: RProcess, addr: _Addr, popped: Memory) -> bool:
    """Undoing must not rewind past the exposure point of any floated
    restriction enclosing the position."""
    return all(
        _is_suffix(node.anchor, popped) for node in _restrictions_along(r, addr)
    )


@dataclass(frozen=True)
class NamedStep:
    label: RLabel
    result: "RProcess"
    transition: TransitionName


def forward_steps_named(r: RProcess) -> list[NamedStep]:
    r = split_normalize(r)
    leaves = _leaves(r)
    steps: list[NamedStep] = []
    # r-act under parallel / restriction contexts
    for addr, leaf in leaves:
        restrs = _restrictions_along(r, addr)
        branches = _branches(leaf.body)
        multib = len(branches) > 1
        for z, (a, cont) in enumerate(branches):
            if _blocked_by(restrs, a):
                continue
            event = PartialSync(a, z, _discard(branches, z), cont)
            new_leaf = split_normalize(Monitored(leaf.memory.push(event), cont))
            r2 = _replace(r, addr, new_leaf)
            t = _transition_for(leaf.memory, restrs, z, a, multib)
            steps.append(NamedStep(RLabel((leaf.memory,), a), r2, t))
    # r-syn across any common parallel node
    for i, (addr1, leaf1) in enumerate(leaves):
        for addr2, leaf2 in leaves[i + 1 :]:
            k = _diverge(addr1, addr2)
            if k is None:
                continue
            between1 = _restrictions_along(_node_at(r, addr1[:k]), addr1[k:])
            between2 = _restrictions_along(_node_at(r, addr2[:k]), addr2[k:])
            restrs1 = _restrictions_along(r, addr1)
            restrs2 = _restrictions_along(r, addr2)
            b1 = _branches(leaf1.body)
            b2 = _branches(leaf2.body)
            for z1, (a1, c1) in enumerate(b1):
                if a1.is_tau or _blocked_by(between1, a1):
                    continue
                for z2, (a2, c2) in enumerate(b2):
                    if a2.is_tau or a2 != dual(a1) or _blocked_by(between2, a2):
                        continue
                    e1 = FullSync(leaf2.memory, a1, z1, _discard(b1, z1), c1)
                    e2 = FullSync(leaf1.memory, a2, z2, _discard(b2, z2), c2)
                    new1 = split_normalize(Monitored(leaf1.memory.push(e1), c1))
                    new2 = split_normalize(Monitored(leaf2.memory.push(e2), c2))
                    r2 = _replace(_replace(r, addr1, new1), addr2, new2)
                    t1 = _transition_for(leaf1.memory, restrs1, z1, a1, len(b1) > 1)
                    t2 = _transition_for(leaf2.memory, restrs2, z2, a2, len(b2) > 1)
                    # label memories ordered left component first
                    left_first = addr1[k] == "L"
                    mems = (
                        (leaf1.memory, leaf2.memory)
                        if left_first
                        else (leaf2.memory, leaf1.memory)
                    )
                    steps.append(
                        NamedStep(
                            RLabel(mems, ccs.TAU),
                            r2,
                            SyncTrans(frozenset({t1, t2})),
                        )
                    )
    return steps


def _diverge(a1: _Addr, a2: _Addr) -> Optional[int]:
    k = 0
    while k < len(a1) and k < len(a2) and a1[k] == a2[k]:
        k += 1
    if k < len(a1) and k < len(a2) and {a1[k], a2[k]} == {"L", "R"}:
        return k
    return None


# ---------------------------------------------------------------------------
# Backward steps: fold split/restriction structure back to expose events


def _fold(r: RProcess) -> Optional[Monitored]:
    match r:
        case Monitored():
            return r
        case RPar(left=l, right=rgt):
            fl = _fold(l)
            fr = _fold(rgt)
            if (
                fl is not None
                and fr is not None
                and fl.memory.top == Split(0)
                and fr.memory.top == Split(1)
                and fl.memory.pop() == fr.memory.pop()
            ):
                return Monitored(fl.memory.pop(), Par(fl.body, fr.body))
            return None
        case RRestrict(body=b, channel=c, anchor=anchor):
            fb = _fold(b)
            if fb is not None and fb.memory == anchor:
                return Monitored(fb.memory, Restrict(fb.body, c))
            return None
    raise TypeError(r)


def _undo_leaf(folded: Monitored) -> Monitored:
    """Pop the top synchronisation event, restoring prefix and choice.

    The continuation recorded in the event is used instead of the folded
    body: they denote the same regular tree, but the recorded one is the
    exact pre-step representation."""
    event = folded.memory.top
    branch = (event.action, event.continuation)
    restored = _reinsert(event.discarded, event.branch, branch)
    return Monitored(folded.memory.pop(), restored)


def backward_steps_named(r: RProcess) -> list[NamedStep]:
    r = split_normalize(r)
    undoable: list[tuple[_Addr, Monitored]] = []
    for addr, sub in _subtrees(r):
        folded = _fold(sub)
        if folded is not None and isinstance(folded.memory.top, (PartialSync, FullSync)):
            undoable.append((addr, folded))
    steps: list[NamedStep] = []
    for addr, folded in undoable:
        event = folded.memory.top
        restrs = _restrictions_along(r, addr)
        multib = event.discarded != NIL
        if isinstance(event, PartialSync):
            if _blocked_by(restrs, event.action):
                continue
            if not _undo_keeps_anchors(r, addr, folded.memory.pop()):
                continue
            r2 = _replace(r, addr, _undo_leaf(folded))
            pre_memory = folded.memory.pop()
            t = _transition_for(
                pre_memory, restrs, event.branch, event.action, multib
            )
            steps.append(NamedStep(RLabel((pre_memory,), event.action), r2, t))
    for i, (addr1, f1) in enumerate(undoable):
        e1 = f1.memory.top
        if not isinstance(e1, FullSync):
            continue
        for addr2, f2 in undoable[i + 1 :]:
            e2 = f2.memory.top
            if not isinstance(e2, FullSync):
                continue
            k = _diverge(addr1, addr2)
            if k is None:
                continue
            if e1.partner != f2.memory.pop() or e2.partner != f1.memory.pop():
                continue
            between1 = _restrictions_along(_node_at(r, addr1[:k]), addr1[k:])
            between2 = _restrictions_along(_node_at(r, addr2[:k]), addr2[k:])
            if _blocked_by(between1, e1.action) or _blocked_by(between2, e2.action):
                continue
            if not _undo_keeps_anchors(
                r, addr1, f1.memory.pop()
            ) or not _undo_keeps_anchors(r, addr2, f2.memory.pop()):
                continue
            r2 = _replace(
                _replace(r, addr1, _undo_leaf(f1)), addr2, _undo_leaf(f2)
            )
            m1 = f1.memory.pop()
            m2 = f2.memory.pop()
            t1 = _transition_for(
                m1, _restrictions_along(r, addr1), e1.branch, e1.action, e1.discarded != NIL
            )
            t2 = _transition_for(
                m2, _restrictions_along(r, addr2), e2.branch, e2.action, e2.discarded != NIL
            )
            left_first = addr1[k] == "L"
            mems = (m1, m2) if left_first else (m2, m1)
            steps.append(
                NamedStep(
                    RLabel(mems, ccs.TAU), r2, SyncTrans(frozenset({t1, t2}))
                )
            )
    return steps


def rccs_forward_steps(r: RProcess) -> set[tuple[RLabel, RProcess]]:
    return {(s.label, s.result) for s in forward_steps_named(r)}


def rccs_backward_steps(r: RProcess) -> set[tuple[RLabel, RProcess]]:
    return {(s.label, s.result) for s in backward_steps_named(r)}


def apply_sync_update(r: RProcess, m1: Memory, m2: Memory) -> RProcess:
    """Turn the partial synchronisation on top of memory m1 into a full one
    recording partner m2."""
    r = split_normalize(r)
    hits = []
    for addr, leaf in _leaves(r):
        top = leaf.memory.top
        if isinstance(top, PartialSync) and leaf.memory.pop() == m1:
            hits.append((addr, leaf, top))
    if not hits:
        raise IncoherenceError("no partial synchronisation on top of that memory")
    if len(hits) > 1:
        raise IncoherenceError("ambiguous partial synchronisation")
    addr, leaf, top = hits[0]
    event = FullSync(m2, top.action, top.branch, top.discarded, top.continuation)
    return _replace(r, addr, Monitored(m1.push(event), leaf.body))


# ---------------------------------------------------------------------------
# Ancestor


def ancestor(r: RProcess) -> Process:
    """The unique initial term this state derives from, by exhaustively
    rewinding events (full synchronisations rewind one half at a time)."""
    r = split_normalize(r)
    while True:
        progressed = False
        for addr, sub in _subtrees(r):
            folded = _fold(sub)
            if (
                folded is not None
                and isinstance(folded.memory.top, (PartialSync, FullSync))
                and _undo_keeps_anchors(r, addr, folded.memory.pop())
            ):
                r = _replace(r, addr, _undo_leaf(folded))
                progressed = True
                break
        if not progressed:
            break
    final = _fold(r)
    if final is None or len(final.memory) != 0:
        raise IncoherenceError(f"no ancestor: stuck at {render_rccs(r)}")
    return final.body


# ---------------------------------------------------------------------------
# Marking function


@dataclass(frozen=True)
class Pending:
    transition: ActTrans
    partner: Memory


def _insert_restr_places(places: frozenset, channel: str, at: int, ip: Path):
    def ins(p: Path) -> Path:
        return p[:at] + (Restr(channel),) + p[at:]

    def starts(p: Path) -> bool:
        return len(p) >= at and p[:at] == ip

    out = set()
    for s in places:
        if isinstance(s, ProcPlace) and starts(s.path):
            out.add(ProcPlace(ins(s.path), s.residual))
        elif isinstance(s, KeyPlace) and starts(s.path) and len(s.path) > at:
            out.add(KeyPlace(ins(s.path), s.action))
        elif isinstance(s, SyncKeyPlace):
            comps = frozenset(
                ActTrans(ins(t.path), t.action) if starts(t.path) else t
                for t in s.pair
            )
            out.add(SyncKeyPlace(comps))
        else:
            out.add(s)
    return frozenset(out)


def _insert_restr_pendings(pendings: frozenset, channel: str, at: int, ip: Path):
    def starts(p: Path) -> bool:
        return len(p) >= at and p[:at] == ip

    out = set()
    for p in pendings:
        t = p.transition
        if starts(t.path):
            t = ActTrans(t.path[:at] + (Restr(channel),) + t.path[at:], t.action)
        out.add(Pending(t, p.partner))
    return frozenset(out)


def _strip_restr(p: Path) -> Path:
    return tuple(d for d in p if not isinstance(d, Restr))


def _pending_matches(t: ActTrans, partner_memory: Memory) -> bool:
    """t must be the transition the partner memory points back to."""
    expected = path(partner_memory)
    stripped = _strip_restr(t.path)
    if stripped == expected:
        return True
    return (
        len(stripped) == len(expected) + 1
        and stripped[:-1] == expected
        and isinstance(stripped[-1], SumBranch)
    )


def _merge(left, right):
    places = left[0] | right[0]
    lp = set(left[1])
    rp = set(right[1])
    merged = set()
    for p1 in sorted(lp, key=lambda p: render_transition(p.transition)):
        match = None
        for p2 in sorted(rp, key=lambda p: render_transition(p.transition)):
            if p1.transition.action.is_tau or p2.transition.action.is_tau:
                continue
            if p2.transition.action != dual(p1.transition.action):
                continue
            if _pending_matches(p1.transition, p2.partner) and _pending_matches(
                p2.transition, p1.partner
            ):
                match = p2
                break
        if match is not None:
            lp.discard(p1)
            rp.discard(match)
            merged.add(SyncKeyPlace(frozenset({p1.transition, match.transition})))
    return places | frozenset(merged), frozenset(lp | rp)


def _mu(r: RProcess):
    match r:
        case Monitored(memory=m, body=body):
            return _mu_memory(tuple(reversed(m.events)), body, ())
        case RPar(left=l, right=rgt):
            return _merge(_mu(l), _mu(rgt))
        case RRestrict(body=b, channel=c, anchor=anchor):
            places, pendings = _mu(b)
            ip = path(anchor)
            at = len(ip)
            return (
                _insert_restr_places(places, c, at, ip),
                _insert_restr_pendings(pendings, c, at, ip),
            )
    raise TypeError(r)


def _mu_memory(events_oldest_first: tuple, body: Process, prefix: Path):
    if not events_oldest_first:
        return init_places(prefix, body), frozenset()
    e, rest = events_oldest_first[0], events_oldest_first[1:]
    decs = _event_decorations(e)
    inner_places, inner_pendings = _mu_memory(rest, body, prefix + decs)
    if isinstance(e, Split):
        return inner_places, inner_pendings
    if isinstance(e, PartialSync):
        key = KeyPlace(prefix + decs, e.action)
        return inner_places | {key}, inner_pendings
    # full synchronisation: a pending half, resolved by a parallel merge
    tpath = prefix if e.discarded == NIL else prefix + (SumBranch(e.branch),)
    pending = Pending(ActTrans(tpath, e.action), e.partner)
    return inner_places, inner_pendings | {pending}


def forward_marking_delta(r: RProcess, step: NamedStep):
    """Net-free incremental marking update for a forward step: the places a
    full recomputation would drop and add.  Mirrors how a memory event
    rewrites the marking, so it can be cross-checked against marking_of."""
    r = split_normalize(r)
    result = split_normalize(step.result)
    removed: set = set()
    added: set = set()
    sync = isinstance(step.transition, SyncTrans)
    for m in step.label.memories:
        event = None
        k = len(m.events) + 1
        for _addr, leaf in _leaves(result):
            events = leaf.memory.events
            if len(events) < k or events[len(events) - k + 1 :] != m.events:
                continue
            cand = events[len(events) - k]
            if not isinstance(cand, Split):
                event = cand
                break
        if event is None:
            raise IncoherenceError("step result does not extend the label memory")
        src_addr = None
        for addr, leaf in _leaves(r):
            if leaf.memory == m:
                src_addr = addr
                break
        if src_addr is None:
            raise IncoherenceError("label memory not present in the source state")
        restrs = _restrictions_along(r, src_addr)
        base = _weave(path(m), restrs)
        branch = (event.action, event.continuation)
        if event.discarded == NIL:
            removed.add(ProcPlace(base, Sum((branch,))))
            dec = (Past(event.action),)
        else:
            original = _reinsert(event.discarded, event.branch, branch)
            for j, br in enumerate(original.branches):
                removed.add(ProcPlace(base + (SumBranch(j),), Sum((br,))))
            dec = (SumBranch(event.branch), Past(event.action))
        added |= init_places(base + dec, event.continuation)
        if not sync:
            added.add(KeyPlace(base + dec, event.action))
    if sync:
        added.add(SyncKeyPlace(step.transition.pair))
    return frozenset(removed), frozenset(added)


def marking_of(r: RProcess) -> frozenset:
    places, pendings = _mu(split_normalize(r))
    if pendings:
        names = ", ".join(
            sorted(render_transition(p.transition) for p in pendings)
        )
        raise IncoherenceError(f"unmatched synchronisation halves: {names}")
    return places


# ---------------------------------------------------------------------------
# Rendering


def render_memory(m: Memory) -> str:
    if not m.events:
        return "<>"
    parts = []
    for e in m.events:
        if isinstance(e, Split):
            parts.append(f"<{e.side}>")
        elif isinstance(e, PartialSync):
            parts.append(
                f"<*,{render_action(e.action)}^{e.branch},{render_residual(e.discarded)}>"
            )
        else:
            parts.append(
                f"<{{{render_memory(e.partner)}}},{render_action(e.action)}"
                f"^{e.branch},{render_residual(e.discarded)}>"
            )
    return "".join(parts) + "<>"


def render_rccs(r: RProcess) -> str:
    match r:
        case Monitored(memory=m, body=body):
            return render_memory(m) + " |> " + render(body)
        case RPar(left=l, right=rgt):
            return "(" + render_rccs(l) + " || " + render_rccs(rgt) + ")"
        case RRestrict(body=b, channel=c):
            return "(" + render_rccs(b) + ")\\" + c
    raise TypeError(r)
