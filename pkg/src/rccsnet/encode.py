"""Compilation of CCS terms into complete unravel nets.

The net for a term can be infinite (recursion); it is materialized lazily:
the truncation at a marking rebuilds, from the place names and the term,
exactly the transitions whose tokens are present.  Names encode syntactic
positions, so every truncation agrees with the global inductive net.
"""

from __future__ import annotations

from typing import Optional

from .ccs import (
    NIL,
    Action,
    Par,
    Process,
    Restrict,
    Sum,
    dual,
    unfold_heads,
    validate,
)
from .names import (
    ActTrans,
    KeyPlace,
    ParSide,
    Past,
    Path,
    PlaceName,
    ProcPlace,
    Restr,
    SumBranch,
    SyncKeyPlace,
    SyncTrans,
    TransitionName,
    fwd,
    label_of,
)
from .petri import FiniteNet, LazyNet, Marking


class EncodingError(Exception):
    pass


def init_places(path: Path, p: Process) -> frozenset:
    """Initial marking of the (decorated) net of p: one place per parallel
    component, one per branch of a topmost choice."""
    p = unfold_heads(p)
    match p:
        case Sum(()):
            return frozenset({ProcPlace(path, NIL)})
        case Sum(branches) if len(branches) == 1:
            return frozenset({ProcPlace(path, p)})
        case Sum(branches):
            acc = set()
            for i, branch in enumerate(branches):
                acc.add(ProcPlace(path + (SumBranch(i),), Sum((branch,))))
            return frozenset(acc)
        case Par(l, r):
            return init_places(path + (ParSide(0),), l) | init_places(
                path + (ParSide(1),), r
            )
        case Restrict(body, c):
            return init_places(path + (Restr(c),), body)
    raise EncodingError(f"cannot place open term: {p!r}")


def _blocked(path: Path, a: Action) -> bool:
    """A labelled transition is removed by any restriction above it on the
    same channel; tau is never removed."""
    if a.is_tau:
        return False
    return any(isinstance(d, Restr) and d.channel == a.channel for d in path)


def _fork_index(p1: Path, p2: Path) -> Optional[int]:
    """Index where the two paths split on opposite parallel sides."""
    k = 0
    while k < len(p1) and k < len(p2) and p1[k] == p2[k]:
        k += 1
    if k >= len(p1) or k >= len(p2):
        return None
    d1, d2 = p1[k], p2[k]
    if isinstance(d1, ParSide) and isinstance(d2, ParSide) and d1 != d2:
        return k
    return None


def encode(p: Process) -> LazyNet:
    """Compile a closed guarded term to its lazily truncated unravel net."""
    validate(p)
    root = p

    def resolve(path: Path) -> Process:
        """Subterm at a decorated position, heads unfolded along the way."""
        cur = unfold_heads(root)
        for d in path:
            match d:
                case ParSide(index=i):
                    assert isinstance(cur, Par)
                    cur = unfold_heads(cur.left if i == 0 else cur.right)
                case SumBranch(index=i):
                    assert isinstance(cur, Sum) and len(cur.branches) > 1
                    cur = Sum((cur.branches[i],))
                case Past(action=a):
                    assert isinstance(cur, Sum) and len(cur.branches) == 1
                    assert cur.branches[0][0] == a
                    cur = unfold_heads(cur.branches[0][1])
                case Restr(channel=_):
                    assert isinstance(cur, Restrict)
                    cur = unfold_heads(cur.body)
        return cur

    def act_arcs(t: ActTrans) -> tuple[frozenset, frozenset]:
        path, a = t.path, t.action
        if path and isinstance(path[-1], SumBranch):
            sum_path = path[:-1]
            node = resolve(sum_path)
            assert isinstance(node, Sum)
            pre = frozenset(
                ProcPlace(sum_path + (SumBranch(j),), Sum((branch,)))
                for j, branch in enumerate(node.branches)
            )
        else:
            pre = frozenset({ProcPlace(path, resolve(path))})
        cont_path = path + (Past(a),)
        key = KeyPlace(cont_path, a)
        post = frozenset({key}) | init_places(cont_path, resolve(cont_path))
        return pre, post

    def key_of(t: ActTrans) -> KeyPlace:
        return KeyPlace(t.path + (Past(t.action),), t.action)

    def sync_arcs(pair: frozenset) -> tuple[frozenset, frozenset]:
        t1, t2 = tuple(pair)
        pre1, post1 = act_arcs(t1)
        pre2, post2 = act_arcs(t2)
        pre = pre1 | pre2
        post = (
            (post1 - {key_of(t1)})
            | (post2 - {key_of(t2)})
            | {SyncKeyPlace(pair)}
        )
        return pre, post

    def local_candidates(place: ProcPlace) -> list[ActTrans]:
        residual = place.residual
        if residual == NIL:
            return []
        assert isinstance(residual, Sum) and len(residual.branches) == 1
        action, _cont = residual.branches[0]
        return [ActTrans(place.path, action)]

    def truncate(m: Marking) -> FiniteNet:
        candidates: list[ActTrans] = []
        for s in m:
            if isinstance(s, ProcPlace):
                candidates.extend(local_candidates(s))
        transitions: dict = {}
        places = set(m)
        for t in candidates:
            if _blocked(t.path, t.action):
                continue
            arcs = act_arcs(t)
            transitions[fwd(t)] = arcs
            places.update(arcs[0] | arcs[1])
        for i, t1 in enumerate(candidates):
            if t1.action.is_tau:
                continue
            for t2 in candidates[i + 1 :]:
                if t2.action.is_tau or t2.action != dual(t1.action):
                    continue
                k = _fork_index(t1.path, t2.path)
                if k is None:
                    continue
                # a restriction between the fork and either action removes
                # that half before the synchronisation is formed
                if _blocked(t1.path[k:], t1.action) or _blocked(
                    t2.path[k:], t2.action
                ):
                    continue
                pair = frozenset({t1, t2})
                arcs = sync_arcs(pair)
                transitions[fwd(SyncTrans(pair))] = arcs
                places.update(arcs[0] | arcs[1])
        return FiniteNet(
            places=frozenset(places), transitions=transitions, initial=m
        )

    def key_resolver(s: PlaceName):
        if isinstance(s, KeyPlace):
            t = ActTrans(s.path[:-1], s.action)
            pre, post = act_arcs(t)
            return fwd(t), pre, post
        if isinstance(s, SyncKeyPlace):
            pre, post = sync_arcs(s.pair)
            return fwd(SyncTrans(s.pair)), pre, post
        return None

    return LazyNet(
        initial=init_places((), p), truncate=truncate, key_resolver=key_resolver
    )
