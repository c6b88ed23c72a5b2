"""Decorated names for places and transitions.

Every place and transition of an encoded net is named by its syntactic
position: a path of decorations (parallel side, sum branch, past action,
restriction) followed by a payload (residual process, key marker, or a
synchronisation pair).  Rendering is injective and stable, so names double
as wire identifiers for the CLI, JSON API, and UI.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .ccs import (
    IN,
    Action,
    NIL,
    Par,
    Process,
    Rec,
    Restrict,
    Sum,
    Var,
)

FWD = "fwd"
BWD = "bwd"


@dataclass(frozen=True)
class ParSide:
    index: int  # 0 = left, 1 = right


@dataclass(frozen=True)
class SumBranch:
    index: int


@dataclass(frozen=True)
class Past:
    action: Action


@dataclass(frozen=True)
class Restr:
    channel: str


Decoration = Union[ParSide, SumBranch, Past, Restr]
Path = tuple[Decoration, ...]


@dataclass(frozen=True)
class ProcPlace:
    path: Path
    residual: Process


@dataclass(frozen=True)
class KeyPlace:
    """Marks "this transition has fired"; path ends with Past(action)."""

    path: Path
    action: Action


@dataclass(frozen=True)
class ActTrans:
    path: Path
    action: Action


@dataclass(frozen=True)
class SyncTrans:
    pair: frozenset  # of two ActTrans with dual labels

    def components(self) -> tuple[ActTrans, ActTrans]:
        a, b = sorted(self.pair, key=render_transition)
        return a, b


@dataclass(frozen=True)
class SyncKeyPlace:
    pair: frozenset  # of two ActTrans, same names as the SyncTrans

    def components(self) -> tuple[ActTrans, ActTrans]:
        a, b = sorted(self.pair, key=render_transition)
        return a, b


PlaceName = Union[ProcPlace, KeyPlace, SyncKeyPlace]
TransitionName = Union[ActTrans, SyncTrans]


@dataclass(frozen=True)
class DirectedTransition:
    base: TransitionName
    direction: str = FWD  # FWD or BWD

    @property
    def is_forward(self) -> bool:
        return self.direction == FWD


def fwd(t: TransitionName) -> DirectedTransition:
    return DirectedTransition(t, FWD)


def bwd(t: TransitionName) -> DirectedTransition:
    return DirectedTransition(t, BWD)


def label_of(t: TransitionName) -> Action:
    """Underlying action of a transition; synchronisations are tau."""
    from .ccs import TAU

    if isinstance(t, SyncTrans):
        return TAU
    return t.action


# ---------------------------------------------------------------------------
# Rendering
#
# |0: |1:   parallel sides          ^a?. ^a!.  past actions
# +0: +1:   sum branches            (...)\a    restriction wrapping
# a? a! tau actions                 _a?        key marker
# t1*t2     synchronisation         s{t1*t2}   synchronisation key


def render_action(a: Action) -> str:
    if a.is_tau:
        return "tau"
    return a.channel + ("?" if a.kind == IN else "!")


def render_path(path: Path, leaf: str) -> str:
    if not path:
        return leaf
    head, rest = path[0], path[1:]
    if isinstance(head, ParSide):
        return f"|{head.index}:" + render_path(rest, leaf)
    if isinstance(head, SumBranch):
        return f"+{head.index}:" + render_path(rest, leaf)
    if isinstance(head, Past):
        return f"^{render_action(head.action)}." + render_path(rest, leaf)
    if isinstance(head, Restr):
        return "(" + render_path(rest, leaf) + ")\\" + head.channel
    raise TypeError(head)


def render_residual(p: Process) -> str:
    """Process text used inside place names (?/! action style, trailing
    .0 dropped)."""
    text, _ = _render_res(p)
    return text


_PAR, _SUM, _PRE, _ATOM = 0, 1, 2, 3


def _render_res(p: Process) -> tuple[str, int]:
    match p:
        case Sum(()):
            return "0", _ATOM
        case Sum(branches):
            parts = []
            for a, cont in branches:
                if cont == NIL:
                    parts.append(render_action(a))
                else:
                    parts.append(render_action(a) + "." + _res_at(cont, _PRE))
            if len(branches) == 1:
                return parts[0], _PRE
            return " + ".join(parts), _SUM
        case Par(l, r):
            return _res_at(l, _PAR) + " | " + _res_at(r, _SUM), _PAR
        case Restrict(body, c):
            return _res_at(body, _ATOM) + "\\" + c, _ATOM
        case Var(name):
            return name, _ATOM
        case Rec(name, body):
            return f"rec {name}. " + _res_at(body, _SUM), _SUM
    raise TypeError(p)


def _res_at(p: Process, level: int) -> str:
    text, lvl = _render_res(p)
    return "(" + text + ")" if lvl < level else text


def render_place(s: PlaceName) -> str:
    if isinstance(s, ProcPlace):
        return render_path(s.path, render_residual(s.residual))
    if isinstance(s, KeyPlace):
        # path already ends with Past(action): render as ^a?._a?
        return render_path(s.path, "_" + render_action(s.action))
    if isinstance(s, SyncKeyPlace):
        a, b = s.components()
        return "s{" + render_transition(a) + "*" + render_transition(b) + "}"
    return str(s)  # hand-built nets may use bare identifiers


def render_transition(t: TransitionName) -> str:
    if isinstance(t, ActTrans):
        return render_path(t.path, render_action(t.action))
    if isinstance(t, SyncTrans):
        a, b = sorted(t.pair, key=lambda x: render_path(x.path, render_action(x.action)))
        return render_transition(a) + "*" + render_transition(b)
    return str(t)


def render_directed(t: DirectedTransition) -> str:
    arrow = "->" if t.is_forward else "<-"
    return arrow + render_transition(t.base)
