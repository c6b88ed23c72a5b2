"""Graphviz export of finite nets.

Places are circles (key places filled), transitions boxes (reversing
transitions double-bordered), tokens drawn as filled dots via xlabel-free
peripheries and bold outline on marked places.
"""

from __future__ import annotations

from .names import (
    BWD,
    KeyPlace,
    SyncKeyPlace,
    render_directed,
    render_place,
)
from .petri import FiniteNet, Marking


def to_dot(n: FiniteNet, marking: Marking | None = None, title: str = "net") -> str:
    m = n.initial if marking is None else marking
    lines = [f'digraph "{title}" {{', "  rankdir=TB;"]
    place_ids = {}
    for i, s in enumerate(sorted(n.places, key=render_place)):
        place_ids[s] = f"p{i}"
        label = render_place(s).replace("\\", "\\\\").replace('"', '\\"')
        attrs = ["shape=circle", f'label="{label}"']
        if isinstance(s, (KeyPlace, SyncKeyPlace)):
            attrs.append("style=filled")
            attrs.append("fillcolor=lightblue")
        if s in m:
            attrs.append("penwidth=3")
            attrs.append('xlabel="&#9679;"')
        lines.append(f"  {place_ids[s]} [{', '.join(attrs)}];")
    trans_ids = {}
    for i, t in enumerate(sorted(n.transitions, key=render_directed)):
        trans_ids[t] = f"t{i}"
        label = render_directed(t).replace("\\", "\\\\").replace('"', '\\"')
        attrs = ["shape=box", f'label="{label}"']
        if t.direction == BWD:
            attrs.append("peripheries=2")
            attrs.append("color=red")
        lines.append(f"  {trans_ids[t]} [{', '.join(attrs)}];")
    for t, (pre, post) in sorted(
        n.transitions.items(), key=lambda kv: render_directed(kv[0])
    ):
        for s in sorted(pre, key=render_place):
            lines.append(f"  {place_ids[s]} -> {trans_ids[t]};")
        for s in sorted(post, key=render_place):
            lines.append(f"  {trans_ids[t]} -> {place_ids[s]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
