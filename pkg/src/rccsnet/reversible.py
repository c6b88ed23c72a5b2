"""Reversible net of a coherent state: the ancestor's net, reversed, with
the marking read off the memories."""

from __future__ import annotations

from .encode import encode
from .petri import LazyNet
from .rccs import RProcess, ancestor, marking_of, split_normalize
from .unravel import reverse


def encode_reversible(r: RProcess) -> LazyNet:
    """Net of the ancestor with every transition reversible; only the
    marking depends on the state's history."""
    r = split_normalize(r)
    base = reverse(encode(ancestor(r)))
    return LazyNet(
        initial=marking_of(r),
        truncate=base.truncate,
        key_resolver=base.key_resolver,
    )
