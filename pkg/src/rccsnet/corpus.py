"""Shared term corpus for the property and acceptance suites: the worked
examples plus deterministic pseudo-random guarded terms."""

from __future__ import annotations

import random

from . import ccs
from .ccs import NIL, Process, Sum, inp, out, prefix

WORKED_EXAMPLES = [
    "0",
    "a.0",
    "a.b.0",
    "a.b | ~a.c",
    "a.b + ~a.c",
    "(a.b | ~a.c)\\a",
    "a.a | (~a + b)",
    "a.(b | c) | (~a | d)",
    "rec X. a.X",
    "(rec X. a.X | rec Y. (~b.Y + ~a.Y))\\a",
]

_CHANNELS = ["a", "b", "c"]


def _random_term(rng: random.Random, budget: int, depth: int = 0) -> Process:
    """Closed guarded term with at most `budget` operators; sums are built
    from prefixed branches, so guardedness holds by construction."""
    if budget <= 0:
        return NIL
    kind = rng.choice(["prefix", "prefix", "sum", "par", "restrict"])
    ch = rng.choice(_CHANNELS)
    act = inp(ch) if rng.random() < 0.5 else out(ch)
    if kind == "prefix" or depth > 3:
        return prefix(act, _random_term(rng, budget - 1, depth + 1))
    if kind == "sum":
        n = rng.randint(2, 3)
        branches = []
        for _ in range(n):
            ch2 = rng.choice(_CHANNELS)
            a2 = inp(ch2) if rng.random() < 0.5 else out(ch2)
            branches.append((a2, _random_term(rng, (budget - n) // n, depth + 1)))
        return Sum(tuple(branches))
    if kind == "par":
        half = (budget - 1) // 2
        return ccs.Par(
            _random_term(rng, half, depth + 1), _random_term(rng, half, depth + 1)
        )
    return ccs.Restrict(_random_term(rng, budget - 1, depth + 1), ch)


def corpus(size: int = 25, seed: int = 2024) -> list[Process]:
    """The worked examples padded with random guarded terms (<= 6 operators)."""
    terms = [ccs.parse_process(t) for t in WORKED_EXAMPLES]
    rng = random.Random(seed)
    while len(terms) < size:
        t = ccs.freshen(_random_term(rng, 6))
        ccs.validate(t)
        terms.append(t)
    return terms[:size]
