"""Command-line frontend: encode terms to nets, run the property suites,
step through a reversible computation interactively, or serve the HTTP API.

Exit codes: 0 ok, 1 input error, 2 property violation (JSON witness on
stdout).
"""

from __future__ import annotations

import argparse
import json
import sys

from .ccs import CCSError, parse_process, render
from .corpus import corpus
from .dot import to_dot
from .names import (
    BWD,
    DirectedTransition,
    FWD,
    KeyPlace,
    SyncKeyPlace,
    label_of,
    render_action,
    render_directed,
    render_place,
)
from .petri import LazyNet, enabled, explore, fire, is_safe, reachable_markings
from .rccs import (
    RCCSError,
    backward_steps_named,
    forward_steps_named,
    marking_of,
    parse_rccs,
    render_rccs,
    split_normalize,
)
from .bisim import check_frbisim
from .encode import encode
from .reversible import encode_reversible
from .unravel import is_reversible_unravel, is_unravel_net, key_places, reverse


def _net_json(finite) -> dict:
    places = []
    for s in sorted(finite.places, key=render_place):
        kind = "proc"
        if isinstance(s, KeyPlace):
            kind = "key"
        elif isinstance(s, SyncKeyPlace):
            kind = "synckey"
        places.append(
            {"id": render_place(s), "kind": kind, "marked": s in finite.initial}
        )
    transitions = [
        {
            "id": render_directed(t),
            "direction": t.direction,
            "label": render_action(label_of(t.base)),
            "preset": sorted(render_place(s) for s in pre),
            "postset": sorted(render_place(s) for s in post),
        }
        for t, (pre, post) in sorted(
            finite.transitions.items(), key=lambda kv: render_directed(kv[0])
        )
    ]
    return {"places": places, "transitions": transitions}


def cmd_encode(args) -> int:
    try:
        p = parse_process(args.term)
    except CCSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    net = encode(p)
    if args.reversible:
        net = reverse(net)
    finite = explore(net, depth=None if args.full else args.radius,
                     forward_only=args.forward_only)
    fwd_count = sum(1 for t in finite.transitions if t.direction == FWD)
    print(
        f"{render(p)}: {len(finite.places)} places, "
        f"{len(finite.transitions)} transitions ({fwd_count} forward)"
    )
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(to_dot(finite, title=render(p)))
        print(f"wrote {args.dot}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(_net_json(finite), fh, indent=2)
        print(f"wrote {args.json}")
    if not args.dot and not args.json:
        for t in sorted(finite.transitions, key=render_directed):
            print(" ", render_directed(t))
    return 0


def _check_term(term_text: str, depth: int) -> list[tuple[str, bool, str]]:
    """Per-property verdicts for one term; each entry (name, ok, detail)."""
    results = []
    root = parse_rccs(term_text)
    p = root.body
    net = encode(p)
    rev_net = reverse(net)

    # unravel certificate on every truncation reachable within depth
    ok, detail = True, ""
    markings = reachable_markings(net, depth, forward_only=True)
    for m in markings:
        trunc = net.trunc(m)
        verdict = is_unravel_net(trunc, depth)
        if not verdict:
            ok, detail = False, f"{verdict.violated_condition}: {verdict.witness}"
            break
        kp = key_places(trunc)
        if trunc.transitions and not kp.ok:
            missing = ", ".join(render_directed(t) for t in kp.missing)
            ok, detail = False, f"missing key places: {missing}"
            break
    results.append(("unravel-certificate", ok, detail))

    results.append(
        ("safety", is_safe(rev_net, depth), f"explored to depth {depth}")
    )

    # loop lemma over reachable coherent states
    ok, detail = True, ""
    state0 = split_normalize(root)
    seen = {state0}
    frontier = [state0]
    for _ in range(depth):
        nxt = []
        for st in frontier:
            for s in forward_steps_named(st):
                back = {(b.label, b.result) for b in backward_steps_named(s.result)}
                if (s.label, st) not in back:
                    ok = False
                    detail = f"step {render_directed(DirectedTransition(s.transition, FWD))} not undoable"
                    break
                if s.result not in seen:
                    seen.add(s.result)
                    nxt.append(s.result)
            if not ok:
                break
        if not ok:
            break
        frontier = nxt
    results.append(("loop-lemma", ok, detail or f"{len(seen)} states"))

    fwd_marks = reachable_markings(net, depth, forward_only=True)
    mixed_marks = reachable_markings(rev_net, depth)
    results.append(
        (
            "reachability-equality",
            fwd_marks == mixed_marks,
            f"{len(fwd_marks)} markings",
        )
    )

    # reversible unravel net on the explored window
    finite = explore(rev_net, depth=depth)
    u = {t for t in finite.transitions if t.direction == BWD}
    if u:
        verdict = is_reversible_unravel(finite, u, depth)
        results.append(
            (
                "reversible-unravel",
                verdict.ok,
                verdict.witness or f"{len(u)} reversing transitions",
            )
        )

    bisim = check_frbisim(root, encode_reversible(root), depth)
    results.append(
        (
            "forward-reverse-bisimulation",
            bisim.ok,
            "" if bisim.ok else json.dumps(bisim.counterexample),
        )
    )
    return results


def cmd_check(args) -> int:
    try:
        results = _check_term(args.term, args.depth)
    except (CCSError, RCCSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    failed = [r for r in results if not r[1]]
    width = max(len(name) for name, _ok, _d in results)
    for name, ok, detail in results:
        status = "ok" if ok else "FAIL"
        suffix = f"  ({detail})" if detail else ""
        print(f"{name:<{width}}  {status}{suffix}")
    if failed:
        print(json.dumps({"violations": [
            {"property": name, "witness": detail} for name, _ok, detail in failed
        ]}))
        return 2
    return 0


def cmd_simulate(args) -> int:
    try:
        root = parse_rccs(args.term)
        net = encode_reversible(root)
    except (CCSError, RCCSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    state = split_normalize(root)
    marking = net.initial
    history: list = []

    while True:
        print()
        print("state  :", render_rccs(state))
        print("marking:", ", ".join(sorted(render_place(s) for s in marking)))
        options = []
        for s in forward_steps_named(state):
            options.append((DirectedTransition(s.transition, FWD), s.result))
        for s in backward_steps_named(state):
            options.append((DirectedTransition(s.transition, BWD), s.result))
        options.sort(key=lambda o: render_directed(o[0]))
        print("Enabled transitions:")
        for i, (t, _r) in enumerate(options, start=1):
            print(f"{i}) {render_directed(t)}")
        if not options:
            print("   (none)")
        try:
            line = input("> ").strip()
        except EOFError:
            return 0
        if line in ("quit", "q", "exit"):
            return 0
        if line == "history":
            for name in history:
                print("  ", name)
            continue
        if line == "undo":
            if not history:
                print("nothing to undo")
                continue
            name = history.pop()
            arrow, base = ("<-", name[2:]) if name.startswith("->") else ("->", name[2:])
            inverse = arrow + base
            match = [o for o in options if render_directed(o[0]) == inverse]
            if not match:
                print("cannot undo here")
                history.append(name)
                continue
            t, nxt = match[0]
            marking = fire(net, marking, t)
            state = split_normalize(nxt)
            continue
        if not line.isdigit() or not (1 <= int(line) <= len(options)):
            print("pick a number, 'undo', 'history', or 'quit'")
            continue
        t, nxt = options[int(line) - 1]
        marking = fire(net, marking, t)
        state = split_normalize(nxt)
        history.append(render_directed(t))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host="127.0.0.1", port=args.port, log_level="warning")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="rccsnet",
        description="CCS / reversible CCS as reversible unravel Petri nets",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_enc = sub.add_parser("encode", help="compile a term and export its net")
    p_enc.add_argument("term")
    p_enc.add_argument("--dot", metavar="PATH")
    p_enc.add_argument("--json", metavar="PATH")
    p_enc.add_argument("--radius", type=int, default=1,
                       help="forward BFS depth for the exported window")
    p_enc.add_argument("--full", action="store_true",
                       help="explore to quiescence (finite nets only)")
    p_enc.add_argument("--forward-only", action="store_true")
    p_enc.add_argument("--reversible", action="store_true",
                       help="add reversing transitions")
    p_enc.set_defaults(func=cmd_encode)

    p_chk = sub.add_parser("check", help="run the property suites on a term")
    p_chk.add_argument("term")
    p_chk.add_argument("--depth", type=int, default=6)
    p_chk.set_defaults(func=cmd_check)

    p_sim = sub.add_parser("simulate", help="interactive forward/backward stepper")
    p_sim.add_argument("term")
    p_sim.set_defaults(func=cmd_simulate)

    p_srv = sub.add_parser("serve", help="run the HTTP session service")
    p_srv.add_argument("--port", type=int, default=8080)
    p_srv.set_defaults(func=cmd_serve)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
