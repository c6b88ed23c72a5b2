"""Regular CCS terms: syntax, parsing, rendering, and the forward LTS.

Terms are finite representations (mu-notation via Rec/Var) of possibly
infinite regular processes.  Sums are n-ary and guarded: every branch is
an action prefix.  Nil is the empty sum.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional, Union

IN = "in"
OUT = "out"
TAU_KIND = "tau"

_RESERVED = {"tau", "rec"}
_NAME_RE = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*")


class CCSError(Exception):
    """Base class for term construction and validation failures."""


class ParseError(CCSError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class UnguardedRecursionError(CCSError):
    pass


class FreeVariableError(CCSError):
    pass


@dataclass(frozen=True)
class Action:
    kind: str  # one of IN, OUT, TAU_KIND
    channel: Optional[str] = None

    def __post_init__(self):
        if self.kind == TAU_KIND:
            assert self.channel is None
        else:
            assert self.kind in (IN, OUT) and self.channel

    @property
    def is_tau(self) -> bool:
        return self.kind == TAU_KIND


def inp(channel: str) -> Action:
    return Action(IN, channel)


def out(channel: str) -> Action:
    return Action(OUT, channel)


TAU = Action(TAU_KIND)


def dual(a: Action) -> Action:
    """Co-action: swaps input and output on the same channel."""
    if a.is_tau:
        raise CCSError("tau has no co-action")
    return Action(OUT if a.kind == IN else IN, a.channel)


@dataclass(frozen=True)
class Sum:
    branches: tuple[tuple[Action, "Process"], ...] = ()


@dataclass(frozen=True)
class Par:
    left: "Process"
    right: "Process"


@dataclass(frozen=True)
class Restrict:
    body: "Process"
    channel: str


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Rec:
    name: str
    body: "Process"


Process = Union[Sum, Par, Restrict, Var, Rec]

NIL = Sum(())


def prefix(a: Action, p: Process) -> Process:
    """The unitary sum a.p."""
    return Sum(((a, p),))


# ---------------------------------------------------------------------------
# Name sets, substitution, unfolding


def action_channels(a: Action) -> set[str]:
    return set() if a.is_tau else {a.channel}


def free_names(p: Process) -> set[str]:
    match p:
        case Sum(branches):
            acc: set[str] = set()
            for a, q in branches:
                acc |= action_channels(a) | free_names(q)
            return acc
        case Par(l, r):
            return free_names(l) | free_names(r)
        case Restrict(body, c):
            return free_names(body) - {c}
        case Var(_):
            return set()
        case Rec(_, body):
            return free_names(body)
    raise TypeError(p)


def bound_names(p: Process) -> set[str]:
    match p:
        case Sum(branches):
            acc: set[str] = set()
            for _, q in branches:
                acc |= bound_names(q)
            return acc
        case Par(l, r):
            return bound_names(l) | bound_names(r)
        case Restrict(body, c):
            return bound_names(body) | {c}
        case Var(_):
            return set()
        case Rec(_, body):
            return bound_names(body)
    raise TypeError(p)


def substitute(p: Process, x: str, q: Process) -> Process:
    """Replace Var(x) by q in p; an inner Rec binding x shadows."""
    match p:
        case Sum(branches):
            return Sum(tuple((a, substitute(c, x, q)) for a, c in branches))
        case Par(l, r):
            return Par(substitute(l, x, q), substitute(r, x, q))
        case Restrict(body, c):
            return Restrict(substitute(body, x, q), c)
        case Var(name):
            return q if name == x else p
        case Rec(name, body):
            if name == x:
                return p
            return Rec(name, substitute(body, x, q))
    raise TypeError(p)


def unfold(p: Process) -> Process:
    """One unfolding step of a Rec head; identity otherwise."""
    if isinstance(p, Rec):
        return substitute(p.body, p.name, p)
    return p


def unfold_heads(p: Process) -> Process:
    """Unfold until the head constructor is not Rec.

    Terminates on closed guarded terms: a Var can never surface at the
    head, and each step strips one leading binder.
    """
    while isinstance(p, Rec):
        p = unfold(p)
    return p


# ---------------------------------------------------------------------------
# Validation


def check_closed(p: Process, bound: frozenset[str] = frozenset()) -> None:
    match p:
        case Sum(branches):
            for _, q in branches:
                check_closed(q, bound)
        case Par(l, r):
            check_closed(l, bound)
            check_closed(r, bound)
        case Restrict(body, _):
            check_closed(body, bound)
        case Var(name):
            if name not in bound:
                raise FreeVariableError(f"free process variable {name!r}")
        case Rec(name, body):
            check_closed(body, bound | {name})


def check_guarded(p: Process, pending: frozenset[str] = frozenset()) -> None:
    """Reject Var occurrences not under at least one prefix of their Rec."""
    match p:
        case Sum(branches):
            # crossing a prefix discharges all pending binders
            for _, q in branches:
                check_guarded(q, frozenset())
        case Par(l, r):
            check_guarded(l, pending)
            check_guarded(r, pending)
        case Restrict(body, _):
            check_guarded(body, pending)
        case Var(name):
            if name in pending:
                raise UnguardedRecursionError(
                    f"unguarded occurrence of variable {name!r}"
                )
        case Rec(name, body):
            check_guarded(body, pending | {name})


def validate(p: Process) -> Process:
    check_closed(p)
    check_guarded(p)
    return p


# ---------------------------------------------------------------------------
# Parser

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<name>[a-zA-Z][a-zA-Z0-9_]*)|(?P<punct>[().+|\\~]|\|>|<>))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        if text[pos] == "0":
            tokens.append(("zero", "0", pos))
            pos += 1
            continue
        m = _NAME_RE.match(text, pos)
        if m:
            word = m.group(0)
            kind = "kw" if word in _RESERVED else "name"
            tokens.append((kind, word, pos))
            pos = m.end()
            continue
        ch = text[pos]
        if ch in "().+|\\~":
            tokens.append(("punct", ch, pos))
            pos += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", pos)
    return tokens


class _Parser:
    """Recursive descent over the grammar:

        par    ::= sum ('|' sum)*
        sum    ::= guarded ('+' guarded)*      (operands merged into one Sum)
        guarded::= prefix '.' guarded | prefix | postfix
        postfix::= atom ('\\' name)*
        atom   ::= '0' | '(' par ')' | 'rec' NAME '.' sum | NAME
        prefix ::= NAME | '~' NAME | 'tau'

    A bare NAME is a recursion variable when bound by an enclosing rec,
    otherwise shorthand for NAME.0.  '+' is flattened left to right.
    """

    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0
        self.rec_vars: list[str] = []

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, -1)

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.next()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val!r}", pos)

    def at_end(self) -> bool:
        return self.i >= len(self.tokens)

    def parse(self) -> Process:
        p = self.parse_par()
        if not self.at_end():
            _, val, pos = self.peek()
            raise ParseError(f"trailing input {val!r}", pos)
        return p

    def parse_par(self) -> Process:
        p = self.parse_sum()
        while self.peek()[1] == "|":
            self.next()
            q = self.parse_sum()
            p = Par(p, q)
        return p

    def parse_sum(self) -> Process:
        operands = [self.parse_guarded()]
        first_pos = self.peek()[2]
        while self.peek()[1] == "+":
            self.next()
            operands.append(self.parse_guarded())
        if len(operands) == 1:
            return operands[0]
        branches: list[tuple[Action, Process]] = []
        for op in operands:
            if not isinstance(op, Sum):
                raise ParseError(
                    "choice operands must be action-prefixed (or 0)", first_pos
                )
            branches.extend(op.branches)
        return Sum(tuple(branches))

    def parse_guarded(self) -> Process:
        kind, val, pos = self.peek()
        if val == "~":
            self.next()
            k2, name, p2 = self.next()
            if k2 != "name":
                raise ParseError("expected channel name after '~'", p2)
            return self._after_prefix(out(name))
        if val == "tau":
            self.next()
            return self._after_prefix(TAU)
        if kind == "name" and val not in self.rec_vars:
            # could be a prefix ("a.P" / bare "a") or an atom followed by '\'
            nxt = self.tokens[self.i + 1][1] if self.i + 1 < len(self.tokens) else None
            if nxt == ".":
                self.next()
                self.next()
                return prefix(inp(val), self.parse_guarded())
            if nxt == "\\":
                return self.parse_postfix()
            self.next()
            return prefix(inp(val), NIL)
        return self.parse_postfix()

    def _after_prefix(self, a: Action) -> Process:
        if self.peek()[1] == ".":
            self.next()
            return prefix(a, self.parse_guarded())
        return prefix(a, NIL)

    def parse_postfix(self) -> Process:
        p = self.parse_atom()
        while self.peek()[1] == "\\":
            self.next()
            kind, name, pos = self.next()
            if kind != "name":
                raise ParseError("expected channel name after '\\'", pos)
            p = Restrict(p, name)
        return p

    def parse_atom(self) -> Process:
        kind, val, pos = self.next()
        if val == "0":
            return NIL
        if val == "(":
            p = self.parse_par()
            self.expect(")")
            return p
        if val == "rec":
            k2, name, p2 = self.next()
            if k2 != "name":
                raise ParseError("expected variable name after 'rec'", p2)
            self.expect(".")
            self.rec_vars.append(name)
            body = self.parse_sum()
            self.rec_vars.pop()
            return Rec(name, body)
        if kind == "name":
            if val in self.rec_vars:
                return Var(val)
            return prefix(inp(val), NIL)
        raise ParseError(f"unexpected token {val!r}", pos)


def _all_channels(p: Process) -> set[str]:
    match p:
        case Sum(branches):
            acc: set[str] = set()
            for a, q in branches:
                acc |= action_channels(a) | _all_channels(q)
            return acc
        case Par(l, r):
            return _all_channels(l) | _all_channels(r)
        case Restrict(body, c):
            return _all_channels(body) | {c}
        case Var(_):
            return set()
        case Rec(_, body):
            return _all_channels(body)
    raise TypeError(p)


def _rename_channel(q: Process, old: str, new: str) -> Process:
    """Substitute free occurrences of channel `old` with `new`."""
    match q:
        case Sum(branches):
            renamed = []
            for a, c in branches:
                if not a.is_tau and a.channel == old:
                    a = Action(a.kind, new)
                renamed.append((a, _rename_channel(c, old, new)))
            return Sum(tuple(renamed))
        case Par(l, r):
            return Par(_rename_channel(l, old, new), _rename_channel(r, old, new))
        case Restrict(body, c):
            if c == old:
                return q  # inner binder shadows
            return Restrict(_rename_channel(body, old, new), c)
        case Var(_):
            return q
        case Rec(name, body):
            return Rec(name, _rename_channel(body, old, new))
    raise TypeError(q)


def freshen(p: Process) -> Process:
    """Rename restriction binders so all binders are pairwise distinct and
    distinct from every free name.  Binders that are already unique keep
    their written name.
    """
    used = _all_channels(p)
    root_free = free_names(p)
    binders_seen: set[str] = set()

    def fresh(base: str) -> str:
        i = 1
        while f"{base}_{i}" in used:
            i += 1
        name = f"{base}_{i}"
        used.add(name)
        return name

    def walk(q: Process) -> Process:
        match q:
            case Sum(branches):
                return Sum(tuple((a, walk(c)) for a, c in branches))
            case Par(l, r):
                return Par(walk(l), walk(r))
            case Restrict(body, c):
                if c in binders_seen or c in root_free:
                    new = fresh(c)
                    body = _rename_channel(body, c, new)
                    c = new
                binders_seen.add(c)
                return Restrict(walk(body), c)
            case Var(_):
                return q
            case Rec(name, body):
                return Rec(name, walk(body))
        raise TypeError(q)

    return walk(p)


def parse_process(text: str) -> Process:
    """Parse, validate (closed + guarded), and freshen restriction binders."""
    p = _Parser(text).parse()
    validate(p)
    return freshen(p)


# ---------------------------------------------------------------------------
# Rendering (canonical grammar text; parse(render(p)) == p)

_LVL_PAR, _LVL_SUM, _LVL_PREFIX, _LVL_ATOM = 0, 1, 2, 3


def action_text(a: Action) -> str:
    if a.is_tau:
        return "tau"
    return a.channel if a.kind == IN else "~" + a.channel


def render(p: Process, level: int = _LVL_PAR) -> str:
    text, lvl = _render(p)
    if lvl < level:
        return "(" + text + ")"
    return text


def _render(p: Process) -> tuple[str, int]:
    match p:
        case Sum(()):
            return "0", _LVL_ATOM
        case Sum(branches):
            parts = []
            for a, cont in branches:
                if cont == NIL:
                    parts.append(action_text(a))
                else:
                    parts.append(action_text(a) + "." + render(cont, _LVL_PREFIX))
            joined = " + ".join(parts)
            if len(branches) == 1:
                return joined, _LVL_PREFIX
            return joined, _LVL_SUM
        case Par(l, r):
            # left associative: right operand needs the stricter level
            return render(l, _LVL_PAR) + " | " + render(r, _LVL_SUM), _LVL_PAR
        case Restrict(body, c):
            return render(body, _LVL_ATOM) + "\\" + c, _LVL_ATOM
        case Var(name):
            return name, _LVL_ATOM
        case Rec(name, body):
            return f"rec {name}. " + render(body, _LVL_SUM), _LVL_SUM
    raise TypeError(p)


# ---------------------------------------------------------------------------
# Forward LTS


def ccs_steps(p: Process) -> set[tuple[Action, Process]]:
    """One-step derivatives: act, par-l, par-r, syn, and restriction."""
    p = unfold_heads(p)
    steps: set[tuple[Action, Process]] = set()
    match p:
        case Sum(branches):
            for a, cont in branches:
                steps.add((a, cont))
        case Par(l, r):
            lsteps = ccs_steps(l)
            rsteps = ccs_steps(r)
            for a, l2 in lsteps:
                steps.add((a, Par(l2, r)))
            for a, r2 in rsteps:
                steps.add((a, Par(l, r2)))
            for a, l2 in lsteps:
                if a.is_tau:
                    continue
                for b, r2 in rsteps:
                    if b == dual(a):
                        steps.add((TAU, Par(l2, r2)))
        case Restrict(body, c):
            for a, q in ccs_steps(body):
                if not a.is_tau and a.channel == c:
                    continue
                steps.add((a, Restrict(q, c)))
        case Var(name):
            raise FreeVariableError(f"cannot step open term with variable {name!r}")
    return steps
