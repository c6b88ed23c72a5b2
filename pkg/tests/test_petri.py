"""Kernel behaviour, checked against a hand-built oracle net.

The oracle below is the net of a.b | ~a.c written out place by place from
its definition, with its own tiny enumerator; expected counts are frozen
from the oracle, never from the code under test.
"""

import pytest

from rccsnet.ccs import parse_process
from rccsnet.encode import encode
from rccsnet.names import (
    ActTrans,
    DirectedTransition,
    ParSide,
    Past,
    ProcPlace,
    bwd,
    fwd,
    render_directed,
)
from rccsnet.petri import (
    FiniteNet,
    NetError,
    NotEnabledError,
    SafetyViolationError,
    enabled,
    executions,
    explore,
    fire,
    firing_sequences,
    is_safe,
    reachable_markings,
    subnet,
)
from rccsnet.unravel import reverse
from rccsnet.ccs import inp


from conftest import simple_net


def _t(name):
    return DirectedTransition(ActTrans((), inp(name)), "fwd")


# --------------------------------------------------------------------------
# Oracle: a.b | ~a.c  (L0 -a-> L1 -b-> L2; R0 -abar-> R1 -c-> R2; tau joint)

ORACLE_ARCS = {
    "a": ({"L0"}, {"L1", "ka"}),
    "b": ({"L1"}, {"L2", "kb"}),
    "abar": ({"R0"}, {"R1", "kabar"}),
    "c": ({"R1"}, {"R2", "kc"}),
    "tau": ({"L0", "R0"}, {"L1", "R1", "ktau"}),
}
ORACLE_INITIAL = {"L0", "R0"}


def oracle_sequences(depth):
    """All firing sequences of the oracle up to depth, by brute recursion."""
    out = set()

    def go(marking, seq):
        out.add(seq)
        if len(seq) >= depth:
            return
        for name, (pre, post) in ORACLE_ARCS.items():
            if set(pre) <= marking:
                go((marking - pre) | post, seq + (name,))

    go(frozenset(ORACLE_INITIAL), ())
    return out


def oracle_markings(depth):
    seen = {frozenset(ORACLE_INITIAL)}
    frontier = [frozenset(ORACLE_INITIAL)]
    for _ in range(depth):
        nxt = []
        for m in frontier:
            for name, (pre, post) in ORACLE_ARCS.items():
                if set(pre) <= m:
                    m2 = (m - pre) | post
                    if m2 not in seen:
                        seen.add(m2)
                        nxt.append(m2)
        frontier = nxt
    return seen


ORACLE_SEQS_4 = oracle_sequences(4)
ORACLE_EXECUTIONS_4 = {frozenset((t, s.count(t)) for t in set(s)) for s in ORACLE_SEQS_4}
ORACLE_MARKINGS = oracle_markings(10)


class TestOracleCounts:
    def test_oracle_fs_depth4(self):
        # 3 of length 1, 6 of length 2, 8 of length 3, 6 of length 4
        assert len(ORACLE_SEQS_4) == 1 + 3 + 6 + 8 + 6

    def test_oracle_executions_depth4(self):
        assert len(ORACLE_EXECUTIONS_4) == 13

    def test_oracle_reachable(self):
        assert len(ORACLE_MARKINGS) == 13


@pytest.fixture(scope="module")
def net():
    return encode(parse_process("a.b | ~a.c"))


class TestAgainstOracle:

    def test_enabled_at_initial(self, net):
        ts = enabled(net, net.initial)
        assert len(ts) == 3  # two prefixes plus their synchronisation

    def test_firing_sequence_count(self, net):
        seqs = firing_sequences(net, 4, forward_only=True)
        assert len(seqs) == len(ORACLE_SEQS_4)

    def test_execution_count(self, net):
        assert len(executions(net, 4, forward_only=True)) == len(ORACLE_EXECUTIONS_4)

    def test_reachable_markings(self, net):
        assert len(reachable_markings(net, 10, forward_only=True)) == len(
            ORACLE_MARKINGS
        )

    def test_fire_sync_result(self, net):
        sync = [t for t in enabled(net, net.initial) if "*" in render_directed(t)]
        assert len(sync) == 1
        m = fire(net, net.initial, sync[0])
        labels = sorted(render_directed(t) for t in enabled(net, m))
        assert labels == ["->|0:^a?.b?", "->|1:^a!.c?"]

    def test_choice_executions_depth2(self):
        choice = encode(parse_process("a.b + ~a.c"))
        got = executions(choice, 2, forward_only=True)
        assert len(got) == 5  # nothing, a, ~a, ab, ~ac


class TestFire:
    def test_not_enabled(self):
        n = simple_net({"x": ({"p"}, {"q"})}, {"q"})
        with pytest.raises(NotEnabledError):
            fire(n, n.initial, _t("x"))

    def test_safety_violation_detected(self):
        n = simple_net({"x": ({"p"}, {"q"}), "y": ({"r"}, {"q"})}, {"p", "r", "q"})
        with pytest.raises(SafetyViolationError):
            fire(n, n.initial, _t("x"))

    def test_unsafe_net_flagged(self):
        n = simple_net({"x": ({"p"}, {"q"}), "y": ({"r"}, {"q"})}, {"p", "r"})
        assert is_safe(n, 1)  # one step is fine
        assert not is_safe(n, 2)  # the second producer doubles q

    def test_reversed_pair_is_identity(self):
        net = encode(parse_process("a.b | ~a.c"))
        rev = reverse(net)
        for m in reachable_markings(rev, 6):
            for t in enabled(rev, m):
                if t.direction != "fwd":
                    continue
                m2 = fire(rev, m, t)
                back = bwd(t.base)
                assert back in enabled(rev, m2)
                assert fire(rev, m2, back) == m


class TestSubnet:
    def test_empty(self):
        n = simple_net({"x": ({"p"}, {"q"})}, {"p"})
        sub = subnet(n, [])
        assert not sub.places and not sub.transitions

    def test_unknown_transition(self):
        n = simple_net({"x": ({"p"}, {"q"})}, {"p"})
        with pytest.raises(NetError):
            subnet(n, [_t("zz")])

    def test_restricts_marking(self):
        n = simple_net({"x": ({"p"}, {"q"}), "y": ({"r"}, {"s"})}, {"p", "r"})
        sub = subnet(n, [_t("x")])
        assert sub.places == frozenset({"p", "q"})
        assert sub.initial == frozenset({"p"})


class TestLazy:
    def test_zero(self):
        net = encode(parse_process("0"))
        assert len(net.initial) == 1
        assert enabled(net, net.initial) == set()
        assert firing_sequences(net, 5) == {()}

    def test_enabled_at_empty_marking(self):
        net = encode(parse_process("a.b | ~a.c"))
        assert enabled(net, frozenset()) == set()

    def test_rev_after_firing_only_backward(self):
        net = reverse(encode(parse_process("a.0")))
        (t,) = enabled(net, net.initial)
        m = fire(net, net.initial, t)
        assert enabled(net, m) == {bwd(t.base)}

    def test_rev_depth2_sequences(self):
        net = reverse(encode(parse_process("a.0")))
        seqs = firing_sequences(net, 2)
        (t,) = enabled(net, net.initial)
        assert seqs == {(), (t,), (t, bwd(t.base))}

    def test_rev_safe(self):
        net = reverse(encode(parse_process("a.a | (~a + b)")))
        assert is_safe(net, 8)

    def test_truncation_consistency_probe(self):
        # a transition present in two truncations carries identical arcs
        net = encode(parse_process("a.b | ~a.c"))
        seen = {}
        for m in reachable_markings(net, 6, forward_only=True):
            for t, arcs in net.trunc(m).transitions.items():
                assert seen.setdefault(t, arcs) == arcs
