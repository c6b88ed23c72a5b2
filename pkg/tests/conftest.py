import hypothesis.strategies as st
import pytest
from hypothesis import settings

from rccsnet import ccs
from rccsnet.ccs import NIL, Par, Rec, Restrict, Sum, Var, inp, out, prefix

settings.register_profile("suite", max_examples=40, deadline=None)
settings.load_profile("suite")

_channels = st.sampled_from(["a", "b", "c"])
_actions = st.one_of(
    _channels.map(inp),
    _channels.map(out),
    st.just(ccs.TAU),
)


def _guarded(depth: int, rec_vars: tuple = ()):
    """Closed guarded terms; sums only contain prefixed branches and rec
    variables only appear under a prefix, so every draw is valid."""
    if depth <= 0:
        leaf = [st.just(NIL)]
        return st.one_of(*leaf)
    cont = _guarded(depth - 1, rec_vars)
    cont_or_var = (
        st.one_of(cont, st.sampled_from([Var(v) for v in rec_vars]))
        if rec_vars
        else cont
    )
    branch = st.tuples(_actions, cont_or_var)
    return st.one_of(
        st.just(NIL),
        st.lists(branch, min_size=1, max_size=3).map(lambda bs: Sum(tuple(bs))),
        st.tuples(cont, cont).map(lambda lr: Par(*lr)),
        st.tuples(cont, _channels).map(lambda bc: Restrict(*bc)),
    )


@st.composite
def guarded_terms(draw, max_depth: int = 3):
    use_rec = draw(st.booleans())
    if use_rec:
        body = draw(
            st.lists(
                st.tuples(_actions, st.one_of(_guarded(max_depth - 1, ("X",)), st.just(Var("X")))),
                min_size=1,
                max_size=2,
            ).map(lambda bs: Sum(tuple(bs)))
        )
        term = Rec("X", body)
    else:
        term = draw(_guarded(max_depth))
    term = ccs.freshen(term)
    ccs.validate(term)
    return term


@pytest.fixture(scope="session")
def term_corpus():
    from rccsnet.corpus import corpus

    return corpus()


def simple_net(arcs, initial, reversing=()):
    """Hand-built finite net over string places.

    arcs: {label: (pre, post)}; labels in `reversing` become backward
    transitions with the arcs as given.
    """
    from rccsnet.names import ActTrans, DirectedTransition
    from rccsnet.petri import FiniteNet

    transitions = {}
    for name, (pre, post) in arcs.items():
        direction = "bwd" if name in reversing else "fwd"
        t = DirectedTransition(ActTrans((), inp(name)), direction)
        transitions[t] = (frozenset(pre), frozenset(post))
    places = frozenset().union(*(p | q for p, q in transitions.values()))
    return FiniteNet(
        places=places, transitions=transitions, initial=frozenset(initial)
    )
