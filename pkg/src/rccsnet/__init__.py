"""CCS and reversible CCS as (reversible) unravel Petri nets."""

from .ccs import (
    Action,
    NIL,
    Par,
    Process,
    Rec,
    Restrict,
    Sum,
    TAU,
    Var,
    ccs_steps,
    dual,
    free_names,
    bound_names,
    inp,
    out,
    parse_process,
    prefix,
    render,
    substitute,
    unfold,
)
from .encode import encode, init_places
from .names import (
    ActTrans,
    DirectedTransition,
    KeyPlace,
    ParSide,
    Past,
    ProcPlace,
    Restr,
    SumBranch,
    SyncKeyPlace,
    SyncTrans,
    bwd,
    fwd,
    label_of,
    render_directed,
    render_place,
    render_transition,
)
from .petri import (
    FiniteNet,
    LazyNet,
    enabled,
    executions,
    explore,
    fire,
    firing_sequences,
    is_safe,
    reachable_markings,
    subnet,
)
from .rccs import (
    EMPTY_MEMORY,
    FullSync,
    Memory,
    Monitored,
    PartialSync,
    RLabel,
    RPar,
    RRestrict,
    Split,
    ancestor,
    apply_sync_update,
    initial,
    marking_of,
    parse_rccs,
    path,
    rccs_backward_steps,
    rccs_forward_steps,
    render_rccs,
    split_normalize,
)
from .reversible import encode_reversible
from .unravel import (
    is_causal_net,
    is_reversible_unravel,
    is_unravel_net,
    key_places,
    reverse,
)
from .bisim import BisimVerdict, check_frbisim
