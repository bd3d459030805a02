"""Independent reference semantics for checking machines and composites.

Everything here recomputes behavior from raw tables, on purpose: the
simulator walks wiring expressions with its own evaluator instead of
calling the composition algebra, so the two paths can check each other.
Do not refactor the duplication away.

Word order conventions: inputs to a machine are flat tuples of port
symbols; words are sequences of those.  Input tuples are ordered by the
declared port alphabets, and "lexicographically least" always means that
order.
"""

from __future__ import annotations

import itertools
from collections import deque
from typing import Optional, Sequence

from .moore import MachineError, MooreMachine, State
from .wiring import Const, InnerOut, OuterIn, Symbol, Table, Wiring, WiringError

Word = tuple[tuple[Symbol, ...], ...]


def _inputs(m: MooreMachine) -> list[tuple[Symbol, ...]]:
    alphabets = [p.alphabet for p in m.box.in_ports]
    return [tuple(t) for t in itertools.product(*alphabets)]


def _same_interface(a: MooreMachine, b: MooreMachine):
    if a.box != b.box:
        raise MachineError(
            f"machines inhabit different boxes: {a.box.name!r} vs {b.box.name!r}")


def trace_equivalent(a: MooreMachine, b: MooreMachine, depth: int) -> bool:
    """Do the machines produce equal outputs on every word of length <= depth?

    Explores reachable state pairs breadth first; a pair is visited once,
    which is sound because future behavior depends only on the pair.
    """
    return find_distinguishing_word(a, b, depth) is None


def find_distinguishing_word(a: MooreMachine, b: MooreMachine,
                             depth: int) -> Optional[Word]:
    """Shortest word (then lexicographically least) the machines disagree on.

    Returns None when all words of length <= depth agree.  Search is
    breadth first over state pairs in input order, keeping the first word
    that reaches each pair; a disagreement on readout at a pair reached by
    prefix w is witnessed by w extended with the least input symbol.
    """
    _same_interface(a, b)
    if depth <= 0:
        return None
    inputs = _inputs(a)
    least = inputs[0]
    start = (a.init, b.init)
    frontier: deque[tuple[State, State]] = deque([start])
    prefix: dict[tuple[State, State], Word] = {start: ()}
    for d in range(depth):
        level = list(frontier)
        frontier.clear()
        for pair in level:
            sa, sb = pair
            if a.readout[sa] != b.readout[sb]:
                return prefix[pair] + (least,)
            if d == depth - 1:
                continue
            for x in inputs:
                nxt = (a.update[(sa, x)], b.update[(sb, x)])
                if nxt not in prefix:
                    prefix[nxt] = prefix[pair] + (x,)
                    frontier.append(nxt)
    return None


def bisimilar(a: MooreMachine, b: MooreMachine) -> bool:
    """Trace equivalence at every depth, by partition refinement.

    States of both machines are pooled, split by readout, then repeatedly
    split by the blocks their successors land in until stable; the
    machines are bisimilar when the initial states share a block.
    """
    _same_interface(a, b)
    inputs = _inputs(a)
    pool = [(0, s) for s in a.states] + [(1, s) for s in b.states]

    def readout(tag_s):
        tag, s = tag_s
        return (a if tag == 0 else b).readout[s]

    def successor(tag_s, x):
        tag, s = tag_s
        return (tag, (a if tag == 0 else b).update[(s, x)])

    block: dict[tuple[int, State], int] = {}
    sig0 = {}
    for q in pool:
        sig0.setdefault(readout(q), len(sig0))
        block[q] = sig0[readout(q)]
    while True:
        sigs: dict[tuple, int] = {}
        nxt: dict[tuple[int, State], int] = {}
        for q in pool:
            sig = (block[q],) + tuple(block[successor(q, x)] for x in inputs)
            sigs.setdefault(sig, len(sigs))
            nxt[q] = sigs[sig]
        if nxt == block:
            break
        block = nxt
    return block[(0, a.init)] == block[(1, b.init)]


# ---------------------------------------------------------------------------
# stagewise simulation: private evaluator, no calls into the algebra
# ---------------------------------------------------------------------------

def _eval(expr, inner_vals, outer_vals):
    # inner_vals / outer_vals: dict (box, port) -> symbol
    if isinstance(expr, Const):
        return expr.symbol
    if isinstance(expr, InnerOut):
        return inner_vals[(expr.box, expr.port)]
    if isinstance(expr, OuterIn):
        return outer_vals[(expr.box, expr.port)]
    if isinstance(expr, Table):
        key = tuple(_eval(s, inner_vals, outer_vals) for s in expr.sources)
        return dict(expr.entries)[key]
    raise WiringError(f"not a source expression: {expr!r}")


def stagewise_simulate(w: Wiring, machines: Sequence[MooreMachine],
                       word: Sequence[Sequence[Symbol]]) -> list[tuple[Symbol, ...]]:
    """Run the wired network step by step without building the composite.

    At each step: read every component, route readouts and the outer
    input through the wiring expressions, then step every component on
    its routed input.  Outputs are read before the step, like run.
    """
    if len(w.outer) != 1:
        raise MachineError("stagewise simulation needs a single outer box")
    if len(machines) != len(w.inner):
        raise MachineError(
            f"wiring has {len(w.inner)} inner boxes but {len(machines)} "
            f"machines were given")
    for i, (b, m) in enumerate(zip(w.inner, machines)):
        if m.box != b:
            raise MachineError(
                f"machine {i} inhabits box {m.box.name!r}, wiring slot {i} "
                f"is {b.name!r}")
    outer = w.outer[0]
    states = [m.init for m in machines]
    outs: list[tuple[Symbol, ...]] = []
    for x in word:
        x = tuple(x)
        if len(x) != len(outer.in_ports):
            raise MachineError(
                f"input {x} has {len(x)} symbols for {len(outer.in_ports)} ports")
        inner_vals = {}
        for i, (m, s) in enumerate(zip(machines, states)):
            r = m.readout[s]
            for p, v in zip(m.box.out_ports, r):
                inner_vals[(i, p.name)] = v
        outer_vals = {(0, p.name): v for p, v in zip(outer.in_ports, x)}
        out = tuple(_eval(w.out_map[(0, p.name)], inner_vals, {})
                    for p in outer.out_ports)
        outs.append(out)
        new_states = []
        for i, m in enumerate(machines):
            fed = tuple(_eval(w.in_map[(i, p.name)], inner_vals, outer_vals)
                        for p in m.box.in_ports)
            new_states.append(m.update[(states[i], fed)])
        states = new_states
    return outs
