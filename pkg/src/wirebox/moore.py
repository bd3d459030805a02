"""Moore machines inhabiting boxes, and how wirings act on them.

A machine fills a box: its inputs are joint values on the box's input
ports, its outputs joint values on the output ports, and its output
depends on the current state only.  Outputs are read before the step:
running a machine on a word of length n yields the readouts of the states
reached after 0..n-1 inputs.

``apply_algebra`` is the heart: given a wiring from inner boxes to one
outer box and a machine per inner box, it builds the composite machine on
the outer box.  States are tuples of component states; at each step the
wiring routes current component readouts and outer inputs to component
inputs, and every component steps at once.  ``lift_hom`` applies the same
wiring to machine morphisms, componentwise on state maps.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

from .wiring import (Box, InnerOut, OuterIn, Symbol, Wiring, WiringError,
                     evaluate, input_space)

State = Union[str, tuple]


class MachineError(Exception):
    """Malformed machine, morphism, or step on undefined data."""


@dataclass(frozen=True, eq=False)
class MooreMachine:
    """A finite state machine with state-determined output.

    ``update`` maps (state, input tuple) to the next state; ``readout``
    maps a state to its output tuple.  Tables are plain dicts and are not
    validated on construction; ``validate_machine`` reports problems, and
    stepping on missing data raises MachineError.
    """

    box: Box
    states: tuple[State, ...]
    init: State
    update: Mapping[tuple[State, tuple[Symbol, ...]], State]
    readout: Mapping[State, tuple[Symbol, ...]]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "update", dict(self.update))
        object.__setattr__(self, "readout", dict(self.readout))

    def __eq__(self, other):
        if not isinstance(other, MooreMachine):
            return NotImplemented
        return (self.box == other.box and self.states == other.states
                and self.init == other.init and self.update == other.update
                and self.readout == other.readout)

    def inputs(self) -> list[tuple[Symbol, ...]]:
        return input_space([self.box])


def render_state(s: State) -> str:
    """Canonical display form; composite states come out as (a,b,...)."""
    if isinstance(s, tuple):
        return "(" + ",".join(render_state(x) for x in s) + ")"
    return s


@dataclass(frozen=True)
class MachineReport:
    errors: tuple[str, ...]
    warnings: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.errors


def validate_machine(m: MooreMachine) -> MachineReport:
    """Check totality, alphabet membership, and reachability.

    Totality or domain violations are errors; states declared but not
    reachable from the initial state are warnings.
    """
    errors: list[str] = []
    warnings: list[str] = []
    states = set(m.states)
    if len(states) != len(m.states):
        errors.append("machine repeats a state")
    if m.init not in states:
        errors.append(f"initial state {render_state(m.init)} is not a state")
    inputs = m.inputs()
    out_alphabets = [p.alphabet for p in m.box.out_ports]
    for s in m.states:
        r = m.readout.get(s)
        if r is None:
            errors.append(f"readout missing for state {render_state(s)}")
        else:
            if len(r) != len(out_alphabets):
                errors.append(
                    f"readout of {render_state(s)} has {len(r)} values for "
                    f"{len(out_alphabets)} output ports")
            else:
                for v, alph, p in zip(r, out_alphabets, m.box.out_ports):
                    if v not in alph:
                        errors.append(
                            f"readout of {render_state(s)} puts {v!r} on port "
                            f"{p.name} outside its alphabet")
        for x in inputs:
            t = m.update.get((s, x))
            if t is None:
                errors.append(
                    f"update missing for state {render_state(s)} on input {x}")
            elif t not in states:
                errors.append(
                    f"update of {render_state(s)} on {x} leaves the state set")
    for (s, x) in m.update:
        if s not in states:
            errors.append(f"update table keys unknown state {render_state(s)}")
        elif x not in set(inputs):
            errors.append(
                f"update table keys state {render_state(s)} with a tuple {x} "
                f"outside the input space")
    for s in m.readout:
        if s not in states:
            errors.append(f"readout table keys unknown state {render_state(s)}")
    if not errors:
        seen = {m.init}
        frontier = [m.init]
        while frontier:
            s = frontier.pop()
            for x in inputs:
                t = m.update[(s, x)]
                if t not in seen:
                    seen.add(t)
                    frontier.append(t)
        for s in m.states:
            if s not in seen:
                warnings.append(f"state {render_state(s)} is unreachable")
    return MachineReport(tuple(errors), tuple(warnings))


def step(m: MooreMachine, s: State, x: Sequence[Symbol]) -> tuple[State, tuple[Symbol, ...]]:
    """One transition: returns (next state, output read before stepping)."""
    x = tuple(x)
    if s not in m.readout:
        raise MachineError(f"no readout for state {render_state(s)}")
    if (s, x) not in m.update:
        raise MachineError(f"no update for state {render_state(s)} on input {x}")
    return m.update[(s, x)], m.readout[s]


def run(m: MooreMachine, word: Sequence[Sequence[Symbol]]) -> list[tuple[Symbol, ...]]:
    """Outputs along a word: readout of the state before each input."""
    s = m.init
    outs: list[tuple[Symbol, ...]] = []
    for x in word:
        s, out = step(m, s, x)
        outs.append(out)
    return outs


# ---------------------------------------------------------------------------
# the algebra: wirings act on machine lists
# ---------------------------------------------------------------------------

def _machines_fit(w: Wiring, machines: Sequence[MooreMachine]):
    if len(w.outer) != 1:
        raise MachineError(
            f"composite machines inhabit a single box; wiring has "
            f"{len(w.outer)} outer boxes")
    if len(machines) != len(w.inner):
        raise MachineError(
            f"wiring has {len(w.inner)} inner boxes but {len(machines)} "
            f"machines were given")
    for i, (b, m) in enumerate(zip(w.inner, machines)):
        if m.box != b:
            raise MachineError(
                f"machine {i} inhabits box {m.box.name!r}, wiring slot {i} "
                f"is {b.name!r}")


def apply_algebra(w: Wiring, machines: Sequence[MooreMachine]) -> MooreMachine:
    """The composite machine a wiring induces on its outer box.

    Composite states are tuples of component states.  A step routes the
    current component readouts and the outer input through the wiring,
    then updates every component on its routed input; the composite
    readout routes component readouts through the out_map.
    """
    _machines_fit(w, machines)
    outer = w.outer[0]
    arities = [len(m.box.in_ports) for m in machines]
    states = [tuple(t) for t in itertools.product(*[m.states for m in machines])]
    init = tuple(m.init for m in machines)
    update: dict[tuple[State, tuple[Symbol, ...]], State] = {}
    readout: dict[State, tuple[Symbol, ...]] = {}
    outer_inputs = input_space([outer])
    for s in states:
        inner_outs = tuple(v for m, si in zip(machines, s) for v in m.readout[si])
        _, outer_out = evaluate(w, inner_outs, next(iter(outer_inputs)))
        readout[s] = outer_out
        for x in outer_inputs:
            inner_ins, _ = evaluate(w, inner_outs, x)
            nxt = []
            pos = 0
            for m, si, k in zip(machines, s, arities):
                nxt.append(m.update[(si, inner_ins[pos:pos + k])])
                pos += k
            update[(s, x)] = tuple(nxt)
    return MooreMachine(outer, tuple(states), init, update, readout)


# ---------------------------------------------------------------------------
# machine morphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MachineHom:
    """A state map between machines on the same box.

    Must send init to init, preserve readouts, and commute with update on
    every (state, input) square.
    """

    source: MooreMachine
    target: MooreMachine
    state_map: Mapping[State, State]

    def __post_init__(self):
        object.__setattr__(self, "state_map", dict(self.state_map))

    def __eq__(self, other):
        if not isinstance(other, MachineHom):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.state_map == other.state_map)


def hom_violations(h: MachineHom) -> list[str]:
    """Every way a would-be machine morphism fails, empty when valid."""
    out: list[str] = []
    if h.source.box != h.target.box:
        out.append(
            f"source inhabits {h.source.box.name!r}, target "
            f"{h.target.box.name!r}")
        return out
    tstates = set(h.target.states)
    for s in h.source.states:
        if s not in h.state_map:
            out.append(f"state map misses {render_state(s)}")
        elif h.state_map[s] not in tstates:
            out.append(
                f"state map sends {render_state(s)} outside the target states")
    if out:
        return out
    if h.state_map[h.source.init] != h.target.init:
        out.append("initial state is not preserved")
    for s in h.source.states:
        if h.source.readout[s] != h.target.readout[h.state_map[s]]:
            out.append(f"readout differs at {render_state(s)}")
    for s in h.source.states:
        for x in h.source.inputs():
            lhs = h.state_map[h.source.update[(s, x)]]
            rhs = h.target.update[(h.state_map[s], x)]
            if lhs != rhs:
                out.append(
                    f"update square fails at state {render_state(s)} on "
                    f"input {x}: map-then-step gives {render_state(rhs)}, "
                    f"step-then-map gives {render_state(lhs)}")
    return out


def validate_hom(h: MachineHom) -> None:
    """Raise MachineError on the first violation."""
    bad = hom_violations(h)
    if bad:
        raise MachineError(bad[0])


def identity_hom(m: MooreMachine) -> MachineHom:
    return MachineHom(m, m, {s: s for s in m.states})


def compose_homs(g: MachineHom, h: MachineHom) -> MachineHom:
    """The composite g after h; sources and targets must chain."""
    if h.target != g.source:
        raise MachineError("homs do not chain: h.target differs from g.source")
    return MachineHom(h.source, g.target,
                      {s: g.state_map[h.state_map[s]] for s in h.source.states})


def lift_hom(w: Wiring, homs: Sequence[MachineHom]) -> MachineHom:
    """The wiring applied to a list of machine morphisms.

    Source and target are the composites of the component sources and
    targets; the state map acts componentwise.  The result is validated,
    so a non-morphism input fails loudly here.
    """
    for i, h in enumerate(homs):
        bad = hom_violations(h)
        if bad:
            raise MachineError(f"component {i}: {bad[0]}")
    src = apply_algebra(w, [h.source for h in homs])
    tgt = apply_algebra(w, [h.target for h in homs])
    state_map = {s: tuple(h.state_map[si] for h, si in zip(homs, s))
                 for s in src.states}
    lifted = MachineHom(src, tgt, state_map)
    bad = hom_violations(lifted)
    if bad:
        raise MachineError(f"lifted map is not a machine morphism: {bad[0]}")
    return lifted


def canonical_text(m: MooreMachine) -> str:
    """Deterministic text rendering, for fingerprints."""
    lines = [f"box {m.box.name}", f"init {render_state(m.init)}"]
    for s in m.states:
        lines.append(f"state {render_state(s)} -> {'|'.join(m.readout.get(s, ()))}")
    for (s, x) in sorted(m.update, key=lambda k: (render_state(k[0]), k[1])):
        lines.append(
            f"step {render_state(s)} {'|'.join(x)} -> "
            f"{render_state(m.update[(s, x)])}")
    return "\n".join(lines)
