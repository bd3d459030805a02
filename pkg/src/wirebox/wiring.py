"""Boxes and wiring diagrams.

A box is an interface: named input ports and named output ports, each
carrying a finite alphabet.  A wiring connects a list of inner boxes to a
list of outer boxes by saying, for every inner input port, where its value
comes from, and for every outer output port, where its value comes from.
Sources are expressions over outer input ports, inner output ports,
constants, and finite lookup tables of those.

Wirings compose like processes with feedback: ``compose(g, f)`` plugs the
inner assembly ``f`` into the hole ``g`` expects, and ``tensor`` places
wirings side by side.  Both are implemented by substitution on source
expressions, followed by normalization to a canonical form so that
structural equality is meaningful.  ``evaluate`` gives the one-step
semantics used everywhere else.

Directionality is enforced by the expression variants themselves: an inner
input may read outer inputs and inner outputs; an outer output may read
only inner outputs.  Nothing can read an outer output, so composites are
always well founded.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence, Union

Symbol = str


class WiringError(Exception):
    """Malformed box, expression, or wiring."""


class CompositionError(WiringError):
    """Boundary mismatch between wirings."""


# ---------------------------------------------------------------------------
# interfaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Port:
    """A named port with a finite, ordered alphabet of symbols."""

    name: str
    alphabet: tuple[Symbol, ...]

    def __post_init__(self):
        if not self.name:
            raise WiringError("port name must be nonempty")
        if not self.alphabet:
            raise WiringError(f"port {self.name!r} has an empty alphabet")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise WiringError(f"port {self.name!r} repeats alphabet symbols")


@dataclass(frozen=True)
class Box:
    """An interface: input ports and output ports."""

    name: str
    in_ports: tuple[Port, ...]
    out_ports: tuple[Port, ...]

    def __post_init__(self):
        for side, ports in (("input", self.in_ports), ("output", self.out_ports)):
            names = [p.name for p in ports]
            if len(set(names)) != len(names):
                raise WiringError(f"box {self.name!r} repeats {side} port names")

    def in_port(self, name: str) -> Port:
        for p in self.in_ports:
            if p.name == name:
                return p
        raise WiringError(f"box {self.name!r} has no input port {name!r}")

    def out_port(self, name: str) -> Port:
        for p in self.out_ports:
            if p.name == name:
                return p
        raise WiringError(f"box {self.name!r} has no output port {name!r}")

    def in_index(self, name: str) -> int:
        for i, p in enumerate(self.in_ports):
            if p.name == name:
                return i
        raise WiringError(f"box {self.name!r} has no input port {name!r}")

    def out_index(self, name: str) -> int:
        for i, p in enumerate(self.out_ports):
            if p.name == name:
                return i
        raise WiringError(f"box {self.name!r} has no output port {name!r}")


def input_space(boxes: Sequence[Box]) -> list[tuple[Symbol, ...]]:
    """All joint input tuples for a list of boxes, in declared alphabet order.

    The tuple is flat: one entry per input port, boxes in list order, ports
    in declaration order.
    """
    alphabets = [p.alphabet for b in boxes for p in b.in_ports]
    return [tuple(t) for t in itertools.product(*alphabets)]


def output_space(boxes: Sequence[Box]) -> list[tuple[Symbol, ...]]:
    """All joint output tuples for a list of boxes, flat as in input_space."""
    alphabets = [p.alphabet for b in boxes for p in b.out_ports]
    return [tuple(t) for t in itertools.product(*alphabets)]


# ---------------------------------------------------------------------------
# source expressions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OuterIn:
    """The value on an outer box's input port."""

    box: int
    port: str


@dataclass(frozen=True)
class InnerOut:
    """The value on an inner box's output port."""

    box: int
    port: str


@dataclass(frozen=True)
class Const:
    """A fixed symbol, independent of every port."""

    symbol: Symbol


@dataclass(frozen=True)
class Table:
    """A total lookup over the values of its source expressions.

    ``entries`` maps one key per joint source value to a symbol; keys are
    kept sorted so that equal tables are structurally equal.
    """

    sources: tuple["SourceExpr", ...]
    entries: tuple[tuple[tuple[Symbol, ...], Symbol], ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(sorted(self.entries)))
        keys = [k for k, _ in self.entries]
        if len(set(keys)) != len(keys):
            raise WiringError("table repeats a key")

    def function(self) -> dict[tuple[Symbol, ...], Symbol]:
        return dict(self.entries)


SourceExpr = Union[OuterIn, InnerOut, Const, Table]
Ref = Union[OuterIn, InnerOut]
PortKey = tuple[int, str]


def expr_refs(expr: SourceExpr) -> list[Ref]:
    """Port references occurring in an expression, in first-occurrence order."""
    out: list[Ref] = []

    def walk(e: SourceExpr):
        if isinstance(e, (OuterIn, InnerOut)):
            if e not in out:
                out.append(e)
        elif isinstance(e, Table):
            for s in e.sources:
                walk(s)

    walk(expr)
    return out


def eval_expr(expr: SourceExpr, env: Mapping[Ref, Symbol]) -> Symbol:
    """Evaluate an expression under an assignment of port references."""
    if isinstance(expr, Const):
        return expr.symbol
    if isinstance(expr, (OuterIn, InnerOut)):
        try:
            return env[expr]
        except KeyError:
            raise WiringError(f"unbound reference {expr}") from None
    if isinstance(expr, Table):
        key = tuple(eval_expr(s, env) for s in expr.sources)
        try:
            return expr.function()[key]
        except KeyError:
            raise WiringError(f"table has no entry for key {key}") from None
    raise WiringError(f"not a source expression: {expr!r}")


# ---------------------------------------------------------------------------
# wirings
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Wiring:
    """A morphism from a tensor of inner boxes to a tensor of outer boxes.

    ``in_map`` has exactly one entry per inner input port, keyed by
    (inner box index, port name); sources may reference outer inputs and
    inner outputs.  ``out_map`` has one entry per outer output port, keyed
    by (outer box index, port name); sources may reference inner outputs
    only.  Construction validates totality and alphabet compatibility, so
    an invalid wiring is never observable.
    """

    inner: tuple[Box, ...]
    outer: tuple[Box, ...]
    in_map: Mapping[PortKey, SourceExpr]
    out_map: Mapping[PortKey, SourceExpr]

    def __post_init__(self):
        object.__setattr__(self, "inner", tuple(self.inner))
        object.__setattr__(self, "outer", tuple(self.outer))
        object.__setattr__(self, "in_map", dict(self.in_map))
        object.__setattr__(self, "out_map", dict(self.out_map))
        self._validate()

    # Equality is structural on normalized expressions; see wiring_equal.
    def __eq__(self, other):
        if not isinstance(other, Wiring):
            return NotImplemented
        return (self.inner == other.inner and self.outer == other.outer
                and self.in_map == other.in_map and self.out_map == other.out_map)

    def _validate(self):
        want_in = {(i, p.name) for i, b in enumerate(self.inner) for p in b.in_ports}
        have_in = set(self.in_map)
        if want_in != have_in:
            missing = sorted(want_in - have_in)
            extra = sorted(have_in - want_in)
            raise WiringError(
                f"in_map must cover inner input ports exactly; "
                f"missing {missing}, extra {extra}")
        want_out = {(j, p.name) for j, b in enumerate(self.outer) for p in b.out_ports}
        have_out = set(self.out_map)
        if want_out != have_out:
            missing = sorted(want_out - have_out)
            extra = sorted(have_out - want_out)
            raise WiringError(
                f"out_map must cover outer output ports exactly; "
                f"missing {missing}, extra {extra}")
        for (i, name), expr in self.in_map.items():
            target = self.inner[i].in_port(name)
            self._check_expr(expr, target, f"inner input {i}.{name}",
                             allow_outer=True)
        for (j, name), expr in self.out_map.items():
            target = self.outer[j].out_port(name)
            self._check_expr(expr, target, f"outer output {j}.{name}",
                             allow_outer=False)

    def _ref_port(self, ref: Ref, where: str, allow_outer: bool) -> Port:
        if isinstance(ref, OuterIn):
            if not allow_outer:
                raise WiringError(
                    f"{where}: outer inputs may not feed outer outputs")
            if not 0 <= ref.box < len(self.outer):
                raise WiringError(f"{where}: no outer box {ref.box}")
            return self.outer[ref.box].in_port(ref.port)
        if not 0 <= ref.box < len(self.inner):
            raise WiringError(f"{where}: no inner box {ref.box}")
        return self.inner[ref.box].out_port(ref.port)

    def _check_expr(self, expr: SourceExpr, target: Port, where: str,
                    allow_outer: bool):
        if isinstance(expr, Const):
            if expr.symbol not in target.alphabet:
                raise WiringError(
                    f"{where}: constant {expr.symbol!r} is not in the "
                    f"target alphabet {list(target.alphabet)}")
            return
        if isinstance(expr, (OuterIn, InnerOut)):
            src = self._ref_port(expr, where, allow_outer)
            bad = [s for s in src.alphabet if s not in target.alphabet]
            if bad:
                raise WiringError(
                    f"{where}: source alphabet {list(src.alphabet)} is not "
                    f"contained in target alphabet {list(target.alphabet)}")
            return
        if isinstance(expr, Table):
            self._check_table(expr, where, allow_outer)
            for key, value in expr.entries:
                if value not in target.alphabet:
                    raise WiringError(
                        f"{where}: table value {value!r} at key {key} is not "
                        f"in the target alphabet {list(target.alphabet)}")
            return
        raise WiringError(f"{where}: not a source expression: {expr!r}")

    def _check_table(self, table: Table, where: str, allow_outer: bool):
        domains = []
        for s in table.sources:
            if isinstance(s, Table):
                self._check_table(s, where, allow_outer)
            elif isinstance(s, (OuterIn, InnerOut)):
                self._ref_port(s, where, allow_outer)
            elif not isinstance(s, Const):
                raise WiringError(f"{where}: not a source expression: {s!r}")
            domains.append(self._expr_values(s, allow_outer))
        fn = table.function()
        for key in itertools.product(*domains):
            if key not in fn:
                raise WiringError(f"{where}: table misses key {key}")

    def _expr_values(self, expr: SourceExpr, allow_outer: bool) -> tuple[Symbol, ...]:
        if isinstance(expr, Const):
            return (expr.symbol,)
        if isinstance(expr, (OuterIn, InnerOut)):
            return self._ref_port(expr, "table source", allow_outer).alphabet
        if isinstance(expr, Table):
            return tuple(dict.fromkeys(v for _, v in expr.entries))
        raise WiringError(f"not a source expression: {expr!r}")

    # -- port enumeration, document order ----------------------------------

    def inner_input_ports(self) -> list[tuple[int, Port]]:
        return [(i, p) for i, b in enumerate(self.inner) for p in b.in_ports]

    def inner_output_ports(self) -> list[tuple[int, Port]]:
        return [(i, p) for i, b in enumerate(self.inner) for p in b.out_ports]

    def outer_input_ports(self) -> list[tuple[int, Port]]:
        return [(j, p) for j, b in enumerate(self.outer) for p in b.in_ports]

    def outer_output_ports(self) -> list[tuple[int, Port]]:
        return [(j, p) for j, b in enumerate(self.outer) for p in b.out_ports]

    def ref_alphabet(self, ref: Ref) -> tuple[Symbol, ...]:
        if isinstance(ref, OuterIn):
            return self.outer[ref.box].in_port(ref.port).alphabet
        return self.inner[ref.box].out_port(ref.port).alphabet


def identity_wiring(box: Box) -> Wiring:
    """The identity: one inner copy of the box, wires straight through."""
    in_map = {(0, p.name): OuterIn(0, p.name) for p in box.in_ports}
    out_map = {(0, p.name): InnerOut(0, p.name) for p in box.out_ports}
    return Wiring((box,), (box,), in_map, out_map)


def identity_of(boxes: Sequence[Box]) -> Wiring:
    """Identity on a tensor of boxes."""
    return tensor([identity_wiring(b) for b in boxes])


def tensor(wirings: Sequence[Wiring]) -> Wiring:
    """Place wirings side by side, concatenating inner and outer boxes."""
    if not wirings:
        raise WiringError("tensor of no wirings")
    inner: list[Box] = []
    outer: list[Box] = []
    in_map: dict[PortKey, SourceExpr] = {}
    out_map: dict[PortKey, SourceExpr] = {}
    for w in wirings:
        di, do = len(inner), len(outer)
        inner.extend(w.inner)
        outer.extend(w.outer)
        for (i, name), expr in w.in_map.items():
            in_map[(i + di, name)] = _shift(expr, di, do)
        for (j, name), expr in w.out_map.items():
            out_map[(j + do, name)] = _shift(expr, di, do)
    return Wiring(tuple(inner), tuple(outer), in_map, out_map)


def _shift(expr: SourceExpr, di: int, do: int) -> SourceExpr:
    if isinstance(expr, InnerOut):
        return InnerOut(expr.box + di, expr.port)
    if isinstance(expr, OuterIn):
        return OuterIn(expr.box + do, expr.port)
    if isinstance(expr, Table):
        return Table(tuple(_shift(s, di, do) for s in expr.sources), expr.entries)
    return expr


def compose(g: Wiring, f: Wiring) -> Wiring:
    """Plug ``f`` into ``g``: first ``f``, then ``g``.

    Requires f's outer boundary to equal g's inner boundary box for box.
    Implemented by substitution: where g reads its outer inputs it now
    reads through f's out_map, and where f reads its outer inputs it now
    reads through g's in_map.  The result is normalized.
    """
    if len(f.outer) != len(g.inner):
        raise CompositionError(
            f"boundary mismatch: {len(f.outer)} outer boxes vs "
            f"{len(g.inner)} inner boxes")
    for k, (a, b) in enumerate(zip(f.outer, g.inner)):
        if a != b:
            detail = _box_mismatch(a, b)
            raise CompositionError(f"boundary box {k}: {detail}")

    def via_f(expr: SourceExpr) -> SourceExpr:
        # g-side expression: inner outputs of g are outer outputs of f
        if isinstance(expr, InnerOut):
            return f.out_map[(expr.box, expr.port)]
        if isinstance(expr, Table):
            return Table(tuple(via_f(s) for s in expr.sources), expr.entries)
        return expr

    def via_g(expr: SourceExpr) -> SourceExpr:
        # f-side expression: outer inputs of f are inner inputs of g
        if isinstance(expr, OuterIn):
            return via_f(g.in_map[(expr.box, expr.port)])
        if isinstance(expr, Table):
            return Table(tuple(via_g(s) for s in expr.sources), expr.entries)
        return expr

    in_map = {key: via_g(expr) for key, expr in f.in_map.items()}
    out_map = {key: via_f(expr) for key, expr in g.out_map.items()}
    return normalize(Wiring(f.inner, g.outer, in_map, out_map))


def _box_mismatch(a: Box, b: Box) -> str:
    if a.name != b.name:
        return f"box {a.name!r} vs {b.name!r}"
    for side, pa, pb in (("input", a.in_ports, b.in_ports),
                         ("output", a.out_ports, b.out_ports)):
        if len(pa) != len(pb):
            return f"box {a.name!r} has {len(pa)} vs {len(pb)} {side} ports"
        for x, y in zip(pa, pb):
            if x.name != y.name:
                return f"{side} port {x.name!r} vs {y.name!r} on box {a.name!r}"
            if x.alphabet != y.alphabet:
                return (f"{side} port {x.name!r} on box {a.name!r}: alphabet "
                        f"{list(x.alphabet)} vs {list(y.alphabet)}")
    return f"box {a.name!r} differs"


# ---------------------------------------------------------------------------
# semantics
# ---------------------------------------------------------------------------

def evaluate(w: Wiring, inner_outs: Sequence[Symbol],
             outer_in: Sequence[Symbol]) -> tuple[tuple[Symbol, ...], tuple[Symbol, ...]]:
    """One synchronous step of value routing.

    ``inner_outs`` holds the current inner output values, flat in document
    order; ``outer_in`` the outer input values.  Returns the pair
    (inner input values, outer output values), same flat convention.
    """
    out_ports = w.inner_output_ports()
    in_ports_outer = w.outer_input_ports()
    if len(inner_outs) != len(out_ports):
        raise WiringError(
            f"expected {len(out_ports)} inner output values, got {len(inner_outs)}")
    if len(outer_in) != len(in_ports_outer):
        raise WiringError(
            f"expected {len(in_ports_outer)} outer input values, got {len(outer_in)}")
    env: dict[Ref, Symbol] = {}
    for (i, p), v in zip(out_ports, inner_outs):
        if v not in p.alphabet:
            raise WiringError(
                f"value {v!r} is not in the alphabet of inner output {i}.{p.name}")
        env[InnerOut(i, p.name)] = v
    for (j, p), v in zip(in_ports_outer, outer_in):
        if v not in p.alphabet:
            raise WiringError(
                f"value {v!r} is not in the alphabet of outer input {j}.{p.name}")
        env[OuterIn(j, p.name)] = v
    inner_ins = tuple(eval_expr(w.in_map[(i, p.name)], env)
                      for i, p in w.inner_input_ports())
    outer_out = tuple(eval_expr(w.out_map[(j, p.name)], env)
                      for j, p in w.outer_output_ports())
    return inner_ins, outer_out


def _eval_points(w: Wiring) -> Iterator[tuple[tuple[Symbol, ...], tuple[Symbol, ...]]]:
    for inner_outs in output_space(w.inner):
        for outer_in in input_space(w.outer):
            yield inner_outs, outer_in


def find_eval_counterexample(a: Wiring, b: Wiring):
    """First (inner_outs, outer_in) on which two wirings route differently.

    Returns None when the wirings agree everywhere (same boundaries and
    equal evaluation); raises on boundary shape mismatch.
    """
    if a.inner != b.inner or a.outer != b.outer:
        raise WiringError("wirings have different boundaries")
    for inner_outs, outer_in in _eval_points(a):
        if evaluate(a, inner_outs, outer_in) != evaluate(b, inner_outs, outer_in):
            return inner_outs, outer_in
    return None


def eval_equal(a: Wiring, b: Wiring) -> bool:
    """Exhaustive semantic equality of two wirings on the same boundary."""
    return find_eval_counterexample(a, b) is None


# ---------------------------------------------------------------------------
# normal form
# ---------------------------------------------------------------------------

def _ref_key(w: Wiring, ref: Ref) -> tuple[int, int, int]:
    if isinstance(ref, InnerOut):
        return (0, ref.box, w.inner[ref.box].out_index(ref.port))
    return (1, ref.box, w.outer[ref.box].in_index(ref.port))


def normalize_expr(w: Wiring, expr: SourceExpr) -> SourceExpr:
    """Canonical form: Const, a bare reference, or a flat minimal Table.

    The table's sources are the distinct references the value actually
    depends on, sorted inner outputs first, then by box and port position.
    """
    refs = sorted(expr_refs(expr), key=lambda r: _ref_key(w, r))
    if not refs:
        return Const(eval_expr(expr, {}))
    domains = [w.ref_alphabet(r) for r in refs]
    rows: list[tuple[tuple[Symbol, ...], Symbol]] = []
    for combo in itertools.product(*domains):
        env = dict(zip(refs, combo))
        rows.append((combo, eval_expr(expr, env)))
    keep: list[int] = []
    for i in range(len(refs)):
        groups: dict[tuple[Symbol, ...], set[Symbol]] = {}
        for key, value in rows:
            rest = key[:i] + key[i + 1:]
            groups.setdefault(rest, set()).add(value)
        if any(len(vs) > 1 for vs in groups.values()):
            keep.append(i)
    if not keep:
        return Const(rows[0][1])
    kept_refs = tuple(refs[i] for i in keep)
    entries: dict[tuple[Symbol, ...], Symbol] = {}
    for key, value in rows:
        entries[tuple(key[i] for i in keep)] = value
    if len(kept_refs) == 1 and all(k[0] == v for k, v in entries.items()):
        return kept_refs[0]
    return Table(kept_refs, tuple(entries.items()))


def normalize(w: Wiring) -> Wiring:
    """The same wiring with every source expression in canonical form."""
    in_map = {key: normalize_expr(w, expr) for key, expr in w.in_map.items()}
    out_map = {key: normalize_expr(w, expr) for key, expr in w.out_map.items()}
    return Wiring(w.inner, w.outer, in_map, out_map)


def wiring_equal(a: Wiring, b: Wiring) -> bool:
    """Structural equality of normal forms."""
    if a.inner != b.inner or a.outer != b.outer:
        return False
    return normalize(a) == normalize(b)


def canonical_text(w: Wiring) -> str:
    """A deterministic text rendering of the normal form, for fingerprints."""
    n = normalize(w)
    lines = []
    for side, boxes in (("inner", n.inner), ("outer", n.outer)):
        for b in boxes:
            ins = ",".join(f"{p.name}:{'|'.join(p.alphabet)}" for p in b.in_ports)
            outs = ",".join(f"{p.name}:{'|'.join(p.alphabet)}" for p in b.out_ports)
            lines.append(f"{side} {b.name} [{ins}] [{outs}]")
    for label, table in (("in", n.in_map), ("out", n.out_map)):
        for key in sorted(table):
            lines.append(f"{label} {key[0]}.{key[1]} <- {_expr_text(table[key])}")
    return "\n".join(lines)


def _expr_text(expr: SourceExpr) -> str:
    if isinstance(expr, Const):
        return f"const {expr.symbol}"
    if isinstance(expr, OuterIn):
        return f"outer {expr.box}.{expr.port}"
    if isinstance(expr, InnerOut):
        return f"inner {expr.box}.{expr.port}"
    srcs = "; ".join(_expr_text(s) for s in expr.sources)
    rows = ",".join(f"{'|'.join(k)}->{v}" for k, v in expr.entries)
    return f"table [{srcs}] {{{rows}}}"


# ---------------------------------------------------------------------------
# architectures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Architecture:
    """A box, optionally decomposed by a wiring into child architectures.

    A leaf is atomic.  A node's wiring must have the node's box as its
    single outer box and the children's boxes, in order, as inner boxes.
    """

    root: Box
    wiring: Wiring | None = None
    children: tuple["Architecture", ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if self.wiring is None:
            if self.children:
                raise WiringError("atomic architecture cannot have children")
            return
        if self.wiring.outer != (self.root,):
            raise WiringError(
                f"architecture wiring must target exactly the root box "
                f"{self.root.name!r}")
        if self.wiring.inner != tuple(c.root for c in self.children):
            raise WiringError(
                "architecture wiring inner boxes must match children in order")

    def leaves(self) -> list[Box]:
        if self.wiring is None:
            return [self.root]
        return [leaf for c in self.children for leaf in c.leaves()]


def flatten(arch: Architecture) -> Wiring:
    """Compose an architecture tree into one wiring from its leaves."""
    if arch.wiring is None:
        return identity_wiring(arch.root)
    return compose(arch.wiring, tensor([flatten(c) for c in arch.children]))


def check_arch_morphism(phi: Wiring, psi: Wiring, k: Wiring) -> bool:
    """Does ``k`` exhibit ``phi`` as ``psi`` precomposed with ``k``?

    ``phi`` and ``psi`` are architectures over the same root (equal outer
    boundary); ``k`` maps phi's inner tensor to psi's inner tensor.  True
    iff ``compose(psi, k)`` equals ``phi`` on every evaluation point.
    """
    if phi.outer != psi.outer:
        raise WiringError("architectures target different boxes")
    if k.inner != phi.inner or k.outer != psi.inner:
        raise WiringError("mediating wiring has the wrong boundary")
    return eval_equal(compose(psi, k), phi)
