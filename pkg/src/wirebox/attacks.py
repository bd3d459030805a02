"""Attacks on wired systems: component rewrites and connection rewires.

A CompositeSystem is a wiring into one box together with a machine per
inner slot.  Two attack moves exist:

* RewriteStep replaces the machine in one slot.  In plain form it just
  swaps tables; in morphism form it carries a machine morphism from the
  current component, and applying it also returns that morphism lifted to
  the composites, certifying how the attack transforms whole-system state.
* RewireStep precomposes the system's wiring with an endomorphism wiring
  of one slot's box, rerouting that component's connections while leaving
  every machine untouched.

Scripts are ordered lists of steps, applied left to right with a
provenance log of fingerprints, so an attacked artifact records how it
was produced.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Optional, Sequence

from . import moore, oracle, probes, wiring as wi
from .moore import MachineHom, MooreMachine, apply_algebra, hom_violations
from .wiring import Wiring


class AttackError(Exception):
    """A step that does not apply to the system it was aimed at."""

    def __init__(self, message: str, log: tuple = ()):
        super().__init__(message)
        self.log = log


@dataclass(frozen=True, eq=False)
class CompositeSystem:
    """A wiring into a single box plus one machine per inner slot."""

    wiring: Wiring
    components: tuple[MooreMachine, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if len(self.wiring.outer) != 1:
            raise AttackError("a system composes into a single box")
        if len(self.components) != len(self.wiring.inner):
            raise AttackError(
                f"wiring has {len(self.wiring.inner)} slots but "
                f"{len(self.components)} components were given")
        for i, (b, m) in enumerate(zip(self.wiring.inner, self.components)):
            if m.box != b:
                raise AttackError(
                    f"component {i} inhabits box {m.box.name!r}, slot {i} "
                    f"is {b.name!r}")

    def __eq__(self, other):
        if not isinstance(other, CompositeSystem):
            return NotImplemented
        return self.wiring == other.wiring and self.components == other.components

    @property
    def box(self):
        return self.wiring.outer[0]

    def composite(self) -> MooreMachine:
        """The machine the whole system presents on its outer box."""
        return apply_algebra(self.wiring, self.components)


# ---------------------------------------------------------------------------
# steps
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RewriteStep:
    """Replace the component at ``index``.

    Exactly one of ``machine`` (plain replacement) or ``hom`` (a machine
    morphism out of the current component; the replacement is its target)
    is given.
    """

    index: int
    machine: Optional[MooreMachine] = None
    hom: Optional[MachineHom] = None

    def __post_init__(self):
        if (self.machine is None) == (self.hom is None):
            raise AttackError(
                "a rewrite carries either a replacement machine or a "
                "machine morphism, not both")


@dataclass(frozen=True, eq=False)
class RewireStep:
    """Precompose the wiring with an endomorphism of one slot's box."""

    index: int
    endo: Wiring

    def __post_init__(self):
        if len(self.endo.inner) != 1 or len(self.endo.outer) != 1:
            raise AttackError("a rewire endomorphism wires one box to itself")
        if self.endo.inner != self.endo.outer:
            raise AttackError(
                "a rewire endomorphism must have equal inner and outer boxes")


@dataclass(frozen=True)
class AttackScript:
    """An ordered list of rewrite and rewire steps."""

    steps: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        for s in self.steps:
            if not isinstance(s, (RewriteStep, RewireStep)):
                raise AttackError(f"not an attack step: {s!r}")


@dataclass(frozen=True, eq=False)
class RewriteResult:
    """The attacked system, plus the lifted morphism in morphism mode."""

    system: CompositeSystem
    witness: Optional[MachineHom] = None


# ---------------------------------------------------------------------------
# application
# ---------------------------------------------------------------------------

def _check_index(sys: CompositeSystem, index: int):
    if not 0 <= index < len(sys.components):
        raise AttackError(
            f"no component {index}; system has {len(sys.components)}")


def apply_rewrite(sys: CompositeSystem, step: RewriteStep) -> RewriteResult:
    """Swap one component machine, preserving the slot's box.

    In morphism mode the morphism's source must be the current component;
    the returned witness is the morphism lifted along the wiring to a
    morphism between the old and new composites.
    """
    _check_index(sys, step.index)
    current = sys.components[step.index]
    if step.machine is not None:
        replacement = step.machine
        witness = None
    else:
        hom = step.hom
        if hom.source != current:
            raise AttackError(
                f"morphism source is not the current component {step.index}")
        bad = hom_violations(hom)
        if bad:
            raise AttackError(f"not a machine morphism: {bad[0]}")
        replacement = hom.target
        homs = [moore.identity_hom(m) for m in sys.components]
        homs[step.index] = hom
        witness = moore.lift_hom(sys.wiring, homs)
    if replacement.box != sys.wiring.inner[step.index]:
        raise AttackError(
            f"replacement inhabits box {replacement.box.name!r}, slot "
            f"{step.index} is {sys.wiring.inner[step.index].name!r}")
    report = moore.validate_machine(replacement)
    if not report.ok:
        raise AttackError(f"replacement machine is invalid: {report.errors[0]}")
    components = list(sys.components)
    components[step.index] = replacement
    return RewriteResult(CompositeSystem(sys.wiring, tuple(components)), witness)


def apply_rewire(sys: CompositeSystem, step: RewireStep) -> CompositeSystem:
    """Reroute one slot by precomposing with an endomorphism wiring.

    The new wiring is the old one composed with the identity on every
    slot except ``index``, where the endomorphism sits.  Components are
    the same objects, untouched.
    """
    _check_index(sys, step.index)
    slot_box = sys.wiring.inner[step.index]
    if step.endo.inner[0] != slot_box:
        raise AttackError(
            f"endomorphism is on box {step.endo.inner[0].name!r}, slot "
            f"{step.index} is {slot_box.name!r}")
    pads = [wi.identity_wiring(b) for b in sys.wiring.inner]
    pads[step.index] = step.endo
    rewired = wi.compose(sys.wiring, wi.tensor(pads))
    return CompositeSystem(rewired, sys.components)


@dataclass(frozen=True)
class LogEntry:
    """One applied step: what it was and what the system became."""

    position: int
    kind: str
    detail: str
    wiring_fp: str
    components_fp: str


@dataclass(frozen=True, eq=False)
class ScriptResult:
    system: CompositeSystem
    log: tuple[LogEntry, ...]
    witnesses: tuple[Optional[MachineHom], ...]


def fingerprint_wiring(w: Wiring) -> str:
    return hashlib.sha256(wi.canonical_text(w).encode()).hexdigest()[:12]


def fingerprint_components(machines: Sequence[MooreMachine]) -> str:
    text = "\n--\n".join(moore.canonical_text(m) for m in machines)
    return hashlib.sha256(text.encode()).hexdigest()[:12]


def apply_script(sys: CompositeSystem, script: AttackScript) -> ScriptResult:
    """Fold a script over a system, logging every step.

    The first step that does not apply aborts with an AttackError whose
    ``log`` attribute holds the entries for the steps already applied.
    """
    log: list[LogEntry] = []
    witnesses: list[Optional[MachineHom]] = []
    current = sys
    for pos, step in enumerate(script.steps):
        try:
            if isinstance(step, RewriteStep):
                result = apply_rewrite(current, step)
                current = result.system
                witnesses.append(result.witness)
                mode = "replace" if step.machine is not None else "morphism"
                detail = f"rewrite[{mode}] component {step.index}"
            else:
                current = apply_rewire(current, step)
                witnesses.append(None)
                detail = f"rewire component {step.index}"
        except AttackError as e:
            raise AttackError(f"step {pos}: {e}", tuple(log)) from None
        log.append(LogEntry(pos, type(step).__name__, detail,
                            fingerprint_wiring(current.wiring),
                            fingerprint_components(current.components)))
    return ScriptResult(current, tuple(log), tuple(witnesses))


def transport_script(script: AttackScript,
                     correspondence: "dict[int, Sequence[int]] | dict") -> AttackScript:
    """Carry a script across a component correspondence.

    ``correspondence`` maps source slot indices to lists of target slot
    indices; a step at slot i becomes one identical step per mapped slot,
    in order.  Slots merge-mapped to several targets get the same payload
    at each, which is how an attack described on a coarse view lands on a
    finer real system.
    """
    steps = []
    for step in script.steps:
        index = step.index
        if index not in correspondence:
            raise AttackError(f"correspondence does not cover slot {index}")
        for target in correspondence[index]:
            if isinstance(step, RewriteStep):
                steps.append(RewriteStep(target, step.machine, step.hom))
            else:
                steps.append(RewireStep(target, step.endo))
    return AttackScript(tuple(steps))


# ---------------------------------------------------------------------------
# reporting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiffReport:
    """How two systems differ behaviorally, if at all."""

    equivalent: bool
    witness: Optional[tuple]
    depth: int
    tests: tuple[tuple[str, bool], ...] = ()


def attack_diff(baseline: CompositeSystem, attacked: CompositeSystem,
                depth: int, battery: Sequence[probes.Test] = ()) -> DiffReport:
    """Compare composite behavior before and after an attack.

    Reports trace equivalence to the given depth with a shortest
    distinguishing word when there is one, plus per-test agreement for
    any battery supplied.
    """
    if baseline.box != attacked.box:
        raise AttackError("systems present different boxes")
    before = baseline.composite()
    after = attacked.composite()
    word = oracle.find_distinguishing_word(before, after, depth)
    results = []
    for t in battery:
        agree = probes.compare_outcomes(
            t, probes.run_test(t, before), probes.run_test(t, after))
        results.append((t.name, agree))
    return DiffReport(word is None, word, depth, tuple(results))
