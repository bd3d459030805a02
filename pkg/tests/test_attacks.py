"""Rewrite and rewire steps, script application, transport, and diffing."""

import pytest

from netgen import BIT
from wirebox.attacks import (AttackError, AttackScript, CompositeSystem,
                             DiffReport, LogEntry, RewireStep, RewriteStep,
                             apply_rewire, apply_rewrite, apply_script,
                             attack_diff, fingerprint_components,
                             fingerprint_wiring, transport_script)
from wirebox.moore import (MachineHom, MooreMachine, apply_algebra,
                           compose_homs, hom_violations, identity_hom, run)
from wirebox.oracle import find_distinguishing_word, trace_equivalent
from wirebox.probes import StateSet, Test, TraceSet
from wirebox.wiring import (Box, InnerOut, OuterIn, Port, Table, Wiring,
                            identity_wiring, normalize, tensor, wiring_equal)

CELL = Box("cell", (Port("a", BIT),), (Port("q", BIT),))


def delay(init: str = "0") -> MooreMachine:
    update = {(s, (a,)): a for s in BIT for a in BIT}
    return MooreMachine(CELL, BIT, init, update, {s: (s,) for s in BIT})


def history() -> MooreMachine:
    states = tuple(a + b for a in BIT for b in BIT)
    update = {(s, (a,)): s[1] + a for s in states for a in BIT}
    return MooreMachine(CELL, states, "00", update,
                        {s: (s[1],) for s in states})


def collapse() -> MachineHom:
    return MachineHom(history(), delay(), {s: s[1] for s in history().states})


def renamed_delay() -> MooreMachine:
    label = {"0": "lo", "1": "hi"}
    update = {(s, (a,)): label[a] for s in label.values() for a in BIT}
    return MooreMachine(CELL, ("lo", "hi"), "lo", update,
                        {"lo": ("0",), "hi": ("1",)})


def rename_hom() -> MachineHom:
    return MachineHom(delay(), renamed_delay(), {"0": "lo", "1": "hi"})


def chain() -> Wiring:
    outer = Box("two", CELL.in_ports, CELL.out_ports)
    return Wiring((CELL, CELL), (outer,),
                  {(0, "a"): OuterIn(0, "a"), (1, "a"): InnerOut(0, "q")},
                  {(0, "q"): InnerOut(1, "q")})


def not_endo() -> Wiring:
    flip = Table((OuterIn(0, "a"),), ((("0",), "1"), (("1",), "0")))
    return Wiring((CELL,), (CELL,), {(0, "a"): flip},
                  {(0, "q"): InnerOut(0, "q")})


def single() -> CompositeSystem:
    return CompositeSystem(identity_wiring(CELL), (delay(),))


def pair() -> CompositeSystem:
    return CompositeSystem(chain(), (delay(), delay()))


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def test_rewrite_carries_exactly_one_payload():
    with pytest.raises(AttackError):
        RewriteStep(0)
    with pytest.raises(AttackError):
        RewriteStep(0, machine=delay(), hom=identity_hom(delay()))


def test_rewire_endo_must_wire_one_box_to_itself():
    with pytest.raises(AttackError):
        RewireStep(0, tensor((identity_wiring(CELL), identity_wiring(CELL))))
    other = Box("other", CELL.in_ports, CELL.out_ports)
    relabel = Wiring((CELL,), (other,), {(0, "a"): OuterIn(0, "a")},
                     {(0, "q"): InnerOut(0, "q")})
    with pytest.raises(AttackError, match="equal inner and outer"):
        RewireStep(0, relabel)


def test_system_checks_component_count_and_boxes():
    with pytest.raises(AttackError, match="slots"):
        CompositeSystem(chain(), (delay(),))
    other = Box("other", CELL.in_ports, CELL.out_ports)
    wrong = MooreMachine(other, BIT, "0", delay().update, delay().readout)
    with pytest.raises(AttackError, match="inhabits"):
        CompositeSystem(identity_wiring(CELL), (wrong,))
    two_out = tensor((identity_wiring(CELL), identity_wiring(CELL)))
    with pytest.raises(AttackError, match="single box"):
        CompositeSystem(two_out, (delay(), delay()))


def test_composite_is_the_wiring_action():
    sys = pair()
    assert sys.composite() == apply_algebra(chain(), (delay(), delay()))
    assert sys.box.name == "two"


def test_script_rejects_foreign_steps():
    with pytest.raises(AttackError, match="not an attack step"):
        AttackScript((42,))


# ---------------------------------------------------------------------------
# rewrites
# ---------------------------------------------------------------------------

def test_replace_swaps_only_the_named_slot():
    sys = pair()
    result = apply_rewrite(sys, RewriteStep(1, machine=delay("1")))
    assert result.witness is None
    assert result.system.components[0] is sys.components[0]
    assert result.system.components[1] == delay("1")
    assert result.system.wiring is sys.wiring


def test_replace_checks_the_slot_box():
    other = Box("other", CELL.in_ports, CELL.out_ports)
    foreign = MooreMachine(other, BIT, "0", delay().update, delay().readout)
    with pytest.raises(AttackError, match="inhabits"):
        apply_rewrite(single(), RewriteStep(0, machine=foreign))


def test_replace_rejects_invalid_machines():
    broken_update = dict(delay().update)
    del broken_update[("0", ("1",))]
    broken = MooreMachine(CELL, BIT, "0", broken_update, delay().readout)
    with pytest.raises(AttackError, match="invalid"):
        apply_rewrite(single(), RewriteStep(0, machine=broken))


def test_rewrite_index_must_exist():
    with pytest.raises(AttackError, match="no component 5"):
        apply_rewrite(single(), RewriteStep(5, machine=delay()))


def test_hom_mode_requires_the_current_component_as_source():
    with pytest.raises(AttackError, match="source"):
        apply_rewrite(single(), RewriteStep(0, hom=collapse()))


def test_hom_mode_rejects_broken_morphisms():
    swap = MachineHom(delay(), delay(), {"0": "1", "1": "0"})
    assert hom_violations(swap)
    with pytest.raises(AttackError, match="not a machine morphism"):
        apply_rewrite(single(), RewriteStep(0, hom=swap))


def test_hom_mode_lifts_the_witness_to_the_composites():
    sys = CompositeSystem(chain(), (history(), delay()))
    result = apply_rewrite(sys, RewriteStep(0, hom=collapse()))
    witness = result.witness
    assert witness is not None
    assert hom_violations(witness) == []
    assert witness.source == sys.composite()
    assert witness.target == result.system.composite()
    # the slot collapsed from four states to two
    assert len(witness.source.states) == 8
    assert len(witness.target.states) == 4


def test_same_slot_homs_compose():
    sys = CompositeSystem(identity_wiring(CELL), (history(),))
    one_by_one = apply_script(sys, AttackScript(
        (RewriteStep(0, hom=collapse()), RewriteStep(0, hom=rename_hom()))))
    fused = compose_homs(rename_hom(), collapse())
    at_once = apply_script(sys, AttackScript((RewriteStep(0, hom=fused),)))
    assert one_by_one.system == at_once.system
    first, second = one_by_one.witnesses
    assert compose_homs(second, first).state_map == \
        at_once.witnesses[0].state_map


# ---------------------------------------------------------------------------
# rewires
# ---------------------------------------------------------------------------

def test_rewire_leaves_components_untouched():
    sys = pair()
    rewired = apply_rewire(sys, RewireStep(0, not_endo()))
    assert rewired.components[0] is sys.components[0]
    assert rewired.components[1] is sys.components[1]
    assert not wiring_equal(rewired.wiring, sys.wiring)


def test_rewire_negates_the_routed_input():
    rewired = apply_rewire(single(), RewireStep(0, not_endo()))
    outs = run(rewired.composite(), (("1",), ("1",), ("0",)))
    assert outs == [("0",), ("0",), ("0",)]  # delay of the negated word


def test_rewire_checks_the_slot_box():
    other = Box("other", CELL.in_ports, CELL.out_ports)
    endo = Wiring((other,), (other,), {(0, "a"): OuterIn(0, "a")},
                  {(0, "q"): InnerOut(0, "q")})
    with pytest.raises(AttackError, match="endomorphism is on box"):
        apply_rewire(single(), RewireStep(0, endo))


def test_double_negation_restores_the_wiring():
    sys = pair()
    once = apply_rewire(sys, RewireStep(0, not_endo()))
    twice = apply_rewire(once, RewireStep(0, not_endo()))
    assert normalize(twice.wiring) == normalize(sys.wiring)
    assert find_distinguishing_word(
        sys.composite(), twice.composite(), 6) is None


# ---------------------------------------------------------------------------
# scripts
# ---------------------------------------------------------------------------

def test_script_logs_every_step_with_fingerprints():
    sys = pair()
    script = AttackScript((RewriteStep(0, machine=delay("1")),
                           RewireStep(1, not_endo())))
    result = apply_script(sys, script)
    assert result.witnesses == (None, None)
    assert [e.position for e in result.log] == [0, 1]
    assert [e.kind for e in result.log] == ["RewriteStep", "RewireStep"]
    assert result.log[0].detail == "rewrite[replace] component 0"
    assert result.log[1].detail == "rewire component 1"

    # fingerprints match a replay of the same steps
    mid = apply_rewrite(sys, script.steps[0]).system
    assert result.log[0].wiring_fp == fingerprint_wiring(mid.wiring)
    assert result.log[0].components_fp == fingerprint_components(mid.components)
    end = apply_rewire(mid, script.steps[1])
    assert result.log[1].wiring_fp == fingerprint_wiring(end.wiring)
    assert result.log[1].components_fp == fingerprint_components(end.components)
    assert result.system == end


def test_script_hom_step_is_logged_as_morphism_mode():
    sys = CompositeSystem(identity_wiring(CELL), (history(),))
    result = apply_script(sys, AttackScript((RewriteStep(0, hom=collapse()),)))
    assert result.log[0].detail == "rewrite[morphism] component 0"
    assert result.witnesses[0] is not None


def test_aborted_script_reports_the_partial_log():
    script = AttackScript((RewireStep(0, not_endo()),
                           RewriteStep(9, machine=delay())))
    with pytest.raises(AttackError, match="step 1") as exc:
        apply_script(pair(), script)
    assert len(exc.value.log) == 1
    assert exc.value.log[0].detail == "rewire component 0"


def test_empty_script_is_the_identity():
    sys = pair()
    result = apply_script(sys, AttackScript())
    assert result.system is sys
    assert result.log == ()


# ---------------------------------------------------------------------------
# transport
# ---------------------------------------------------------------------------

def test_transport_fans_steps_out_along_the_correspondence():
    step = RewriteStep(0, machine=delay("1"))
    moved = transport_script(AttackScript((step,)), {0: (1, 2)})
    assert [s.index for s in moved.steps] == [1, 2]
    assert all(s.machine is step.machine for s in moved.steps)


def test_transport_keeps_step_order():
    script = AttackScript((RewriteStep(1, machine=delay("1")),
                           RewireStep(0, not_endo())))
    moved = transport_script(script, {0: (0,), 1: (2,)})
    assert isinstance(moved.steps[0], RewriteStep)
    assert moved.steps[0].index == 2
    assert isinstance(moved.steps[1], RewireStep)
    assert moved.steps[1].index == 0


def test_transport_requires_coverage():
    with pytest.raises(AttackError, match="slot 3"):
        transport_script(AttackScript((RewriteStep(3, machine=delay()),)),
                         {0: (0,)})


# ---------------------------------------------------------------------------
# diffing
# ---------------------------------------------------------------------------

def test_diff_of_a_system_with_itself_is_equivalent():
    report = attack_diff(pair(), pair(), 6)
    assert report == DiffReport(True, None, 6, ())


def test_diff_finds_the_shortest_witness():
    attacked = apply_rewire(single(), RewireStep(0, not_endo()))
    report = attack_diff(single(), attacked, 6)
    assert not report.equivalent
    # one step to absorb the input, one to read it back out
    assert report.witness == (("0",), ("0",))
    before = single().composite()
    after = attacked.composite()
    assert run(before, report.witness) != run(after, report.witness)


def test_diff_runs_the_battery():
    battery = (Test("words-2", TraceSet(2)),
               Test("states", StateSet()))
    attacked = apply_rewrite(single(), RewriteStep(0, machine=delay("1")))
    report = attack_diff(single(), attacked.system, 4, battery)
    assert dict(report.tests) == {"words-2": False, "states": True}


def test_diff_requires_matching_boundaries():
    with pytest.raises(AttackError, match="different boxes"):
        attack_diff(single(), pair(), 4)
