"""Loading, validating, and dumping the YAML document formats."""

import pathlib
import textwrap

import pytest
import yaml

from wirebox.attacks import apply_script
from wirebox.fileformat import (AttackDoc, BatteryDoc, LoadError, MachineDoc,
                                ScenarioDoc, SystemDoc, WiringDoc,
                                dump_machine, dump_system, load, load_kb_dir,
                                loads)
from wirebox.moore import MooreMachine
from wirebox.oracle import find_distinguishing_word
from wirebox.scenarios import (build_scenario, build_uav_real, combo_script,
                               standard_battery)
from wirebox.wiring import (Box, Port, compose, identity_wiring, tensor,
                            wiring_equal)

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"

BIT = ("0", "1")
CELL = Box("cell", (Port("a", BIT),), (Port("q", BIT),))


def delay() -> MooreMachine:
    update = {(s, (a,)): a for s in BIT for a in BIT}
    return MooreMachine(CELL, BIT, "0", update, {s: (s,) for s in BIT})


def doc(text: str):
    return loads(textwrap.dedent(text), "t.yaml")


def err(text: str) -> LoadError:
    with pytest.raises(LoadError) as exc:
        doc(text)
    return exc.value


# ---------------------------------------------------------------------------
# round trips
# ---------------------------------------------------------------------------

def test_machine_round_trip_is_exact():
    loaded = doc(dump_machine("d", delay()))
    assert isinstance(loaded, MachineDoc)
    assert loaded.name == "d"
    assert loaded.machine == delay()


def test_dumping_renders_tuple_states():
    composite = build_scenario().system("attacker-view").composite()
    loaded = doc(dump_machine("view", composite)).machine
    assert loaded.init == "(0,0,0,0,0)"  # one coordinate per slot
    assert find_distinguishing_word(loaded, composite, 4) is None


def test_system_round_trip_shares_equal_machines():
    real = build_uav_real()
    loaded = doc(dump_system({"real": real}))
    assert isinstance(loaded, SystemDoc)
    # six components, five definitions: the duplicated unit is written once
    assert len(loaded.machines) == 5
    back = loaded.systems["real"]
    assert back.wiring == real.wiring
    assert back.components == real.components


def test_dump_system_covers_several_systems():
    sc = build_scenario()
    loaded = doc(dump_system({"view": sc.system("attacker-view"),
                              "real": sc.system("real")}))
    assert set(loaded.systems) == {"view", "real"}
    assert set(loaded.wirings) == {"view-wiring", "real-wiring"}


def test_scenario_fixture_matches_the_builders():
    loaded = load(FIXTURES / "uav" / "scenario.yaml")
    assert isinstance(loaded, ScenarioDoc)
    built = build_scenario()
    for name in built.systems:
        assert loaded.scenario.system(name) == built.system(name)
    # the file adds one kb source system on top of the built three
    assert set(loaded.scenario.systems) - set(built.systems) == {"view-hacked"}
    assert loaded.scenario.correspondence == built.correspondence
    assert loaded.scenario.kb.names == built.kb.names
    assert [s.name for s in loaded.scenario.scripts] == \
        [s.name for s in built.scripts]


def test_battery_fixture_matches_the_builder():
    loaded = load(FIXTURES / "uav" / "battery.yaml")
    assert isinstance(loaded, BatteryDoc)
    assert loaded.tests == standard_battery()


def test_attack_fixture_replays_the_combo():
    loaded = load(FIXTURES / "uav" / "combo-attack.yaml")
    assert isinstance(loaded, AttackDoc)
    assert loaded.system == "attacker-view"
    view = build_scenario().system("attacker-view")
    from_file = apply_script(view, loaded.script).system
    built = apply_script(view, combo_script()).system
    assert from_file == built


def test_kb_directory_loads_in_filename_order():
    kb = load_kb_dir(str(FIXTURES / "uav" / "kb"))
    assert kb.names == ("profile-blinker", "profile-flatline",
                        "profile-hacked", "profile-stock")
    assert kb.box.name == "uav"


def test_kb_directory_rejects_other_schemas(tmp_path):
    (tmp_path / "a.yaml").write_text("schema: battery.v1\ntests: []\n")
    with pytest.raises(LoadError, match="machine.v1"):
        load_kb_dir(str(tmp_path))


def test_kb_directory_must_not_be_empty(tmp_path):
    with pytest.raises(LoadError, match="no machine files"):
        load_kb_dir(str(tmp_path))


# ---------------------------------------------------------------------------
# wiring construction forms
# ---------------------------------------------------------------------------

FORMS = """
    schema: system.v1
    boxes:
    - name: cell
      inputs:
      - {port: a, alphabet: ['0', '1']}
      outputs:
      - {port: q, alphabet: ['0', '1']}
    machines: []
    wirings:
    - name: wid
      identity: cell
    - name: pair
      tensor: [wid, wid]
    - name: twice
      compose: [wid, wid]
    systems: []
"""


def test_wiring_forms_match_the_programmatic_builders():
    loaded = doc(FORMS)
    wid = identity_wiring(CELL)
    assert loaded.wirings["wid"] == wid
    assert wiring_equal(loaded.wirings["pair"], tensor((wid, wid)))
    assert loaded.wirings["twice"] == compose(wid, wid)


def test_forward_references_are_rejected():
    e = err("""
        schema: system.v1
        boxes:
        - name: cell
          inputs:
          - {port: a, alphabet: ['0', '1']}
          outputs:
          - {port: q, alphabet: ['0', '1']}
        wirings:
        - name: pair
          tensor: [wid, wid]
        - name: wid
          identity: cell
    """)
    assert e.path == "t.yaml.wirings[0].tensor[0]"
    assert "forward references" in e.message


# ---------------------------------------------------------------------------
# diagnostics
# ---------------------------------------------------------------------------

def test_missing_schema_key():
    e = err("name: x\n")
    assert e.path == "t.yaml"
    assert "schema" in e.message


def test_unknown_schema_lists_the_known_ones():
    e = err("schema: nope.v9\n")
    assert e.path == "t.yaml.schema"
    assert "machine.v1" in e.message


def test_invalid_yaml_is_a_load_error():
    e = err("schema: [unclosed\n")
    assert "not valid YAML" in e.message


def test_top_level_must_be_a_mapping():
    e = err("- 1\n- 2\n")
    assert "expected a mapping" in e.message


def test_machine_validation_runs_at_load_time():
    e = err("""
        schema: machine.v1
        name: bad
        box:
          name: cell
          inputs:
          - {port: a, alphabet: ['0', '1']}
          outputs:
          - {port: q, alphabet: ['0', '1']}
        machine:
          states: ['0']
          init: '9'
          update:
          - {state: '0', input: ['0'], next: '0'}
          - {state: '0', input: ['1'], next: '0'}
          readout:
          - {state: '0', output: ['0']}
    """)
    assert e.path == "t.yaml.machine"
    assert "init" in e.message


def test_unknown_keys_are_rejected():
    e = err("schema: battery.v1\ntests: []\nbonus: 1\n")
    assert "bonus" in e.message


def test_duplicate_test_names_are_rejected():
    e = err("""
        schema: battery.v1
        tests:
        - {name: t, kind: terminal}
        - {name: t, kind: states}
    """)
    assert e.path == "t.yaml.tests"


def test_unknown_test_kind_points_at_the_field():
    e = err("""
        schema: battery.v1
        tests:
        - {name: t, kind: wibble}
    """)
    assert e.path == "t.yaml.tests[0].kind"


def test_unknown_component_points_at_the_slot():
    e = err("""
        schema: system.v1
        boxes:
        - name: cell
          inputs:
          - {port: a, alphabet: ['0', '1']}
          outputs:
          - {port: q, alphabet: ['0', '1']}
        wirings:
        - name: wid
          identity: cell
        systems:
        - name: s
          wiring: wid
          components: [ghost]
    """)
    assert e.path == "t.yaml.systems[0].components[0]"
    assert "ghost" in e.message


def test_attack_step_must_be_rewrite_or_rewire():
    e = err("""
        schema: attack.v1
        name: a
        steps:
        - {frobnicate: 1}
    """)
    assert e.path == "t.yaml.steps[0]"


def test_load_reports_unreadable_files():
    with pytest.raises(LoadError, match="cannot read"):
        load("/does/not/exist.yaml")


# ---------------------------------------------------------------------------
# scenario-level validation, by mutating the fixture
# ---------------------------------------------------------------------------

def scenario_data() -> dict:
    text = (FIXTURES / "uav" / "scenario.yaml").read_text()
    return yaml.safe_load(text)


def reload(data: dict):
    return loads(yaml.safe_dump(data, sort_keys=False), "scenario.yaml")


def test_correspondence_must_not_repeat_view_slots():
    data = scenario_data()
    data["correspondence"][1]["view"] = data["correspondence"][0]["view"]
    with pytest.raises(LoadError, match="duplicate view slot"):
        reload(data)


def test_correspondence_must_cover_every_real_slot():
    data = scenario_data()
    data["correspondence"][0]["real"] = [0]  # drops the second unit
    with pytest.raises(LoadError, match="real slots must cover"):
        reload(data)


def test_kb_rows_need_a_machine_or_a_system():
    data = scenario_data()
    data["kb"][0] = {"name": "x"}
    with pytest.raises(LoadError, match="machine or system") as exc:
        reload(data)
    assert exc.value.path == "scenario.yaml.kb[0]"


def test_state_map_must_be_a_machine_morphism():
    data = scenario_data()
    minimize = next(s for s in data["scripts"] if s["name"] == "gps-minimize")
    minimize["steps"][0]["state_map"]["00"] = "1"  # breaks the init square
    with pytest.raises(LoadError) as exc:
        reload(data)
    assert exc.value.path.endswith(".steps[0].state_map")


def test_scripts_may_only_target_known_systems():
    data = scenario_data()
    data["scripts"][0]["system"] = "ghost"
    with pytest.raises(LoadError, match="ghost") as exc:
        reload(data)
    assert exc.value.path == "scenario.yaml.scripts[0].system"
