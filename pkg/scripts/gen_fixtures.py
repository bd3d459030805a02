#!/usr/bin/env python3
"""Regenerate everything under fixtures/ from the programmatic builders.

Every generated document is loaded back and cross-checked before it is
written, so a fixture that disagrees with the library cannot land on
disk.  Output is deterministic; rerunning the script is a no-op when
nothing changed.
"""

from __future__ import annotations

import os
import sys

import yaml

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from wirebox import fincat as fc
from wirebox import scenarios as sc
from wirebox import fileformat as ff
from wirebox.attacks import AttackScript, apply_script
from wirebox.dot import architecture_dot, wiring_dot
from wirebox.oracle import trace_equivalent
from wirebox.wiring import Architecture

ROOT = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def _write(relpath: str, text: str):
    path = os.path.join(ROOT, relpath)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
    print(f"wrote fixtures/{relpath}")


def _dump(data: dict) -> str:
    return yaml.safe_dump(data, sort_keys=False, width=88)


# ---------------------------------------------------------------------------
# the vehicle scenario
# ---------------------------------------------------------------------------

def gen_uav():
    boxes = [sc.uav_box(), sc.sense_box(), sc.ctrl_box(), sc.dyn_box(),
             sc.imu_box(), sc.gps_box(), sc.proc_box(), sc.proc3_box()]
    machines = [
        ("imu-and", sc.imu_machine()),
        ("gps-stock", sc.gps_machine()),
        ("gps-hacked", sc.gps_hacked_machine()),
        ("gps-history", sc.gps_history_machine()),
        ("proc-xor", sc.proc_machine()),
        ("proc3-fuse", sc.proc3_machine()),
        ("ctrl-xor", sc.ctrl_machine()),
        ("dyn-int", sc.dyn_machine()),
        ("flatline", sc.flatline_machine()),
        ("blinker", sc.blinker_machine()),
    ]
    wirings = [
        ff.wiring_data("frame", sc.frame_wiring()),
        ff.wiring_data("sensor-view", sc.sensor_view_wiring()),
        ff.wiring_data("sensor-real", sc.sensor_real_wiring()),
        {"name": "id-ctrl", "identity": "ctrl"},
        {"name": "id-dyn", "identity": "dyn"},
        {"name": "view-stack", "tensor": ["sensor-view", "id-ctrl", "id-dyn"]},
        {"name": "real-stack", "tensor": ["sensor-real", "id-ctrl", "id-dyn"]},
        {"name": "view-chain", "compose": ["frame", "view-stack"]},
        {"name": "real-chain", "compose": ["frame", "real-stack"]},
        ff.wiring_data("gps-swap", sc.gps_swap_endo()),
    ]
    view_comps = ["imu-and", "gps-stock", "proc-xor", "ctrl-xor", "dyn-int"]
    systems = [
        {"name": "real", "wiring": "real-chain",
         "components": ["imu-and", "imu-and", "gps-stock", "proc3-fuse",
                        "ctrl-xor", "dyn-int"]},
        {"name": "attacker-view", "wiring": "view-chain",
         "components": view_comps},
        {"name": "attacker-view-hist", "wiring": "view-chain",
         "components": ["imu-and", "gps-history", "proc-xor", "ctrl-xor",
                        "dyn-int"]},
        {"name": "view-hacked", "wiring": "view-chain",
         "components": ["imu-and", "gps-hacked", "proc-xor", "ctrl-xor",
                        "dyn-int"]},
    ]
    battery = [ff.test_data(t) for t in sc.standard_battery()]
    scenario = {
        "schema": "scenario.v1",
        "name": "uav-redundant-imu",
        "boxes": [ff.box_data(b) for b in boxes],
        "machines": [ff.machine_data(n, m) for n, m in machines],
        "wirings": wirings,
        "systems": systems,
        "real": "real",
        "attacker_view": "attacker-view",
        "correspondence": [
            {"view": 0, "real": [0, 1]},
            {"view": 1, "real": [2]},
            {"view": 2, "real": [3]},
            {"view": 3, "real": [4]},
            {"view": 4, "real": [5]},
        ],
        "kb": [
            {"name": "profile-stock", "system": "attacker-view"},
            {"name": "profile-hacked", "system": "view-hacked"},
            {"name": "profile-flatline", "machine": "flatline"},
            {"name": "profile-blinker", "machine": "blinker"},
        ],
        "battery": battery,
        "scripts": [
            {"name": "gps-firmware", "system": "attacker-view",
             "steps": [{"rewrite": 1, "machine": "gps-hacked"}]},
            {"name": "gps-swap", "system": "attacker-view",
             "steps": [{"rewire": 1, "wiring": "gps-swap"}]},
            {"name": "combo", "system": "attacker-view",
             "steps": [{"rewrite": 1, "machine": "gps-hacked"},
                       {"rewire": 1, "wiring": "gps-swap"}]},
            {"name": "double-swap", "system": "attacker-view",
             "steps": [{"rewire": 1, "wiring": "gps-swap"},
                       {"rewire": 1, "wiring": "gps-swap"}]},
            {"name": "gps-minimize", "system": "attacker-view-hist",
             "steps": [{"rewrite": 1, "machine": "gps-stock",
                        "state_map": {"00": "0", "01": "1",
                                      "10": "0", "11": "1"}}]},
        ],
    }
    text = _dump(scenario)
    doc = ff.loads(text, "scenario.yaml")
    built = sc.build_scenario()
    for name in ("real", "attacker-view", "attacker-view-hist"):
        loaded = doc.scenario.system(name)
        ref = built.system(name)
        assert loaded.wiring == ref.wiring, f"{name}: wiring drifted"
        assert loaded.components == ref.components, f"{name}: machines drifted"
    _write("uav/scenario.yaml", text)

    _write("uav/battery.yaml",
           _dump({"schema": "battery.v1", "tests": battery}))

    for entry, m in sc.knowledge_base().entries:
        text = ff.dump_machine(entry, m)
        loaded = ff.loads(text, entry)
        assert trace_equivalent(loaded.machine, m, 4), f"{entry} drifted"
        _write(f"uav/kb/{entry}.yaml", text)

    target = sc.relabel_machine(sc.build_uav_attacker_view().composite())
    _write("uav/target.yaml", ff.dump_machine("target", target))

    attack = {
        "schema": "attack.v1",
        "name": "combo",
        "system": "attacker-view",
        "boxes": [ff.box_data(sc.gps_box())],
        "machines": [ff.machine_data("gps-hacked", sc.gps_hacked_machine())],
        "wirings": [ff.wiring_data("gps-swap", sc.gps_swap_endo())],
        "steps": [{"rewrite": 1, "machine": "gps-hacked"},
                  {"rewire": 1, "wiring": "gps-swap"}],
    }
    text = _dump(attack)
    adoc = ff.loads(text, "combo-attack.yaml")
    ref = apply_script(sc.build_uav_attacker_view(), sc.combo_script()).system
    got = apply_script(sc.build_uav_attacker_view(), adoc.script).system
    assert got.wiring == ref.wiring and got.components == ref.components
    _write("uav/combo-attack.yaml", text)


# ---------------------------------------------------------------------------
# finite categories
# ---------------------------------------------------------------------------

def constant_functor(cat: fc.FinCategory, name: str = "const") -> fc.SetFunctor:
    return fc.SetFunctor(name, cat,
                         {a: ("*",) for a in cat.objects},
                         {m.mid: {"*": "*"} for m in cat.morphisms})


def walking_iso() -> fc.FinCategory:
    return fc.FinCategory(
        "walking-iso", ("a", "b"),
        (fc.Morphism("ida", "a", "a"), fc.Morphism("idb", "b", "b"),
         fc.Morphism("f", "a", "b"), fc.Morphism("g", "b", "a")),
        {"a": "ida", "b": "idb"},
        {("ida", "ida"): "ida", ("ida", "g"): "g", ("f", "ida"): "f",
         ("f", "g"): "idb", ("g", "idb"): "g", ("g", "f"): "ida",
         ("idb", "f"): "f", ("idb", "idb"): "idb"})


def arrow() -> fc.FinCategory:
    return fc.FinCategory(
        "arrow", ("z", "o"),
        (fc.Morphism("idz", "z", "z"), fc.Morphism("ido", "o", "o"),
         fc.Morphism("m", "z", "o")),
        {"z": "idz", "o": "ido"},
        {("idz", "idz"): "idz", ("m", "idz"): "m", ("ido", "m"): "m",
         ("ido", "ido"): "ido"})


def parallel_pair() -> fc.FinCategory:
    return fc.FinCategory(
        "parallel-pair", ("x", "y"),
        (fc.Morphism("idx", "x", "x"), fc.Morphism("idy", "y", "y"),
         fc.Morphism("u", "x", "y"), fc.Morphism("v", "x", "y")),
        {"x": "idx", "y": "idy"},
        {("idx", "idx"): "idx", ("u", "idx"): "u", ("v", "idx"): "v",
         ("idy", "u"): "u", ("idy", "v"): "v", ("idy", "idy"): "idy"})


def chain3() -> fc.FinCategory:
    return fc.FinCategory(
        "chain3", ("p", "q", "r"),
        (fc.Morphism("idp", "p", "p"), fc.Morphism("idq", "q", "q"),
         fc.Morphism("idr", "r", "r"), fc.Morphism("f", "p", "q"),
         fc.Morphism("g", "q", "r"), fc.Morphism("h", "p", "r")),
        {"p": "idp", "q": "idq", "r": "idr"},
        {("idp", "idp"): "idp", ("idq", "idq"): "idq", ("idr", "idr"): "idr",
         ("f", "idp"): "f", ("idq", "f"): "f",
         ("g", "idq"): "g", ("idr", "g"): "g",
         ("h", "idp"): "h", ("idr", "h"): "h",
         ("g", "f"): "h"})


def cyc3() -> fc.FinCategory:
    comp = {}
    names = ["e", "r1", "r2"]
    for i in range(3):
        for j in range(3):
            comp[(names[i], names[j])] = names[(i + j) % 3]
    return fc.FinCategory(
        "cyc3", ("s",),
        tuple(fc.Morphism(n, "s", "s") for n in names),
        {"s": "e"}, comp)


def cyc3_action() -> fc.SetFunctor:
    cat = cyc3()
    rot = {"x": "y", "y": "z", "z": "x", "w": "w"}
    rot2 = {k: rot[v] for k, v in rot.items()}
    return fc.SetFunctor("act4", cat, {"s": ("x", "y", "z", "w")},
                         {"e": {k: k for k in "xyzw"},
                          "r1": rot, "r2": rot2})


def pair_functor() -> fc.SetFunctor:
    cat = parallel_pair()
    return fc.SetFunctor("squash", cat,
                         {"x": ("p0", "p1"), "y": ("r",)},
                         {"idx": {"p0": "p0", "p1": "p1"}, "idy": {"r": "r"},
                          "u": {"p0": "r", "p1": "r"},
                          "v": {"p0": "r", "p1": "r"}})


def functor_data(F: fc.SetFunctor) -> dict:
    return {
        "name": F.name,
        "objects": {a: list(F.at(a)) for a in F.cat.objects},
        "morphisms": {m.mid: dict(F.map(m.mid)) for m in F.cat.morphisms},
    }


def category_data(cat: fc.FinCategory, functors) -> dict:
    return {
        "schema": "fincat.v1",
        "name": cat.name,
        "objects": list(cat.objects),
        "morphisms": [{"id": m.mid, "src": m.src, "tgt": m.tgt}
                      for m in cat.morphisms],
        "identities": dict(cat.identity),
        "composition": [{"after": g, "first": f, "result": gf}
                        for (g, f), gf in sorted(cat.composition.items())],
        "functors": [functor_data(F) for F in functors],
    }


def gen_fincat():
    entries = []
    for cat in (walking_iso(), arrow(), parallel_pair(), chain3(), cyc3()):
        functors = [fc.hom_functor(cat, a) for a in cat.objects]
        functors.append(constant_functor(cat))
        if cat.name == "parallel-pair":
            functors.append(pair_functor())
        if cat.name == "cyc3":
            functors.append(cyc3_action())
        entries.append((cat, functors))
    for cat, functors in entries:
        report = fc.validate_category(cat)
        assert report.ok, (cat.name, report)
        for F in functors:
            assert not fc.validate_functor(F), (cat.name, F.name)
            for a in cat.objects:
                fc.yoneda_check(cat, a, F)
        text = _dump(category_data(cat, functors))
        doc = ff.loads(text, f"{cat.name}.yaml")
        assert set(doc.functors) == {F.name for F in functors}
        _write(f"fincat/{cat.name}.yaml", text)


# ---------------------------------------------------------------------------
# golden renders
# ---------------------------------------------------------------------------

def gen_golden():
    from wirebox.wiring import identity_wiring

    _write("golden/identity.dot",
           wiring_dot(identity_wiring(sc.gps_box()), "identity"))
    _write("golden/sensor-view.dot",
           wiring_dot(sc.sensor_view_wiring(), "sensor-view"))
    arch = Architecture(
        sc.uav_box(), sc.frame_wiring(),
        (Architecture(sc.sense_box(), sc.sensor_view_wiring(),
                      (Architecture(sc.imu_box()), Architecture(sc.gps_box()),
                       Architecture(sc.proc_box()))),
         Architecture(sc.ctrl_box()), Architecture(sc.dyn_box())))
    _write("golden/architecture.dot", architecture_dot(arch, "airframe"))


if __name__ == "__main__":
    gen_uav()
    gen_fincat()
    gen_golden()
    print("fixtures regenerated")
