import copy

import pytest

from ckperiods.errors import ValidationError
from ckperiods.scalars.domain import QQ, PadicField
from ckperiods.scenario import BUNDLED, fingerprint, load_scenario, read_scenario_json, scenario_to_json


@pytest.mark.parametrize("name", BUNDLED)
@pytest.mark.parametrize("mode", ["rational", "padic"])
def test_bundled_scenarios_load(name, mode):
    sc = load_scenario(name, mode)
    assert sc.validate() == []
    assert (sc.domain is QQ) == (mode == "rational")
    if mode == "padic":
        assert sc.domain == PadicField(sc.raw["meta"]["prime"], sc.raw["meta"]["precision"])
    sc.loop()


def test_fingerprint_is_stable():
    raw = read_scenario_json("running")
    assert fingerprint(raw) == fingerprint(copy.deepcopy(raw)) == load_scenario("running").fingerprint
    changed = copy.deepcopy(raw)
    changed["meta"]["precision"] = 30
    assert fingerprint(changed) != fingerprint(raw)


def _broken(edit):
    raw = copy.deepcopy(read_scenario_json("running"))
    edit(raw)
    return raw


@pytest.mark.parametrize("edit, message", [
    (lambda r: r.update(schema="other"), "schema"),
    (lambda r: r["torus"].pop("hodge"), "hodge"),
    (lambda r: r.update(space=list(reversed(r["space"]))), "increasing weight"),
    (lambda r: r["representation"].update(t=[["0", "1"], ["0", "0"]]), "not a generator"),
    (lambda r: r.update(phi=[["1/5"]]), "2x2"),
    (lambda r: r["meta"].pop("prime"), "prime"),
    (lambda r: r.update(F=[]), "Hodge filtration"),
    (lambda r: r.update(phi=[["1/5", "x"], ["0", "1"]]), "bad scalar"),
])
def test_malformed_scenarios(edit, message):
    with pytest.raises(ValidationError, match=message):
        load_scenario(_broken(edit), "padic")


def test_unknown_mode():
    with pytest.raises(ValidationError):
        load_scenario("running", "complex")


def test_unvalidated_load_reports_issues():
    raw = _broken(lambda r: r.update(phi=[["1", "1"], ["0", "1"]]))
    with pytest.raises(ValidationError):
        load_scenario(raw, "rational")
    assert load_scenario(raw, "rational", validate=False).validate()


def test_round_trip_through_writer():
    sc = load_scenario("running", "rational")
    gens = {k: sc.period.rep.matrices[g] for k, g in enumerate(sc.U.generators)}
    raw = scenario_to_json(sc.name, sc.raw["meta"], sc.period, sc.basis_names, gens,
                           extensions=sc.raw["extensions"], functionals=sc.raw["functionals"],
                           description=sc.raw["meta"]["description"])
    assert raw == sc.raw
    again = load_scenario(raw, "rational")
    assert again.loop().uL == sc.loop().uL
