"""Regenerate the bundled scenario files from chosen crystalline and Hodge paths."""

from __future__ import annotations

import json
from fractions import Fraction as Q
from pathlib import Path

from ckperiods.period import PeriodScenario, TorusData
from ckperiods.scalars import QQ
from ckperiods.scenario import scenario_to_json
from ckperiods.uni.lie import GradedLieAlgebra
from ckperiods.uni.reps import standard_representation

OUT = Path(__file__).resolve().parents[1] / "src" / "ckperiods" / "scenarios"
META = {"prime": 5, "precision": 20, "mode": "padic"}


def unit(n, i, j):
    return [[Q(1) if (a, b) == (i, j) else Q(0) for b in range(n)] for a in range(n)]


def rank_one(name, c, h, description):
    U = GradedLieAlgebra.free([("s", -2, (1,))], 2)
    mats = {0: unit(2, 0, 1)}
    rep = standard_representation(U, mats, 2, QQ)
    torus = TorusData(1, (-2,), (-1,), (Q(1, 5),))
    s = PeriodScenario.from_paths(U, torus, [(1,), (0,)], rep, [Q(c)], [Q(h)], QQ)
    kummer = {
        "name": "kummer",
        "weights": [-2, 0],
        "phi": [["1/5", "3"], ["0", "1"]],
        "F": [{"level": -1, "basis": [["1", "0"], ["0", "1"]]}, {"level": 0, "basis": [["0", "1"]]},
              {"level": 1, "basis": []}],
    }
    return scenario_to_json(name, META, s, ["m", "e"], mats, extensions=[kummer], functionals=[["1", "0"]],
                            description=description)


def abelian():
    U = GradedLieAlgebra.free([("s3", -6, (3,))], 6)
    mats = {0: unit(2, 0, 1)}
    rep = standard_representation(U, mats, 2, QQ)
    torus = TorusData(1, (-2,), (-1,), (Q(1, 5),))
    s = PeriodScenario.from_paths(U, torus, [(3,), (0,)], rep, [Q(3)], [Q(2)], QQ)
    pi = GradedLieAlgebra.free([("p3", -6, (3,))], 6)
    torsors = [{"name": "t1", "twist": {"s3": {"p3": "1"}}, "offset": {"p3": "2"}}]
    return scenario_to_json("abelian", META, s, ["e3", "e0"], mats, pi=pi, action_values={}, torsors=torsors,
                            functionals=[["1", "0"]],
                            description="U free on one generator of multiweight 3, pi a line of the same "
                                        "multiweight with trivial action")


def nonabelian():
    U = GradedLieAlgebra.free([("x", -2, (0, 1)), ("y", -6, (2, 1))], 8)
    mats = {0: unit(3, 1, 2), 1: unit(3, 0, 1)}
    rep = standard_representation(U, mats, 3, QQ)
    torus = TorusData(2, (-2, -2), (-1, 0), (Q(2, 5), Q(3, 5)))
    s = PeriodScenario.from_paths(U, torus, [(2, 2), (0, 1), (0, 0)], rep, [Q(1), Q(2), Q(-1)],
                                  [Q(3), Q(1), Q(2)], QQ)
    pi = GradedLieAlgebra.free([("a", -2, (0, 1)), ("b", -2, (1, 0))], 8)
    action = {"x": {"b": {"[a,b]": "1"}}, "y": {"a": {"[a,[[a,b],b]]": "1"}, "b": {"[[[a,b],b],b]": "1"}}}
    torsors = [{"name": "t1", "twist": {"x": {"a": "1"}, "y": {"[[a,b],b]": "-2"}},
                "offset": {"a": "1", "b": "-1", "[a,b]": "2"}}]
    return scenario_to_json("nonabelian", META, s, ["e4", "e1", "e0"], mats, pi=pi, action_values=action,
                            torsors=torsors, functionals=[["1", "0", "0"], ["0", "1", "0"]],
                            description="rank-2 torus, U free on x and y acting on the free two-generator pi "
                                        "of bracket length at most 4 through derivations")


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    files = {
        "running": rank_one("running", Q(5, 4), 0, "two-dimensional extension of the unit by a weight -2 line"),
        "split": rank_one("split", 0, 0, "phi respects the Hodge-split grading"),
        "abelian": abelian(),
        "nonabelian": nonabelian(),
    }
    for name, obj in files.items():
        (OUT / f"{name}.json").write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
        print(f"wrote {name}.json")


if __name__ == "__main__":
    main()
