"""Scenario files: JSON ingestion, validation and serialization.

One file serves both exact and p-adic runs: scalars are written as rational
strings ("a/b") and read into the rationals or into Q_p at the precision given
in ``meta``.  Basis vectors of the generating space are ordered by increasing
weight, so unipotent representation matrices are strictly upper triangular.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import ValidationError
from .filtlin import Filtration, Subspace
from .period import PeriodLoop, PeriodScenario, TorusData, assemble_period_loop
from .phimod import PhiModule, module_from_matrix
from .scalars.domain import QQ, PadicField
from .selmer import CKData, Cocycle, Torsor
from .uni.group import UAction
from .uni.lie import GradedLieAlgebra
from .uni.reps import standard_representation

SCHEMA = "ckperiods/scenario-v1"
BUNDLED = ("abelian", "nonabelian", "running", "split")


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def fingerprint(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("ckperiods") / "scenarios" / f"{name}.json"))


def read_scenario_json(source) -> dict:
    if isinstance(source, dict):
        return source
    p = Path(source)
    if not p.exists() and str(source) in BUNDLED:
        p = bundled_path(str(source))
    try:
        return json.loads(p.read_text())
    except FileNotFoundError as exc:
        raise ValidationError(f"scenario file {source} not found") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"scenario file {source} is not valid JSON: {exc}") from exc


def _domain_for(meta: dict, mode: str | None):
    mode = mode or meta.get("mode", "padic")
    if mode == "rational":
        return QQ
    if mode == "padic":
        try:
            return PadicField(int(meta["prime"]), int(meta["precision"]))
        except KeyError as exc:
            raise ValidationError(f"meta.{exc.args[0]} is required in p-adic mode") from exc
        except ValueError as exc:
            raise ValidationError(f"meta: {exc}") from exc
    raise ValidationError(f"unknown mode {mode!r} (expected 'padic' or 'rational')")


def _algebra(spec: dict, depth: int, label: str) -> GradedLieAlgebra:
    gens = []
    for g in spec.get("generators", []):
        try:
            gens.append((str(g["name"]), int(g["weight"]), tuple(int(x) for x in g["multiweight"])))
        except KeyError as exc:
            raise ValidationError(f"{label}.generators: missing field {exc.args[0]}") from exc
    d = int(spec.get("depth", depth))
    A = GradedLieAlgebra.free(gens, d)
    rels = spec.get("relations") or []
    if rels:
        A = A.quotient([_named_vector(A, r, QQ, f"{label}.relations") for r in rels])
    return A


def _named_vector(A: GradedLieAlgebra, entries: dict, domain, label: str):
    v = [domain.zero] * A.dim
    for name, x in entries.items():
        if name not in A.index:
            raise ValidationError(f"{label}: no basis element named {name!r}")
        v[A.index[name]] = domain(x)
    return v


def _matrix(rows, n: int, domain, label: str):
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValidationError(f"{label}: expected a {n}x{n} matrix")
    try:
        return [[domain(x) for x in r] for r in rows]
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"{label}: bad scalar ({exc})") from exc


def _filtration(levels, n: int, domain, label: str) -> Filtration:
    steps = {}
    for e in levels:
        vecs = [[domain(x) for x in v] for v in e["basis"]]
        if any(len(v) != n for v in vecs):
            raise ValidationError(f"{label}: vectors must have length {n}")
        steps[int(e["level"])] = Subspace.span(vecs, n, domain)
    return Filtration(steps, n, True, domain)


@dataclass
class Scenario:
    raw: dict
    domain: object
    name: str
    torus: TorusData
    U: GradedLieAlgebra
    basis_names: list
    period: PeriodScenario
    pi: GradedLieAlgebra | None = None
    action: UAction | None = None
    extensions: dict = field(default_factory=dict)
    torsors: dict = field(default_factory=dict)
    functionals: list = field(default_factory=list)
    _loop: PeriodLoop | None = field(default=None, repr=False)
    _ck: CKData | None = field(default=None, repr=False)

    @property
    def fingerprint(self) -> str:
        return fingerprint(self.raw)

    def loop(self) -> PeriodLoop:
        if self._loop is None:
            self._loop = assemble_period_loop(self.period)
        return self._loop

    def ck(self) -> CKData:
        if self.action is None:
            raise ValidationError("scenario declares no pi and action")
        if self._ck is None:
            self._ck = CKData(self.action, self.torus, self.loop(), self.period.frobenius_element(), self.domain)
        return self._ck

    def extension(self, name: str | None) -> PhiModule:
        """A named extension, or the generating space itself when no name is given."""
        if name is None or name == "V":
            return self.period.module
        if name not in self.extensions:
            raise ValidationError(f"no extension named {name!r}; available: {sorted(self.extensions)}")
        return self.extensions[name]

    def validate(self) -> list[str]:
        issues = self.period.validate()
        if self.pi is not None:
            issues.extend(self.torus.check_algebra(self.pi, "pi"))
        return issues


def load_scenario(source, mode: str | None = None, validate: bool = True) -> Scenario:
    raw = read_scenario_json(source)
    if raw.get("schema") != SCHEMA:
        raise ValidationError(f"schema: expected {SCHEMA!r}, found {raw.get('schema')!r}")
    meta = raw.get("meta", {})
    domain = _domain_for(meta, mode)
    depth = int(meta.get("depth", 1))
    try:
        t = raw["torus"]
        torus = TorusData(int(t["rank"]), tuple(int(x) for x in t["weight"]), tuple(int(x) for x in t["hodge"]),
                          tuple(domain(x) for x in t["frobenius"]))
    except KeyError as exc:
        raise ValidationError(f"torus: missing field {exc.args[0]}") from exc
    U = _algebra(raw.get("U", {}), depth, "U")
    space = raw.get("space") or []
    names = [str(b["name"]) for b in space]
    mws = [tuple(int(x) for x in b["multiweight"]) for b in space]
    n = len(space)
    if len(torus.frobenius) != torus.rank or len(torus.weight) != torus.rank or len(torus.hodge) != torus.rank:
        raise ValidationError("torus: weight, hodge and frobenius need one entry per rank")
    weights = [torus.weight_of(m) for m in mws]
    if weights != sorted(weights):
        raise ValidationError("space: basis vectors must be listed by increasing weight")
    gen_mats = {}
    rep_spec = raw.get("representation", {})
    gen_names = [U.names[g] for g in U.generators]
    for key in rep_spec:
        if key not in gen_names:
            raise ValidationError(f"representation: {key!r} is not a generator of U")
    for k, g in enumerate(U.generators):
        if U.names[g] in rep_spec:
            gen_mats[k] = _matrix(rep_spec[U.names[g]], n, domain, f"representation.{U.names[g]}")
    rep = standard_representation(U, gen_mats, n, domain)
    phi = _matrix(raw["phi"], n, domain, "phi")
    F = _filtration(raw.get("F", []), n, domain, "F") if raw.get("F") else None
    if F is None:
        raise ValidationError("F: the Hodge filtration of the generating space is required")
    period = PeriodScenario(U, torus, mws, rep, phi, F, domain)
    sc = Scenario(raw, domain, str(meta.get("name", "scenario")), torus, U, names, period)
    if raw.get("pi"):
        pi = _algebra(raw["pi"], depth, "pi")
        values = {}
        for uname, gens in (raw.get("action") or {}).items():
            if uname not in gen_names:
                raise ValidationError(f"action: {uname!r} is not a generator of U")
            k = gen_names.index(uname)
            pgen = [pi.names[g] for g in pi.free_parent.generators]
            vals = {}
            for pname, vec in gens.items():
                if pname not in pgen:
                    raise ValidationError(f"action.{uname}: {pname!r} is not a generator of pi")
                vals[pgen.index(pname)] = _named_vector(pi, vec, QQ, f"action.{uname}.{pname}")
            values[k] = vals
        act = UAction.from_generators(U, pi, values)
        act.derivations = [[[domain(x) for x in row] for row in D] for D in act.derivations]
        sc.pi, sc.action = pi, act
        for tz in raw.get("torsors") or []:
            sc.torsors[str(tz["name"])] = _torsor(sc, tz)
    for e in raw.get("extensions") or []:
        try:
            ew = [int(x) for x in e["weights"]]
            M = module_from_matrix(_matrix(e["phi"], len(ew), domain, f"extensions.{e['name']}.phi"), ew, domain)
            EF = _filtration(e.get("F", []), len(ew), domain, f"extensions.{e['name']}.F")
        except KeyError as exc:
            raise ValidationError(f"extensions: missing field {exc.args[0]}") from exc
        sc.extensions[str(e["name"])] = PhiModule(M.space.with_F(EF), M.phi)
    sc.functionals = [[domain(x) for x in f] for f in raw.get("functionals") or []]
    if validate:
        issues = sc.validate()
        if issues:
            raise ValidationError("; ".join(issues), {"issues": issues})
    return sc


def _torsor(sc: Scenario, spec: dict) -> Torsor:
    d = sc.domain
    U, pi = sc.U, sc.pi
    gen_names = [U.names[g] for g in U.generators]
    values = {}
    for uname, vec in (spec.get("twist") or {}).items():
        if uname not in gen_names:
            raise ValidationError(f"torsors.{spec.get('name')}: {uname!r} is not a generator of U")
        values[gen_names.index(uname)] = _named_vector(pi, vec, d, f"torsors.{spec.get('name')}.twist")
    c = Cocycle(sc.action, values, d)
    if not c.check_equivariant():
        raise ValidationError(f"torsors.{spec.get('name')}: twist values do not match generator multiweights")
    offset = _named_vector(pi, spec.get("offset") or {}, d, f"torsors.{spec.get('name')}.offset")
    return Torsor(c, offset)


# writing ------------------------------------------------------------------------


def _q(x) -> str:
    return QQ.to_json(x)


def _gen_json(A: GradedLieAlgebra) -> list:
    return [{"name": A.names[g], "weight": A.weights[g], "multiweight": list(A.multiweights[g])}
            for g in A.generators]


def scenario_to_json(name: str, meta: dict, period: PeriodScenario, basis_names, gen_matrices: dict,
                     pi: GradedLieAlgebra | None = None, action_values: dict | None = None,
                     extensions: list | None = None, torsors: list | None = None,
                     functionals: list | None = None, description: str = "") -> dict:
    """Serialize an exact (rational) scenario."""
    U = period.U
    out = {
        "schema": SCHEMA,
        "meta": dict(meta, name=name, depth=U.depth, **({"description": description} if description else {})),
        "torus": period.torus.to_json(QQ),
        "U": {"generators": _gen_json(U)},
        "space": [{"name": b, "multiweight": list(m)} for b, m in zip(basis_names, period.multiweights)],
        "representation": {U.names[U.generators[k]]: [[_q(x) for x in r] for r in M]
                           for k, M in sorted(gen_matrices.items())},
        "phi": [[_q(x) for x in r] for r in period.phi],
        "F": [{"level": i, "basis": [[_q(x) for x in v] for v in S.basis]} for i, S in period.F.steps],
    }
    if pi is not None:
        out["pi"] = {"generators": _gen_json(pi), "depth": pi.depth}
        out["action"] = action_values or {}
    if extensions:
        out["extensions"] = extensions
    if torsors:
        out["torsors"] = torsors
    if functionals:
        out["functionals"] = functionals
    return out


__all__ = [
    "BUNDLED",
    "SCHEMA",
    "Scenario",
    "bundled_path",
    "canonical_json",
    "fingerprint",
    "load_scenario",
    "read_scenario_json",
    "scenario_to_json",
]
