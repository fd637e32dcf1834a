"""Command line: ckperiods {check,split,period,selmer,locreal,bklog,verify} SCENARIO [options]."""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .errors import EXIT_OK, EXIT_PROPERTY, EXIT_VALIDATION, ArtifactError, ValidationError
from .hodgesplit import hodge_weight_splitting
from .period import (
    bk_log,
    min_relative_precision,
    verify_periods_bk,
)
from .phimod import frobenius_splitting, validate_phimodule
from .poly import eliminate
from .scalars.domain import QQ
from .scalars.linalg import inverse, matmul, nz
from .scalars.padic import INF
from .scenario import canonical_json, fingerprint, load_scenario, read_scenario_json
from .selmer import delta, gr_fixed_point, locreal_map, selmer_chart, verify_diagram


def _vec(v, d):
    return [d.to_json(d(x)) for x in v]


def _prec(values, d):
    p = min_relative_precision(values, d)
    return None if p == INF else p


# commands ----------------------------------------------------------------------


def cmd_check(args) -> tuple[dict, int]:
    sc = load_scenario(args.scenario, args.mode, validate=False)
    issues = sc.validate()
    out = {"issues": issues}
    ok = not issues
    if ok:
        rep = validate_phimodule(sc.period.module)
        out["phimodule"] = rep.to_json()
        if not rep.ok:
            ok = False
            out["issues"] = [f"{flag}: generating space" for flag in rep.flags()]
        for name, E in sorted(sc.extensions.items()):
            er = validate_phimodule(E)
            out.setdefault("extensions", {})[name] = er.to_json()
            if not er.ok:
                ok = False
                out["issues"].extend(f"{flag}: extension {name}" for flag in er.flags())
    out["representation_faithful"] = sc.period.rep.is_faithful()
    out["ok"] = ok
    return out, EXIT_OK if ok else EXIT_VALIDATION


def cmd_split(args) -> tuple[dict, int]:
    sc = load_scenario(args.scenario, args.mode)
    E = sc.extension(args.object)
    if args.kind == "frobenius":
        s = frobenius_splitting(E)
        out = {"kind": "frobenius", "object": args.object or "V", "splitting": s.to_json(),
               "equivariant": s.is_equivariant()}
    else:
        s = hodge_weight_splitting(E.space)
        out = {"kind": "hodge", "object": args.object or "V", "splitting": s.to_json()}
    return out, EXIT_OK


def cmd_period(args) -> tuple[dict, int]:
    sc = load_scenario(args.scenario, args.mode)
    d = sc.domain
    loop = sc.loop()
    out = loop.to_json()
    # Frobenius square: tau_cr conjugates the graded Frobenius back to phi
    S = loop.frobenius_splitting.automorphism()
    square = matmul(matmul(S, sc.period.graded_phi()), inverse(S, d))
    out["frobenius_square"] = not any(nz(a - b) for r1, r2 in zip(square, sc.period.phi) for a, b in zip(r1, r2))
    out["splittings"] = {
        "frobenius": fingerprint(loop.frobenius_splitting.to_json()),
        "hodge": fingerprint(loop.hodge_splitting.to_json()),
    }
    out["identity_loop"] = not any(nz(x) for x in loop.uL)
    return out, EXIT_OK


def cmd_selmer(args) -> tuple[dict, int]:
    sc = load_scenario(args.scenario, args.mode)
    if sc.action is None:
        raise ValidationError("scenario declares no pi and action")
    d = sc.domain
    out = {"chart": selmer_chart(sc.action).to_json(), "torsors": {}}
    for name, T in sorted(sc.torsors.items()):
        g = gr_fixed_point(T)
        c = delta(T)
        out["torsors"][name] = {"fingerprint": T.fingerprint(), "gr_fixed_point": _vec(g, d),
                                "cocycle": c.to_json(), "recovers_twist": c.equals(T.twist)}
    return out, EXIT_OK


def cmd_locreal(args) -> tuple[dict, int]:
    sc = load_scenario(args.scenario, args.mode)
    ck = sc.ck()
    m = locreal_map(ck)
    out = {"map": m.to_json()}
    if args.eliminate:
        if sc.domain is not QQ:
            raise ValidationError("elimination runs over the rationals; rerun with --mode rational")
        targets = tuple(f"y{i + 1}" for i in range(len(m.polynomials)))
        ideal = eliminate(m.polynomials, targets)
        out["image_ideal"] = {"variables": list(targets), "generators": [str(g) for g in ideal]}
    return out, EXIT_OK


def cmd_bklog(args) -> tuple[dict, int]:
    sc = load_scenario(args.scenario, args.mode)
    E = sc.extension(args.ext)
    log = bk_log(E)
    out = {"extension": args.ext or "V"}
    out.update(log.to_json(sc.domain))
    out["precision"] = _prec(log.value, sc.domain)
    return out, EXIT_OK


def cmd_verify(args) -> tuple[dict, int]:
    sc = load_scenario(args.scenario, args.mode)
    suites = ["left", "right", "periods-bk"] if args.suite == "all" else [args.suite]
    out = {"seed": args.seed, "trials": args.trials, "suites": {}}
    ok = True
    for suite in suites:
        if suite == "periods-bk":
            rep = verify_periods_bk(sc.period, sc.loop(), strict=False)
            out["suites"][suite] = rep.to_json()
            ok = ok and rep.ok
        else:
            rep = verify_diagram(sc.ck(), suite, args.seed, args.trials)
            data = rep.to_json()
            if not args.records:
                data.pop("records")
            out["suites"][suite] = data
            ok = ok and rep.ok
    out["ok"] = ok
    return out, EXIT_OK if ok else EXIT_PROPERTY


COMMANDS = {
    "check": cmd_check,
    "split": cmd_split,
    "period": cmd_period,
    "selmer": cmd_selmer,
    "locreal": cmd_locreal,
    "bklog": cmd_bklog,
    "verify": cmd_verify,
}


# output ------------------------------------------------------------------------


def _text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v) and not _is_padic(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}-")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(f"{pad}{_scalar(obj)}")
    return lines


_PADIC_KEYS = {"p", "val", "unit", "prec"}


def _is_padic(v) -> bool:
    return isinstance(v, dict) and set(v) == _PADIC_KEYS


def _padic_text(v) -> str:
    p = v["p"]
    if v["val"] is None:
        return "0" if v["prec"] is None else f"O({p}^{v['prec']})"
    return f"{v['unit']}*{p}^{v['val']} + O({p}^{v['val'] + v['prec']})"


def _flat(v) -> bool:
    return isinstance(v, list) and all(_is_padic(x) or not isinstance(x, (dict, list)) for x in v)


def _scalar(v) -> str:
    if _is_padic(v):
        return _padic_text(v)
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, dict):
        return json.dumps(v, sort_keys=True)
    if v is None:
        return "-"
    return str(v)


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    return "\n".join(_text(report)) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ckperiods", description="Unipotent period loops and cocycle checks.")
    p.add_argument("--version", action="version", version=f"ckperiods {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("scenario", help="scenario JSON file or bundled name (abelian, nonabelian, running, split)")
        sp.add_argument("--mode", choices=["padic", "rational"], default=None,
                        help="scalar domain (default: meta.mode of the scenario)")
        sp.add_argument("--format", choices=["json", "text"], default="json")
        sp.add_argument("--out", default=None, help="write the report to this file")
        sp.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")
        return sp

    add("check", "validate a scenario")
    sp = add("split", "Hodge or Frobenius weight splitting")
    sp.add_argument("--kind", choices=["hodge", "frobenius"], default="frobenius")
    sp.add_argument("--object", default=None, help="extension name (default: the generating space)")
    add("period", "assemble the period loops")
    add("selmer", "cocycle chart and delta of the scenario torsors")
    sp = add("locreal", "the localization-realization polynomial map")
    sp.add_argument("--eliminate", action="store_true", help="also compute the image ideal (rational mode)")
    sp = add("bklog", "Bloch-Kato logarithm of an extension")
    sp.add_argument("--ext", default=None, help="extension name (default: the generating space)")
    sp = add("verify", "randomized verification suites")
    sp.add_argument("--suite", choices=["left", "right", "periods-bk", "all"], default="all")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--records", action="store_true", help="include per-trial records")
    return p


def run(argv=None) -> tuple[dict, int, argparse.Namespace]:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    report = {"command": args.command}
    try:
        raw = read_scenario_json(args.scenario)
        flags = {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "format", "scenario", "timing")}
        report["input_fingerprint"] = fingerprint({"scenario": raw, "flags": flags})
        report["scenario"] = raw.get("meta", {}).get("name")
        outputs, code = COMMANDS[args.command](args)
        report["outputs"] = outputs
        report["ok"] = code == EXIT_OK
    except ArtifactError as exc:
        report["ok"] = False
        report["error"] = exc.to_json()
        code = exc.exit_code
    if args.timing:
        report["timing_seconds"] = round(time.perf_counter() - t0, 6)
    return report, code, args


def main(argv=None) -> int:
    report, code, args = run(argv)
    text = render(report, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())


__all__ = ["COMMANDS", "build_parser", "canonical_json", "main", "render", "run"]
