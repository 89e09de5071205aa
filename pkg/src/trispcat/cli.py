"""Command-line front end.

Exit codes: 0 success / property holds, 1 checked mathematical failure with
a witness in the report, 2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import accat, closure, equivariant, graphs, symmetry, trisp
from .errors import InputError, NotAPosetError, PipelineError, PreconditionError
from .nerve import nerve


@dataclass
class RunConfig:
    command: str
    subcommand: str | None = None
    input: str | None = None
    action: str | None = None
    map: str | None = None
    output: str | None = None
    n: int | None = None
    pipeline: str | None = None
    convention: str | None = None
    seed: int = 0
    fmt: str = "json"
    verbose: int = 0


def _load(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _emit(config, payload, text=None):
    if text is None:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if config.output:
        with open(config.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _detect(doc):
    if isinstance(doc, dict) and "objects" in doc and "morphisms" in doc:
        return "category"
    if isinstance(doc, dict) and "dims" in doc:
        return "trisp"
    raise InputError("document is neither a category nor a trisp")


def _load_trisp_action(doc, t):
    try:
        gens = doc["generators"]
    except (TypeError, KeyError) as exc:
        raise InputError("not an action document") from exc
    auts = []
    for g in gens:
        if "dims" not in g:
            raise InputError("trisp action generators need 'dims'")
        dims = [tuple(p) for p in g["dims"]]
        auts.append(symmetry.TrispAut(tuple(dims)))
    if not auts:
        return symmetry.trivial_trisp_action(t)
    return symmetry.close_group(auts, on=t)


def _load_cat_action(doc, c):
    try:
        gens = doc["generators"]
    except (TypeError, KeyError) as exc:
        raise InputError("not an action document") from exc
    auts = []
    for g in gens:
        if "objects" not in g or "morphisms" not in g:
            raise InputError("category action generators need 'objects' and 'morphisms'")
        auts.append(symmetry.CatAut(tuple(g["objects"]), tuple(g["morphisms"])))
    if not auts:
        return symmetry.trivial_cat_action(c)
    return symmetry.close_group(auts, on=c)


def cmd_validate(config):
    doc = _load(config.input)
    kind = _detect(doc)
    if kind == "category":
        c = accat.AcyclicCategory.from_json(doc)
        report = accat.validate_category(c)
        if config.fmt == "dot":
            try:
                obj = accat.as_poset(c)
            except NotAPosetError:
                obj = c
            _emit(config, None, accat.to_dot(obj))
            return 0 if report.ok else 1
        _emit(config, {"kind": "category", **report.to_json()})
        return 0 if report.ok else 1
    t = trisp.Trisp.from_json(doc)
    report = trisp.validate_trisp(t, compute_flags=t.total <= 3000)
    if config.fmt == "dot":
        _emit(config, None, trisp.skeleton_dot(t))
        return 0 if report.ok else 1
    _emit(config, {"kind": "trisp", **report.to_json()})
    return 0 if report.ok else 1


def cmd_nerve(config):
    doc = _load(config.input)
    c = accat.AcyclicCategory.from_json(doc)
    report = accat.validate_category(c)
    if not report.ok:
        _emit(config, {"error": "input category invalid", **report.to_json()})
        return 1
    nv = nerve(c)
    if config.fmt == "dot":
        _emit(config, None, trisp.skeleton_dot(nv.trisp))
        return 0
    _emit(config, nv.trisp.to_json())
    return 0


def cmd_quotient(config):
    doc = _load(config.input)
    act_doc = _load(config.action)
    kind = _detect(doc)
    if config.subcommand and config.subcommand != kind:
        raise InputError(f"--mode {config.subcommand} but input is a {kind}")
    if kind == "trisp":
        t = trisp.Trisp.from_json(doc)
        action = _load_trisp_action(act_doc, t)
        qt = symmetry.quotient_trisp(t, action)
        payload = {
            "quotient": qt.trisp.to_json(),
            "projection": [list(p) for p in qt.projection],
            "regular": qt.regular,
            "regularity_violations": [list(v) for v in qt.regularity_violations],
        }
        _emit(config, payload)
        return 0
    c = accat.AcyclicCategory.from_json(doc)
    action = _load_cat_action(act_doc, c)
    qc = symmetry.quotient_category(c, action)
    cmap = symmetry.canonical_map(c, action, qc=qc)
    is_poset = True
    try:
        accat.as_poset(qc.category)
    except NotAPosetError:
        is_poset = False
    payload = {
        "quotient": qc.category.to_json(),
        "projection": {
            "objects": list(qc.obj_class),
            "morphisms": list(qc.mor_class),
        },
        "is_poset": is_poset,
        "canonical_map": {
            "surjective_by_dim": list(cmap.surjective_by_dim),
            "vertex_bijective": cmap.vertex_bijective,
        },
    }
    _emit(config, payload)
    return 0 if all(cmap.surjective_by_dim) and cmap.vertex_bijective else 1


def cmd_closure(config):
    t = trisp.Trisp.from_json(_load(config.input))
    cmap = closure.TrispClosureMap.from_json(_load(config.map))
    if config.convention:
        cmap = closure.TrispClosureMap(cmap.blue, cmap.red, cmap.mapping, config.convention)
    sub = config.subcommand
    if sub == "verify":
        report = closure.verify_trisp_closure_map(t, cmap)
        _emit(config, report.to_json())
        return 0 if report.ok else 1
    if sub == "collapse":
        report = closure.verify_trisp_closure_map(t, cmap)
        if not report.ok:
            _emit(config, {"verified": False, **report.to_json()})
            return 1
        cert = closure.full_collapse_audit(t, cmap)
        _emit(config, {"verified": True, **cert.to_json()})
        return 0
    if config.action is None:
        raise InputError(f"closure {sub} needs --action")
    action = _load_trisp_action(_load(config.action), t)
    if sub == "push":
        try:
            pushed = equivariant.push_closure_map(t, action, cmap)
        except PreconditionError as exc:
            _emit(config, {"ok": False, "error": str(exc)})
            return 1
        _emit(
            config,
            {
                "ok": True,
                "quotient": pushed.qt.trisp.to_json(),
                "map": pushed.cmap.to_json(),
                "verify": pushed.verify_report.to_json(),
            },
        )
        return 0
    if sub == "lift":
        qt = symmetry.quotient_trisp(t, action)
        condition = equivariant.check_lift_condition(t, action, cmap, qt)
        payload = {"lift_condition": condition.to_json()}
        try:
            lifted = equivariant.lift_closure_map(t, action, cmap, qt)
            payload.update({"ok": True, "map": lifted.to_json()})
            _emit(config, payload)
            return 0
        except PreconditionError as exc:
            payload.update({"ok": False, "error": str(exc)})
            if condition.holds:
                candidate = equivariant.lift_candidate(t, action, cmap, qt)
                report = closure.verify_trisp_closure_map(t, candidate)
                payload["candidate"] = candidate.to_json()
                payload["candidate_verify"] = report.to_json()
            _emit(config, payload)
            return 1
    raise InputError(f"unknown closure subcommand {sub!r}")


def cmd_dgn(config):
    if config.subcommand == "build":
        k = graphs.build_dgn(config.n)
        if config.fmt == "dot":
            _emit(config, None, trisp.skeleton_dot(k.trisp))
            return 0
        payload = k.trisp.to_json()
        payload["edge_labels"] = [k.edge_label(e) for e in range(len(k.edges))]
        _emit(config, payload)
        return 0
    if config.subcommand == "pipeline":
        variant = config.pipeline or "61"
        if variant in ("61", "trisp"):
            report, _cert = graphs.pipeline_quotient_trisp(config.n)
        elif variant in ("62", "category"):
            report, _steps = graphs.pipeline_quotient_category(config.n)
        else:
            raise InputError(f"unknown pipeline {variant!r} (use 61 or 62)")
        _emit(config, report.to_json())
        return 0 if report.ok else 1
    raise InputError(f"unknown dgn subcommand {config.subcommand!r}")


def build_parser():
    parser = argparse.ArgumentParser(prog="trispcat")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a category or trisp file")
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    p.add_argument("--format", choices=["json", "dot"], default="json")

    p = sub.add_parser("nerve", help="nerve of a category file")
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    p.add_argument("--format", choices=["json", "dot"], default="json")

    p = sub.add_parser("quotient", help="quotient by a group action")
    p.add_argument("--input", required=True)
    p.add_argument("--action", required=True)
    p.add_argument("--mode", choices=["category", "trisp"])
    p.add_argument("--output")

    p = sub.add_parser("closure", help="closure map operations")
    p.add_argument("verb", choices=["verify", "push", "lift", "collapse"])
    p.add_argument("--input", required=True, help="trisp file")
    p.add_argument("--map", required=True, help="closure map file")
    p.add_argument("--action", help="trisp action file (push/lift)")
    p.add_argument("--convention", choices=["min", "max"])
    p.add_argument("--output")

    p = sub.add_parser("dgn", help="disconnected graph complexes and pipelines")
    p.add_argument("verb", choices=["build", "pipeline"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--pipeline", help="61 or 62")
    p.add_argument("--output")
    p.add_argument("--format", choices=["json", "dot"], default="json")

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    config = RunConfig(
        command=args.command,
        subcommand=getattr(args, "verb", None) or getattr(args, "mode", None),
        input=getattr(args, "input", None),
        action=getattr(args, "action", None),
        map=getattr(args, "map", None),
        output=getattr(args, "output", None),
        n=getattr(args, "n", None),
        pipeline=getattr(args, "pipeline", None),
        convention=getattr(args, "convention", None),
        seed=args.seed,
        fmt=getattr(args, "format", "json"),
        verbose=args.verbose,
    )
    handlers = {
        "validate": cmd_validate,
        "nerve": cmd_nerve,
        "quotient": cmd_quotient,
        "closure": cmd_closure,
        "dgn": cmd_dgn,
    }
    try:
        return handlers[config.command](config)
    except InputError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 2
    except NotAPosetError as exc:
        sys.stderr.write(f"not a poset: {exc}\n")
        return 1
    except (PreconditionError, PipelineError) as exc:
        sys.stderr.write(f"failed: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
