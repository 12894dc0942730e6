"""Command-line front end: ``qdouble <command> ...``.

Exit status is 0 when every clause passed (or was skipped), 1 when any clause
failed and 2 on malformed input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Optional

from . import catalog
from .cochain import (
    BudgetExceeded,
    CochainError,
    are_cohomologous_bruteforce,
    chi_from_phi,
    parse_cocycle,
    verify_3cocycle,
    verify_chi_2cocycle,
)
from .crossedmod import (
    CrossedGModule,
    CrossedModuleError,
    braiding,
    regular_object,
    tensor_objects,
    verify_category,
    verify_hexagon,
    verify_morphism,
    verify_object,
)
from .dpr import DPRError, attach_antipode, build_dpr, verify_dpr
from .group import GroupError, make_group, verify_group
from .qhopf import QuasiHopfData, StructureError, verify_suite
from .reconstruct import RELATIONS, verify_relations
from .report import FAIL, Clause, Report

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

INPUT_ERRORS = (BudgetExceeded, GroupError, CochainError, DPRError, StructureError, CrossedModuleError, ValueError, KeyError, OSError, json.JSONDecodeError)


class RunReport:
    def __init__(self, command: str, inputs: dict):
        self.command = command
        self.inputs = inputs
        self.reports: list[Report] = []
        self.notes: dict = {}
        self.wall_time = 0.0

    def add(self, report: Report, prefix: str = "") -> Report:
        if prefix:
            report = Report(report.name, report.subject).extend(report, prefix=prefix)
        self.reports.append(report)
        return report

    @property
    def clauses(self) -> list[Clause]:
        return [c for r in self.reports for c in r.clauses]

    @property
    def ok(self) -> bool:
        return all(c.status != FAIL for c in self.clauses)

    def to_json(self) -> dict:
        out = {
            "command": self.command,
            "inputs": self.inputs,
            "ok": self.ok,
            "clauses": [c.to_json() for c in self.clauses],
            "wall_time": round(self.wall_time, 3),
        }
        if self.notes:
            out["notes"] = self.notes
        return out

    def text(self) -> str:
        lines = [f"qdouble {self.command}  {json.dumps(self.inputs, sort_keys=True)}"]
        for r in self.reports:
            lines.append(r.summary())
        for k, v in sorted(self.notes.items()):
            lines.append(f"{k}: {json.dumps(v, sort_keys=True)}")
        n_fail = sum(c.status == FAIL for c in self.clauses)
        lines.append(f"{'PASS' if self.ok else 'FAIL'}: {len(self.clauses)} clauses, {n_fail} failed ({self.wall_time:.2f}s)")
        return "\n".join(lines)


# -- replay -----------------------------------------------------------------------------


def _replay_set(path: Optional[str]) -> Optional[dict]:
    """Failed clause name -> recorded witness, from an earlier ``--json`` report."""
    if not path:
        return None
    obj = json.loads(Path(path).read_text())
    clauses = obj.get("clauses", [obj] if "name" in obj else [])
    return {c["name"]: c.get("witness") for c in clauses if c.get("status") == FAIL}


def _only_for(replay: Optional[dict], prefix: str) -> Optional[set]:
    if replay is None:
        return None
    return {name[len(prefix):] for name in replay if name.startswith(prefix)}


def _run_part(run: RunReport, replay, prefix: str, fn: Callable[..., Report], *args, **kw) -> None:
    only = _only_for(replay, prefix)
    if only is not None and not only:
        return
    run.add(fn(*args, only=only, **kw), prefix=prefix)


def _finish_replay(run: RunReport, replay: Optional[dict]) -> None:
    if replay is None:
        return
    status = {}
    clauses = {c.name: c for c in run.clauses}
    for name, witness in sorted(replay.items()):
        c = clauses.get(name)
        status[name] = bool(c is not None and c.status == FAIL and c.witness == witness)
    run.notes["replay_reproduced"] = status


# -- commands ---------------------------------------------------------------------------


def _load(args):
    g = make_group(args.group)
    phi = parse_cocycle(args.cocycle, g)
    return g, phi


def _inputs(args, phi=None) -> dict:
    out = {}
    for key in ("group", "cocycle", "input", "suite", "object", "catalog", "relations", "spec"):
        v = getattr(args, key, None)
        if v is not None:
            out[key] = v
    if phi is not None:
        out["scalar_order"] = phi.order
    return out


def cmd_group(args, replay) -> RunReport:
    g = make_group(args.spec)
    run = RunReport("group", _inputs(args))
    run.notes["size"] = g.size
    _run_part(run, replay, "group/", verify_group, g)
    if args.show:
        run.notes["mul"] = [list(r) for r in g.mul_table]
    return run


def cmd_cocycle(args, replay) -> RunReport:
    g, phi = _load(args)
    run = RunReport("cocycle", _inputs(args, phi))
    _run_part(run, replay, "cocycle/", verify_3cocycle, phi)
    if run.ok:
        _run_part(run, replay, "chi/", verify_chi_2cocycle, chi_from_phi(phi))
    if args.compare:
        other = parse_cocycle(args.compare, g)
        res = are_cohomologous_bruteforce(phi, other, args.root_order)
        run.notes["cohomologous"] = {
            "compare": args.compare,
            "root_order": args.root_order,
            "result": res.cohomologous,
            "candidates": res.candidates,
            "witness": None if res.witness is None else res.witness.values_json(),
        }
    return run


def _build(args):
    g, phi = _load(args)
    D = build_dpr(g, phi)
    if getattr(args, "antipode", True):
        attach_antipode(D)
    D.qhopf.meta.update({"group": args.group, "cocycle": args.cocycle, "order": D.order, "antipode": D.antipode_status})
    return g, phi, D


def cmd_build(args, replay) -> RunReport:
    g, phi, D = _build(args)
    run = RunReport("build", _inputs(args, phi))
    run.notes["dim"] = D.qhopf.dim
    run.notes["antipode"] = {"status": D.antipode_status, "note": D.antipode_note}
    if args.out:
        Path(args.out).write_text(json.dumps(D.qhopf.to_json(), sort_keys=True) + "\n")
        run.notes["out"] = args.out
    if args.verify == "all":
        _run_part(run, replay, "", verify_dpr, D)
    elif args.verify:
        _run_part(run, replay, "", verify_suite, D.qhopf, args.verify)
    return run


def cmd_verify(args, replay) -> RunReport:
    H = QuasiHopfData.from_json(json.loads(Path(args.input).read_text()))
    run = RunReport("verify", {**_inputs(args), "scalar_order": H.order})
    _run_part(run, replay, "", verify_suite, H, args.suite)
    return run


def _object(args, D) -> CrossedGModule:
    if args.object in (None, "regular"):
        return regular_object(D.group, D.cocycle, D)
    V = CrossedGModule.from_json(json.loads(Path(args.object).read_text()))
    if not V.group.same_as(D.group):
        raise CrossedModuleError("object lives on a different group")
    return V


def cmd_crossed(args, replay) -> RunReport:
    g, phi = _load(args)
    D = build_dpr(g, phi)
    V = _object(args, D)
    run = RunReport(f"crossed {args.action}", _inputs(args, phi))
    run.notes["dim"] = V.dim
    if args.action == "verify":
        _run_part(run, replay, "object/", verify_object, V)
    elif args.action == "tensor":
        _run_part(run, replay, "tensor/", verify_object, tensor_objects(V, V))
    elif args.action == "braid":
        _run_part(run, replay, "braiding/", verify_morphism, braiding(V, V), iso=True)
    elif args.action == "hexagon":
        _run_part(run, replay, "hexagon/", verify_hexagon, V, V, V)
    elif args.action == "all":
        _run_part(run, replay, "", verify_category, D)
    return run


def cmd_reconstruct(args, replay) -> RunReport:
    g, phi = _load(args)
    D = build_dpr(g, phi)
    rels = [r.strip() for r in args.relations.split(",") if r.strip()]
    for r in rels:
        if r != "all" and r not in RELATIONS:
            raise ValueError(f"unknown relation {r!r}; known: {', '.join(RELATIONS)}, all")
    run = RunReport("reconstruct", _inputs(args, phi))
    _run_part(run, replay, "", verify_relations, D, tuple(rels))
    return run


def suite_entry(group_desc: str, cocycle_desc: str, only: Optional[set] = None) -> tuple[Report, dict]:
    """All checks for one catalog entry; clause names are prefixed by area."""
    g, phi = catalog.load(group_desc, cocycle_desc)
    report = Report("suite entry", subject=f"{group_desc} {cocycle_desc}")

    def part(prefix, fn, *a, **kw):
        sub = None if only is None else {c[len(prefix):] for c in only if c.startswith(prefix)}
        if sub is not None and not sub:
            return
        report.extend(fn(*a, only=sub, **kw), prefix=prefix)

    part("cocycle/", verify_3cocycle, phi)
    part("chi/", verify_chi_2cocycle, chi_from_phi(phi))
    D = build_dpr(g, phi)
    attach_antipode(D)
    part("dpr/", verify_dpr, D)
    part("crossed/", verify_category, D)
    part("reconstruct/", verify_relations, D)
    info = {"order": D.order, "dim": D.qhopf.dim, "antipode": D.antipode_status}
    return report, info


def _suite_job(job):
    gd, cd, only = job
    return suite_entry(gd, cd, only)


def cmd_suite(args, replay) -> RunReport:
    entries = catalog.CATALOGS.get(args.catalog)
    if entries is None:
        raise ValueError(f"unknown catalog {args.catalog!r}")
    run = RunReport("suite", _inputs(args))
    jobs = []
    for gd, cd in entries:
        prefix = f"{gd} {cd}/"
        only = _only_for(replay, prefix)
        if only is not None and not only:
            continue
        jobs.append((gd, cd, only))
    workers = max(1, int(os.environ.get("QDOUBLE_WORKERS", "1") or 1))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            results = list(pool.map(_suite_job, jobs))  # map preserves catalog order
    else:
        results = [_suite_job(j) for j in jobs]
    entries_info = {}
    for (gd, cd, _), (rep, info) in zip(jobs, results):
        run.add(rep, prefix=f"{gd} {cd}/")
        entries_info[f"{gd} {cd}"] = info
    run.notes["entries"] = entries_info
    return run


# -- parser ---------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qdouble", description="Twisted quantum doubles of finite groups, verified exactly.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a machine-readable report")
    common.add_argument("--replay", metavar="REPORT", help="re-run only the failed clauses of an earlier --json report")
    gc = argparse.ArgumentParser(add_help=False)
    gc.add_argument("--group", required=True, help="zn:N, s:N, d:N or prod(A,B)")
    gc.add_argument("--cocycle", default="trivial", help="trivial, std:zn:N:p=P or a JSON file")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("group", parents=[common], help="build and verify a group")
    s.add_argument("--spec", required=True)
    s.add_argument("--show", action="store_true", help="include the multiplication table")
    s.set_defaults(fn=cmd_group)

    s = sub.add_parser("cocycle", parents=[common, gc], help="verify a 3-cocycle and its chi")
    s.add_argument("--compare", help="second cocycle for a brute-force cohomology test")
    s.add_argument("--root-order", type=int, default=4, help="root-of-unity order of the searched 2-cochains")
    s.set_defaults(fn=cmd_cocycle)

    s = sub.add_parser("build", parents=[common, gc], help="construct D^phi(G)")
    s.add_argument("--out", help="write the structure to this JSON file")
    s.add_argument("--verify", choices=["bialgebra", "antipode", "quasitriangular", "all"])
    s.add_argument("--no-antipode", dest="antipode", action="store_false")
    s.set_defaults(fn=cmd_build)

    s = sub.add_parser("verify", parents=[common], help="verify a dumped quasi-Hopf structure")
    s.add_argument("--input", required=True)
    s.add_argument("--suite", default="all", choices=["bialgebra", "antipode", "quasitriangular", "all"])
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("crossed", parents=[common, gc], help="crossed-module category checks")
    s.add_argument("action", choices=["verify", "tensor", "braid", "hexagon", "all"])
    s.add_argument("--object", default="regular", help="'regular' or a crossed-module JSON file")
    s.set_defaults(fn=cmd_crossed)

    s = sub.add_parser("reconstruct", parents=[common, gc], help="verify the double relations")
    s.add_argument("--relations", default="all", help=f"comma list of {', '.join(RELATIONS)} or all")
    s.set_defaults(fn=cmd_reconstruct)

    s = sub.add_parser("suite", parents=[common], help="run the full catalog matrix")
    s.add_argument("--catalog", default="default", choices=sorted(catalog.CATALOGS))
    s.set_defaults(fn=cmd_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        replay = _replay_set(args.replay)
        run = args.fn(args, replay)
        _finish_replay(run, replay)
    except INPUT_ERRORS as exc:
        msg = f"qdouble: error: {exc}"
        if getattr(args, "json", False):
            print(json.dumps({"command": args.command, "error": str(exc)}, sort_keys=True))
        else:
            print(msg, file=sys.stderr)
        return EXIT_INPUT
    run.wall_time = time.perf_counter() - start
    if args.json:
        print(json.dumps(run.to_json(), sort_keys=True))
    else:
        print(run.text())
    return EXIT_OK if run.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
