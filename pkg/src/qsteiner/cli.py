"""Command-line entry point: ``qsteiner <command> ...``.

Exit codes: 0 success, 1 rejected (a check failed or a nonexistence claim
was contradicted), 2 usage error, 3 budget exceeded, 4 internal error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import platform
import sys
import time
from dataclasses import asdict, dataclass, field
from math import gcd
from pathlib import Path

import numpy as np

from . import __version__
from .cover import CoverInstance, check_cover, solve, solve_parallel, to_cover, write_solutions
from .designkit import (Design, RepsFile, expand, extract_df, report_code_size,
                        verify_df, verify_orbit_union, verify_steiner)
from .ffield import FieldError, PrimePolynomial, build_field
from .km import build_km
from .orbits import BudgetExceeded, build_orbit_table, parse_group
from .presets import FLAGSHIP, NONEXISTENCE_PRESETS, default_poly, flagship_reps_path

log = logging.getLogger("qsteiner")

OK, REJECT, USAGE, BUDGET, INTERNAL = 0, 1, 2, 3, 4
MODES = ("verify", "search", "nonexist")
PRESETS = {FLAGSHIP.name: FLAGSHIP, **NONEXISTENCE_PRESETS}


def sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def _count(text) -> int | None:
    """Parse node budgets such as ``1e9``."""
    if text is None:
        return None
    return int(float(text))


# --- pipeline


@dataclass
class RunParams:
    q: int = 2
    t: int = 2
    k: int = 3
    n: int = 13
    group: str = "normalizer"
    poly: str | None = None
    mode: str = "verify"
    limit: int | None = None
    seed: int | None = None
    max_nodes: int | None = None
    max_seconds: float | None = None
    workers: int = 1
    reps: str | None = None
    resume: dict | None = None
    backend: str = "auto"
    write_design: bool = False


@dataclass
class RunManifest:
    parameters: dict
    seeds: dict
    budgets: dict
    artifacts: dict = field(default_factory=dict)  # file name -> sha256
    version: str = __version__
    status: str = ""
    exit_code: int = OK
    results: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)  # wall clock, not reproducible
    python: str = platform.python_version()

    def write(self, path) -> None:
        Path(path).write_text(json.dumps(asdict(self), indent=2, sort_keys=True) + "\n")

    @classmethod
    def read(cls, path) -> "RunManifest":
        return cls(**json.loads(Path(path).read_text()))

    def params(self) -> RunParams:
        p = dict(self.parameters)
        p.update(self.seeds)
        p.update(self.budgets)
        return RunParams(**p)


class _Run:
    """Bookkeeping for one pipeline invocation."""

    def __init__(self, params: RunParams, out_dir: Path):
        self.p = params
        self.out = out_dir
        self.out.mkdir(parents=True, exist_ok=True)
        poly = PrimePolynomial.parse(params.poly, params.q, params.n) if params.poly else default_poly(params.q, params.n)
        self.field = build_field(params.q, params.n, poly)
        self.group = parse_group(params.group, self.field)
        pd = {k: getattr(params, k) for k in ("q", "t", "k", "n", "mode", "reps", "resume", "backend", "write_design", "workers")}
        pd["group"] = self.group.kind
        pd["poly"] = str(poly)
        self.manifest = RunManifest(
            parameters=pd,
            seeds={"seed": params.seed},
            budgets={"limit": params.limit, "max_nodes": params.max_nodes, "max_seconds": params.max_seconds},
        )
        self._t0 = time.perf_counter()

    def emit(self, name: str, writer) -> Path:
        path = self.out / name
        writer(path)
        self.manifest.artifacts[name] = sha256(path)
        return path

    def timed(self, label: str, fn, *args, **kw):
        t0 = time.perf_counter()
        out = fn(*args, **kw)
        self.manifest.timings[label] = round(time.perf_counter() - t0, 3)
        log.info("%s: %.2fs", label, self.manifest.timings[label])
        return out

    def finish(self, code: int, status: str) -> int:
        self.manifest.exit_code = code
        self.manifest.status = status
        self.manifest.timings["total"] = round(time.perf_counter() - self._t0, 3)
        self.manifest.write(self.out / "manifest.json")
        return code


def _verify_design(run: _Run, design: Design) -> tuple[bool, dict]:
    """Steiner check, plus the difference family when one exists."""
    report = run.timed("verify_steiner", verify_steiner, design, run.field)
    res = {
        "blocks": len(design),
        "expected_blocks": design.expected_size,
        "histogram": {str(k): v for k, v in report.histogram.items()},
        "invalid_blocks": report.invalid_blocks,
        "accepted": report.accepted,
    }
    ok = report.accepted
    if report.accepted:
        label, size = report_code_size(design, report)
        res["code"] = {"label": label, "size": size}
    if report.accepted and design.q == 2 and gcd(design.k, design.n) == 1 and design.t == 2:
        df = run.timed("extract_df", extract_df, design, run.field)
        dfr = verify_df(df)
        run.emit("df.txt", df.write)
        res["difference_family"] = {"v": df.v, "k": df.k, "blocks": len(df.blocks),
                                    "differences": dfr.differences, "accepted": dfr.accepted}
        ok = ok and dfr.accepted
    return ok, res


def _mode_verify(run: _Run) -> int:
    p = run.p
    if p.reps is None and p.t == p.k:
        # trivial design: every k-subspace, checked orbit by orbit
        table = run.timed("orbits_k", build_orbit_table, p.k, run.group)
        run.emit(f"orbits_k{p.k}.txt", table.write)
        report = run.timed("verify_orbits", verify_orbit_union, table.reps, run.group, p.t, p.k)
        run.manifest.results = {"blocks": report.blocks, "orbits": len(table),
                                "histogram": {str(k): v for k, v in report.histogram.items()},
                                "accepted": report.accepted}
        return run.finish(OK if report.accepted else REJECT, "accept" if report.accepted else "reject")
    if p.reps is None:
        raise ValueError("verify mode needs --reps (or t = k for the trivial design)")
    rf = RepsFile.read(p.reps)
    if (rf.q, rf.t, rf.k, rf.n) != (p.q, p.t, p.k, p.n):
        raise ValueError(f"{p.reps} is for q={rf.q} t={rf.t} k={rf.k} n={rf.n}")
    run.manifest.artifacts["input:" + Path(p.reps).name] = sha256(p.reps)
    design = run.timed("expand", expand, rf.reps, run.group, p.t, p.k)
    if p.write_design:
        run.emit("design.txt", design.write)
    ok, res = _verify_design(run, design)
    run.manifest.results = res
    return run.finish(OK if ok else REJECT, "accept" if ok else "reject")


def _instance(run: _Run):
    p = run.p
    t_tab = run.timed("orbits_t", build_orbit_table, p.t, run.group)
    k_tab = run.timed("orbits_k", build_orbit_table, p.k, run.group)
    run.emit(f"orbits_t{p.t}.txt", t_tab.write)
    run.emit(f"orbits_k{p.k}.txt", k_tab.write)
    km = run.timed("km", build_km, t_tab, k_tab)
    run.emit("km.txt", km.write)
    inst = to_cover(km)
    run.emit("instance.txt", inst.write)
    run.manifest.results.update(t_orbits=len(t_tab), k_orbits=len(k_tab),
                                options=len(inst.options), excluded=len(inst.excluded))
    return k_tab, inst


def _search(run: _Run, inst: CoverInstance, limit):
    p = run.p
    if p.workers > 1 and p.resume is None:
        sols, stats = run.timed("solve", solve_parallel, inst, p.workers, p.max_nodes, p.max_seconds, p.seed)
        if limit is not None:
            sols = sols[:limit]
        return sols, stats
    search = solve(inst, limit=limit, max_nodes=p.max_nodes, max_seconds=p.max_seconds,
                   seed=p.seed, resume=p.resume, backend=p.backend)
    sols = run.timed("solve", search.run)
    return sols, search.stats


def _record_search(run: _Run, stats) -> None:
    run.manifest.results["search"] = {
        "nodes": stats.nodes, "solutions": stats.solutions, "exhaustive": stats.exhaustive,
        "budget_exceeded": stats.budget_exceeded, "pruned": stats.pruned,
    }
    if stats.resume is not None:
        run.emit("resume.json", lambda path: Path(path).write_text(json.dumps(stats.resume) + "\n"))


def _write_solutions(run: _Run, k_tab, sols) -> None:
    sols = sorted(sols, key=lambda s: s.selected)
    fmt = lambda c: str(k_tab.rep(c))  # noqa: E731
    path = run.out / "solutions.txt"
    write_solutions(path, sols, run.out / "solutions.reps.txt", fmt)
    run.manifest.artifacts["solutions.txt"] = sha256(path)
    run.manifest.artifacts["solutions.reps.txt"] = sha256(run.out / "solutions.reps.txt")


def _mode_nonexist(run: _Run) -> int:
    k_tab, inst = _instance(run)
    sols, stats = _search(run, inst, None)
    _record_search(run, stats)
    _write_solutions(run, k_tab, sols)
    if sols:
        return run.finish(REJECT, f"{len(sols)} solutions found")
    if not stats.exhaustive:
        return run.finish(BUDGET, "budget exceeded")
    return run.finish(OK, "no solutions (exhaustive)")


def _mode_search(run: _Run) -> int:
    p = run.p
    k_tab, inst = _instance(run)
    sols, stats = _search(run, inst, p.limit if p.limit is not None else 1)
    _record_search(run, stats)
    _write_solutions(run, k_tab, sols)
    if not sols:
        if stats.exhaustive:
            return run.finish(OK, "no solutions (exhaustive)")
        return run.finish(BUDGET, "budget exceeded")
    first = sols[0]
    if not check_cover(inst, first):
        return run.finish(INTERNAL, "solver returned an invalid cover")
    reps = k_tab.reps[list(first.selected)]
    rf = RepsFile(p.q, p.t, p.k, p.n, run.group.kind, reps)
    run.emit("reps.txt", rf.write)
    design = run.timed("expand", expand, reps, run.group, p.t, p.k)
    if p.write_design:
        run.emit("design.txt", design.write)
    ok, res = _verify_design(run, design)
    run.manifest.results["design"] = res
    return run.finish(OK if ok else REJECT, "solution found" if ok else "solution rejected")


def pipeline(params: RunParams, out_dir) -> int:
    """Run one mode end to end; returns the exit code and leaves a
    ``manifest.json`` plus all artifacts in ``out_dir``."""
    if params.mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    run = _Run(params, Path(out_dir))
    handler = {"verify": _mode_verify, "search": _mode_search, "nonexist": _mode_nonexist}[params.mode]
    return handler(run)


# --- subcommands


def _field_from(args):
    poly = PrimePolynomial.parse(args.poly, args.q, args.n) if args.poly else default_poly(args.q, args.n)
    return build_field(args.q, args.n, poly)


def cmd_field_check(args) -> int:
    poly = PrimePolynomial.parse(args.poly, args.q, args.n) if args.poly else default_poly(args.q, args.n)
    M = args.q**args.n - 1
    irreducible = poly.is_irreducible()
    primitive = irreducible and poly.is_primitive()
    print(f"poly: {poly}")
    print(f"order: {args.q**args.n}")
    print(f"M: {M}")
    print(f"irreducible: {'yes' if irreducible else 'no'}")
    print(f"primitive: {'yes' if primitive else 'no'}")
    return OK if primitive else REJECT


def cmd_orbits(args) -> int:
    field = _field_from(args)
    group = parse_group(args.group, field)
    table = build_orbit_table(args.k, group)
    if args.out:
        table.write(args.out)
    print(f"{len(table)} orbits of {args.k}-subspaces under {group.kind} (order {group.order})")
    print(f"full length: {'yes' if table.full_length() else 'no'}; invariant collisions: {table.collisions()}")
    return OK


def cmd_km_build(args) -> int:
    field = _field_from(args)
    group = parse_group(args.group, field)
    t_tab = build_orbit_table(args.t, group)
    k_tab = build_orbit_table(args.k, group)
    km = build_km(t_tab, k_tab)
    km.write(args.out)
    if args.orbits_out:
        k_tab.write(args.orbits_out)
    if args.instance:
        to_cover(km).write(args.instance)
    sums = np.unique(km.column_sums())
    print(f"{km.shape[0]} x {km.shape[1]} matrix, column sums {sums.tolist()}")
    return OK


def _rep_lines(path) -> list[str]:
    lines = Path(path).read_text().splitlines()[1:]
    return [l.split("\t", 1)[1] for l in lines if "\t" in l]


def cmd_solve(args) -> int:
    inst = CoverInstance.read(args.instance)
    resume = json.loads(Path(args.resume).read_text()) if args.resume else None
    if args.workers > 1 and resume is None:
        sols, stats = solve_parallel(inst, args.workers, _count(args.max_nodes), args.max_seconds, args.seed)
        if args.limit is not None:
            sols = sols[: args.limit]
    else:
        search = solve(inst, limit=args.limit, max_nodes=_count(args.max_nodes), max_seconds=args.max_seconds,
                       seed=args.seed, resume=resume, backend=args.backend)
        sols = search.run()
        stats = search.stats
    reps_of = None
    if args.orbits:
        lines = _rep_lines(args.orbits)
        reps_of = lines.__getitem__
    out = args.out or "solutions.txt"
    write_solutions(out, sols, (out + ".reps") if reps_of else None, reps_of)
    if stats.resume is not None:
        Path(args.resume_out).write_text(json.dumps(stats.resume) + "\n")
    print(f"solutions: {len(sols)}  nodes: {stats.nodes}  exhaustive: {stats.exhaustive}"
          + (f"  ({stats.pruned})" if stats.pruned else ""))
    if stats.budget_exceeded:
        print(f"budget exceeded ({stats.budget_exceeded}); resume token in {args.resume_out}")
        return BUDGET
    return OK


def cmd_verify(args) -> int:
    design = Design.read(args.design)
    field = build_field(design.q, design.n, args.poly) if args.poly else build_field(design.q, design.n)
    report = verify_steiner(design, field)
    print(f"blocks: {len(design)} (expected {design.expected_size})")
    print(f"histogram: {report.histogram}")
    print(f"verdict: {'accept' if report.accepted else 'reject'}")
    if report.accepted:
        label, size = report_code_size(design, report)
        print(f"{label} >= {size}")
    return OK if report.accepted else REJECT


def cmd_dfamily(args) -> int:
    design = Design.read(args.design)
    field = build_field(design.q, design.n, args.poly) if args.poly else build_field(design.q, design.n)
    df = extract_df(design, field, experimental=args.experimental)
    report = verify_df(df)
    df.write(args.out)
    print(f"({df.v},{df.k},{df.lam}) family, {len(df.blocks)} blocks, {report.differences} differences")
    print(f"verdict: {'accept' if report.accepted else 'reject'}")
    return OK if report.accepted else REJECT


def cmd_pipeline(args) -> int:
    if args.manifest:
        params = RunManifest.read(args.manifest).params()
    elif args.preset:
        pr = PRESETS[args.preset]
        params = RunParams(q=pr.q, t=pr.t, k=pr.k, n=pr.n, group=pr.group,
                           mode="verify" if pr is FLAGSHIP else "nonexist")
        if pr is FLAGSHIP:
            params.reps = str(flagship_reps_path())
    else:
        params = RunParams()
    # explicit flags override the manifest or preset
    for name in ("q", "t", "k", "n", "group", "poly", "mode", "limit", "seed",
                 "max_seconds", "workers", "reps", "backend"):
        val = getattr(args, name)
        if val is not None:
            setattr(params, name, val)
    if args.max_nodes is not None:
        params.max_nodes = _count(args.max_nodes)
    if args.resume:
        params.resume = json.loads(Path(args.resume).read_text())
    if args.write_design:
        params.write_design = True
    flagship = (params.q, params.t, params.k, params.n) == (2, 2, 3, 13) and params.group in ("normalizer", "norm")
    if params.mode == "verify" and params.reps is None and flagship:
        params.reps = str(flagship_reps_path())
    code = pipeline(params, args.out_dir)
    manifest = RunManifest.read(Path(args.out_dir) / "manifest.json")
    print(f"{params.mode}: {manifest.status}")
    print(json.dumps(manifest.results, indent=2, sort_keys=True))
    return code


def cmd_presets(args) -> int:
    for p in PRESETS.values():
        tag = " (long-running)" if p.long_running else ""
        print(f"{p.name:18s} S_{p.q}[{p.t},{p.k},{p.n}] under {p.group}{tag}")
    return OK


def _field_args(p, t=False, k=True):
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--n", type=int, default=13)
    if t:
        p.add_argument("--t", type=int, default=2)
    if k:
        p.add_argument("--k", type=int, default=3)
    p.add_argument("--poly", help='e.g. "13,12,10,9,0" or "x^13+x^12+x^10+x^9+1"')


def _search_args(p, defaults=True):
    p.add_argument("--limit", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--max-nodes", dest="max_nodes")
    p.add_argument("--max-seconds", dest="max_seconds", type=float)
    p.add_argument("--workers", type=int, default=1 if defaults else None)
    p.add_argument("--resume", help="JSON resume token from an earlier run")
    p.add_argument("--backend", choices=("auto", "numba", "python"), default="auto" if defaults else None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qsteiner", description="q-Steiner systems via prescribed automorphisms")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    ap.add_argument("--version", action="version", version=f"qsteiner {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    fld = sub.add_parser("field", help="finite field utilities")
    fsub = fld.add_subparsers(dest="field_command", required=True)
    fc = fsub.add_parser("check", help="order, M and primitivity of a polynomial")
    _field_args(fc, k=False)
    fc.set_defaults(func=cmd_field_check)

    orb = sub.add_parser("orbits", help="orbit table of k-subspaces")
    _field_args(orb)
    orb.add_argument("--group", default="normalizer")
    orb.add_argument("--out")
    orb.set_defaults(func=cmd_orbits)

    km = sub.add_parser("km", help="Kramer-Mesner matrices")
    ksub = km.add_subparsers(dest="km_command", required=True)
    kb = ksub.add_parser("build")
    _field_args(kb, t=True)
    kb.add_argument("--group", default="normalizer")
    kb.add_argument("--out", required=True)
    kb.add_argument("--instance", help="also write the exact-cover instance")
    kb.add_argument("--orbits-out", dest="orbits_out", help="also write the k-orbit table")
    kb.set_defaults(func=cmd_km_build)

    so = sub.add_parser("solve", help="exact-cover search")
    so.add_argument("--instance", required=True)
    _search_args(so)
    so.add_argument("--out")
    so.add_argument("--orbits", help="k-orbit table, for the representatives sidecar")
    so.add_argument("--resume-out", dest="resume_out", default="resume.json")
    so.set_defaults(func=cmd_solve)

    ve = sub.add_parser("verify", help="check a design file")
    ve.add_argument("--design", required=True)
    ve.add_argument("--poly")
    ve.set_defaults(func=cmd_verify)

    df = sub.add_parser("dfamily", help="difference family from a design file")
    df.add_argument("--design", required=True)
    df.add_argument("--out", required=True)
    df.add_argument("--poly")
    df.add_argument("--experimental", action="store_true", help="allow odd q")
    df.set_defaults(func=cmd_dfamily)

    pl = sub.add_parser("pipeline", help="run a whole mode and write a manifest")
    pl.add_argument("--preset", choices=sorted(PRESETS))
    pl.add_argument("--manifest", help="re-run from an earlier manifest.json")
    for name in ("q", "t", "k", "n"):
        pl.add_argument(f"--{name}", type=int)
    pl.add_argument("--group", choices=("singer", "galois", "normalizer", "identity"))
    pl.add_argument("--poly")
    pl.add_argument("--mode", choices=MODES)
    pl.add_argument("--reps", help="orbit representatives (verify mode)")
    _search_args(pl, defaults=False)
    pl.add_argument("--write-design", dest="write_design", action="store_true")
    pl.add_argument("--out-dir", dest="out_dir", default="qsteiner-run")
    pl.set_defaults(func=cmd_pipeline)

    pr = sub.add_parser("presets", help="list named parameter sets")
    pr.set_defaults(func=cmd_presets)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return BUDGET
    except (FieldError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE if isinstance(exc, (FieldError, ValueError)) else INTERNAL
    except Exception as exc:  # pragma: no cover - last resort
        log.exception("internal error")
        print(f"internal error: {exc}", file=sys.stderr)
        return INTERNAL


if __name__ == "__main__":
    sys.exit(main())
