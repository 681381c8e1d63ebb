"""Command-line entry point: fixtures, cohomology reports, Massey queries,
and the verification suites, with text or line-delimited record output."""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import cochains as cc
from . import embedding as em
from . import gfp
from . import groups as gr
from . import massey as ms
from . import verify as vf
from .errors import MasseyLabError, ParseError
from .unitri import unitri_group

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_BUDGET = 2
EXIT_USAGE = 3


@dataclass
class RunConfig:
    budget: int = 10 ** 7
    jobs: int = 1
    fmt: str = "text"
    seed: int = 0
    no_cache: bool = False

    def __post_init__(self):
        if self.budget <= 0 or self.jobs < 1:
            raise MasseyLabError("budget must be > 0 and jobs >= 1")


# -- fixtures ------------------------------------------------------------------

def _u3_2():
    return unitri_group(3, 2).as_finite_group()


def _z3xz3():
    return gr.build_vector_group(3, 2)


FIXTURES = {
    "Z1": lambda: gr.build_cyclic(1),
    "Z2": lambda: gr.build_cyclic(2),
    "Z3": lambda: gr.build_cyclic(3),
    "Z4": lambda: gr.build_cyclic(4),
    "Z5": lambda: gr.build_cyclic(5),
    "Z6": lambda: gr.build_cyclic(6),
    "Z8": lambda: gr.build_cyclic(8),
    "Z9": lambda: gr.build_cyclic(9),
    "V4": lambda: gr.build_vector_group(2, 2),
    "Z3xZ3": _z3xz3,
    "S3": gr.build_symmetric3,
    "D4": lambda: gr.build_dihedral(4),
    "Q8": gr.build_quaternion8,
    "U3_2": _u3_2,
    "SD9": lambda: gr.build_semidirect_cyclic(3, 2, 4),
}


def get_group(ref: str) -> gr.FiniteGroup:
    if ref in FIXTURES:
        return FIXTURES[ref]()
    if os.path.exists(ref):
        with open(ref) as fh:
            return gr.parse_group_file(fh.read(), label=os.path.basename(ref))
    raise ParseError(f"unknown group {ref!r} (not a fixture, not a file)")


# -- report plumbing -----------------------------------------------------------

class Report:
    def __init__(self, command: str):
        self.command = command
        self.records: list[dict] = []
        self.t0 = time.time()

    def add(self, **rec):
        self.records.append(rec)

    def verdicts(self):
        return [r.get("verdict", "holds") for r in self.records]

    def exit_code(self) -> int:
        vs = self.verdicts()
        if any(v == "fails" for v in vs):
            return EXIT_FAIL
        if any(v == "budget-exceeded" for v in vs):
            return EXIT_BUDGET
        return EXIT_OK

    def emit(self, cfg: RunConfig, out=None):
        out = out or sys.stdout
        if cfg.fmt == "records":
            header = {"schema-version": SCHEMA_VERSION, "command": self.command,
                      "seed": cfg.seed}
            out.write(json.dumps(header, sort_keys=True) + "\n")
            for rec in self.records:
                out.write(json.dumps(rec, sort_keys=True, default=_jsonable)
                          + "\n")
            counts = {}
            for v in self.verdicts():
                counts[v] = counts.get(v, 0) + 1
            out.write(json.dumps({"summary": counts}, sort_keys=True) + "\n")
        else:
            out.write(f"== {self.command}\n")
            for rec in self.records:
                bits = " ".join(f"{k}={_txt(v)}" for k, v in rec.items())
                out.write(f"  {bits}\n")
            dt = time.time() - self.t0
            out.write(f"  ({len(self.records)} records, {dt:.2f}s)\n")


def _jsonable(x):
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    if isinstance(x, tuple):
        return list(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    return str(x)


def _txt(v):
    if isinstance(v, float):
        return f"{v:.3g}"
    return str(v)


# -- cache ---------------------------------------------------------------------

def _cache_dir() -> str:
    return os.environ.get("MASSEYLAB_CACHE_DIR",
                          os.path.join(os.path.expanduser("~"),
                                       ".cache", "masseylab"))


def _cache_key(parts) -> str:
    blob = json.dumps(parts, sort_keys=True, default=_jsonable)
    return hashlib.sha256(blob.encode()).hexdigest()


def cache_get(parts, cfg: RunConfig):
    if cfg.no_cache:
        return None
    path = os.path.join(_cache_dir(), _cache_key(parts) + ".json")
    if not os.path.exists(path):
        return None
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError):
        return None


def cache_put(parts, records, cfg: RunConfig):
    if cfg.no_cache:
        return
    d = _cache_dir()
    os.makedirs(d, exist_ok=True)
    path = os.path.join(d, _cache_key(parts) + ".json")
    tmp = path + f".tmp{os.getpid()}"
    with open(tmp, "w") as fh:
        json.dump(records, fh, sort_keys=True, default=_jsonable)
    os.replace(tmp, path)


# -- commands ------------------------------------------------------------------

def cmd_group(args, cfg: RunConfig) -> Report:
    rep = Report(f"group {args.action}")
    if args.action == "list":
        for name in sorted(FIXTURES):
            G = FIXTURES[name]()
            rep.add(name=name, order=G.order, abelian=G.is_abelian(),
                    fingerprint=G.fingerprint())
    elif args.action == "show":
        G = get_group(args.target)
        rep.add(name=args.target, order=G.order,
                generators=list(G.generators),
                abelian=G.is_abelian(),
                involutions=len(G.involutions()),
                fingerprint=G.fingerprint())
    elif args.action == "check":
        with open(args.target) as fh:
            G = gr.parse_group_file(fh.read())
        gr.validate_group(G)
        rep.add(file=args.target, order=G.order, valid=True)
    return rep


def cmd_cohomology(args, cfg: RunConfig) -> Report:
    G = get_group(args.group)
    p = args.p
    rep = Report(f"cohomology {args.group} p={p}")
    key = ["cohomology", G.fingerprint(), p]
    hit = cache_get(key, cfg)
    if hit is not None:
        rep.records = hit
        return rep
    report = cc.demushkin_check(G, p)
    rep.add(group=args.group, p=p, dim_h1=report["dim_h1"],
            dim_h2=report["dim_h2"],
            cup_form_nondegenerate=report["nondegenerate"],
            demushkin=report["verdict"])
    cache_put(key, rep.records, cfg)
    return rep


def parse_query_file(text: str):
    """Query format: `group REF`, `p P`, `n N`, then n lines `a v1 v2 ...`
    giving each character's values on the group's listed generators."""
    lines = [ln.strip() for ln in text.strip().splitlines()
             if ln.strip() and not ln.strip().startswith("#")]
    kv = {}
    rows = []
    for i, ln in enumerate(lines, start=1):
        toks = ln.split()
        if toks[0] == "a":
            try:
                rows.append([int(t) for t in toks[1:]])
            except ValueError:
                raise ParseError("bad character row", line=i)
        elif toks[0] in ("group", "p", "n") and len(toks) == 2:
            kv[toks[0]] = toks[1]
        else:
            raise ParseError(f"unrecognized line {ln!r}", line=i)
    for need in ("group", "p", "n"):
        if need not in kv:
            raise ParseError(f"missing `{need}` line")
    G = get_group(kv["group"])
    p, n = int(kv["p"]), int(kv["n"])
    if len(rows) != n:
        raise ParseError(f"expected {n} character rows, got {len(rows)}")
    chars = tuple(_char_from_gen_values(G, p, row) for row in rows)
    return ms.query(G, p, chars), kv["group"]


def _char_from_gen_values(G: gr.FiniteGroup, p: int, row) -> cc.Cochain:
    basis = cc.h1(G, p)
    gens = G.generators
    if len(row) != len(gens):
        raise ParseError(f"character row has {len(row)} values for "
                         f"{len(gens)} generators")
    if not basis:
        if any(v % p for v in row):
            raise ParseError("generator values do not extend to a character")
        return cc.zero_cochain(G, p, 1)
    B = [[b.value(g) for b in basis] for g in gens]
    x = gfp.solve(np.array(B, dtype=np.int64).reshape(len(gens), len(basis)),
                  np.array(row, dtype=np.int64) % p, p)
    if x is None:
        raise ParseError("generator values do not extend to a character")
    out = cc.zero_cochain(G, p, 1)
    for c, b in zip(x, basis):
        out = out + b.scale(int(c))
    return out


def cmd_massey(args, cfg: RunConfig) -> Report:
    with open(args.query) as fh:
        q, gname = parse_query_file(fh.read())
    rep = Report(f"massey {args.query}")
    defined = ms.massey_defined(q, strategy=args.strategy)
    vanishes = ms.massey_vanishes(q, strategy=args.strategy) if defined \
        else False
    rec = {"group": gname, "p": q.p, "n": q.n,
           "chars": [list(a.values) for a in q.chars],
           "defined": defined, "vanishes": vanishes,
           "verdict": "holds"}
    if unitri_group(q.n + 1, q.p).materializable():
        sol = em.solve(em.build_dwyer_problem(q))
        rec["witness_lift"] = list(sol.gen_images()) if sol else None
        if (sol is not None) != vanishes:
            rec["verdict"] = "fails"
    rep.add(**rec)
    return rep


# -- verify suites -------------------------------------------------------------

def _suite_dwyer(args, cfg) -> list[dict]:
    G = get_group(args.group)
    out = []
    for chars in ms.h1_tuples(G, args.p, args.n):
        q = ms.MasseyQuery(G, args.p, chars)
        v1 = ms.massey_vanishes(q, "exhaustive")
        v2 = ms.massey_vanishes(q, "hom-lift")
        v3 = em.dwyer_solvable(q)
        d1 = ms.massey_defined(q, "exhaustive")
        d2 = ms.massey_defined(q, "hom-lift")
        c1 = ms.consecutive_cups_zero(q, cross_check=True)
        ok = (v1 == v2 == v3) and (d1 == d2)
        out.append({"tuple": [list(a.values) for a in chars],
                    "vanishes": v1, "defined": d1, "cups_zero": c1,
                    "verdict": "holds" if ok else "fails"})
    return out


def _suite_twisting(args, cfg) -> list[dict]:
    G = get_group(args.group)
    recs = em.verify_twisting(G, args.p, args.n, args.k,
                              sample=args.sample, seed=cfg.seed)
    return [{"psi": list(r["psi"]), "chi": list(r["chi"]),
             "verdict": "holds" if r["holds"] else "fails"} for r in recs]


def _suite_strong_vanishing(args, cfg) -> list[dict]:
    G = get_group(args.group)
    reports = ms.strong_massey_vanishing(G, args.p,
                                         range(3, args.n + 1),
                                         budget=args.tuple_budget)
    return [{"n": r["n"], "tuples_checked": r["tuples_checked"],
             "counterexample": r["counterexample"],
             "verdict": r["verdict"]} for r in reports]


def _suite_easy_vanishing(args, cfg) -> list[dict]:
    G = get_group(args.group)
    rec = vf.easy_vanishing_drill(G, args.p, args.n)
    rec["verdict"] = "holds" if rec["verified"] else "fails"
    return [rec]


def _suite_case_by_case(args, cfg) -> list[dict]:
    audit = vf.case_by_case_audit()
    out = []
    for key in ((1, 1), (0, 0)):
        rec = audit[key]
        ok = key != (1, 1) or all(o > 2 for o in rec["orders"])
        out.append({"superdiagonal": list(key), "count": rec["count"],
                    "orders": rec["orders"],
                    "verdict": "holds" if ok else "fails"})
    return out


def _suite_fiber_quotient(args, cfg) -> list[dict]:
    m = args.n if args.n else 4
    recs = vf.structure_audit(m, args.p)
    return [dict(r, verdict="holds" if r["holds"] else "fails")
            for r in recs]


SUITES = {
    "dwyer": _suite_dwyer,
    "twisting": _suite_twisting,
    "strong-vanishing": _suite_strong_vanishing,
    "easy-vanishing": _suite_easy_vanishing,
    "case-by-case": _suite_case_by_case,
    "fiber-quotient": _suite_fiber_quotient,
}


def cmd_verify(args, cfg: RunConfig) -> Report:
    rep = Report(f"verify {args.suite}")
    key = ["verify", args.suite, args.group, args.p, args.n, args.k,
           args.sample, args.tuple_budget, cfg.seed]
    hit = cache_get(key, cfg)
    if hit is not None:
        rep.records = hit
        return rep
    rep.records = SUITES[args.suite](args, cfg)
    cache_put(key, rep.records, cfg)
    return rep


# -- argument parsing ----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "records"),
                        default="text")
    common.add_argument("--budget", type=int, default=10 ** 7)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--no-cache", action="store_true")

    ap = argparse.ArgumentParser(prog="masseylab")
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("group", parents=[common])
    g.add_argument("action", choices=("list", "show", "check"))
    g.add_argument("target", nargs="?")

    c = sub.add_parser("cohomology", parents=[common])
    c.add_argument("--group", required=True)
    c.add_argument("--p", type=int, required=True)

    q = sub.add_parser("massey", parents=[common])
    q.add_argument("query")
    q.add_argument("--strategy", choices=("exhaustive", "hom-lift"),
                   default="exhaustive")

    v = sub.add_parser("verify", parents=[common])
    v.add_argument("suite", choices=sorted(SUITES))
    v.add_argument("--group", default="V4")
    v.add_argument("--p", type=int, default=2)
    v.add_argument("--n", type=int, default=3)
    v.add_argument("--k", type=int, default=2)
    v.add_argument("--sample", type=int, default=None)
    v.add_argument("--tuple-budget", type=int, default=None)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    cfg = RunConfig(budget=args.budget, jobs=args.jobs, fmt=args.format,
                    seed=args.seed, no_cache=args.no_cache)
    try:
        if args.cmd == "group":
            if args.action in ("show", "check") and not args.target:
                sys.stderr.write("group show/check needs a target\n")
                return EXIT_USAGE
            rep = cmd_group(args, cfg)
        elif args.cmd == "cohomology":
            rep = cmd_cohomology(args, cfg)
        elif args.cmd == "massey":
            rep = cmd_massey(args, cfg)
        else:
            rep = cmd_verify(args, cfg)
    except ParseError as e:
        sys.stderr.write(f"parse error: {e}\n")
        return EXIT_USAGE
    except MasseyLabError as e:
        sys.stderr.write(f"error: {type(e).__name__}: {e}\n")
        return EXIT_FAIL
    except OSError as e:
        sys.stderr.write(f"io error: {e}\n")
        return EXIT_USAGE
    rep.emit(cfg)
    return rep.exit_code()


if __name__ == "__main__":
    sys.exit(main())
