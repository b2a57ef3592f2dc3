"""Command line front end: ``bitten <command> ...``.

Exit codes are 0 when everything checked holds, 1 when some law or claim
has a counterexample and 2 for usage, input or cap errors.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import time
from typing import Any, Sequence

from .approx import LAW_IDS, profile, property_report
from .bitealg.kstar import KStar, representation_check
from .bitealg.laws import DEFAULT_BUDGET, VARIANTS, abstract_law_pack, concrete_law_pack, run_pack
from .bitealg.model import build_bite
from .bitealg.ortho import refined_check
from .cover import CoverSystem, au_rough, ai_rough, bridge_check
from .heyting import SUBTRACT_RANGES, definable_sets, double_heyting_report
from .quotient import build_quotient, quotient_theorem_report, to_dot
from .sgba import CHOICE_MODES, forced_value_violations, make_choice, reconstruction_probe, \
    sgba_law_report, sgba_model
from .space import (
    DEFAULT_MAX_UNIVERSE,
    GRANULATION_KINDS,
    CapExceeded,
    InputError,
    InvariantError,
    Subset,
    Universe,
    example_space,
    granulation,
    random_tolerance,
    tolerance_from_pairs,
)

REPORT_VERSION = 1
PACKS = ("bitten-properties", "quotient-theorem", "heyting", "concrete", "abstract", "sgba")
EXAMPLE_ROWS = (
    ["x1"], ["x2"], ["x3"], ["x4"],
    ["x1", "x2"], ["x1", "x3"], ["x1", "x4"], ["x2", "x3"], ["x2", "x4"], ["x3", "x4"],
    ["x1", "x2", "x3"], ["x1", "x2", "x4"], ["x2", "x3", "x4"], ["x1", "x3", "x4"],
    ["x1", "x2", "x3", "x4"], [],
)
DEFAULT_MAX_KSTAR = 1 << 20
DEFAULT_MAX_COVER_SUBFAMILIES = 1 << 16


# -- instances ----------------------------------------------------------------------

class Instance:
    def __init__(self, doc: dict[str, Any], cap: int = DEFAULT_MAX_UNIVERSE):
        if not isinstance(doc, dict):
            raise InputError("instance must be a JSON object")
        try:
            names = doc["universe"]
        except KeyError:
            raise InputError("instance needs a 'universe' list") from None
        if not isinstance(names, list) or not all(isinstance(x, str) for x in names):
            raise InputError("'universe' must be a list of names")
        self.doc = doc
        self.universe = Universe.of(names)
        self.universe.check_cap(cap)
        pairs = doc.get("tolerance_pairs", [])
        if not all(isinstance(p, list) and len(p) == 2 for p in pairs):
            raise InputError("'tolerance_pairs' must be a list of two-name lists")
        self.tolerance = tolerance_from_pairs(self.universe, [tuple(p) for p in pairs])
        gran = doc.get("granulation", "t-relateds")
        if isinstance(gran, str):
            if gran == "explicit":
                raise InputError("give explicit granules as a list of subsets")
            self.granulation = granulation(self.tolerance, gran)
        else:
            self.granulation = granulation(self.tolerance, "explicit", gran)
        covers = doc.get("covers")
        self.covers = CoverSystem.from_names(self.universe, covers) if covers is not None \
            else CoverSystem.from_granulation(self.granulation)

    @property
    def digest(self) -> str:
        return hashlib.sha256(canonical(self.doc).encode()).hexdigest()[:16]


def canonical(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def instance_document(T, kind: str = "t-relateds") -> dict[str, Any]:
    return {"universe": list(T.universe.elements),
            "tolerance_pairs": [list(p) for p in T.pairs()],
            "granulation": kind}


def load_instance(path: str, cap: int = DEFAULT_MAX_UNIVERSE) -> Instance:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f"cannot read instance {path}: {e}") from None
    return Instance(doc, cap)


def parse_subset(u: Universe, text: str) -> Subset:
    body = text.strip()
    if body.startswith("{") and body.endswith("}"):
        body = body[1:-1]
    names = [s.strip() for s in body.split(",") if s.strip()]
    return u.subset(names)


def dump_report(report: dict[str, Any]) -> str:
    return json.dumps(report, sort_keys=True, ensure_ascii=False, indent=2)


def make_report(command: str, inst: Instance | None, seed: int, results: list[dict], start: float,
                **extra) -> dict[str, Any]:
    status = "pass" if all(r.get("holds", True) for r in results) else "fail"
    rep = {"report_version": REPORT_VERSION, "command": command, "seed": seed,
           "instance_digest": inst.digest if inst else None, "status": status,
           "results": results, "timing_seconds": round(time.perf_counter() - start, 3)}
    rep.update(extra)
    return rep


def emit(args, report: dict[str, Any], lines: list[str]) -> int:
    if args.json:
        print(dump_report(report))
    else:
        print("\n".join(lines))
        print(f"status: {report['status']}")
    return 0 if report["status"] == "pass" else 1


# -- commands -------------------------------------------------------------------------

def _table(rows: list[list[str]]) -> list[str]:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]


def cmd_approx(args) -> int:
    start = time.perf_counter()
    inst = load_instance(args.file, args.max_universe)
    u, G = inst.universe, inst.granulation
    if args.all:
        xs = [u.from_mask(m) for m in u.all_masks(args.max_universe)]
    elif args.subset:
        xs = [parse_subset(u, s) for s in args.subset]
    else:
        raise InputError("give --subset or --all")
    head = ["X", "lower", "upper", "negative", "bitten", "boundary"]
    if args.auai:
        head += ["l1", "u1", "l2", "u2"]
    rows = [head]
    results = []
    for X in xs:
        p = profile(G, X)
        row = [str(X), str(p.lower), str(p.upper), str(p.negative), str(p.bitten_upper), str(p.boundary)]
        if args.auai:
            inst.covers.check_cap(args.max_covers)
            l1, u1 = au_rough(inst.covers, X)
            l2, u2 = ai_rough(inst.covers, X)
            row += [str(l1), str(u1), str(l2), str(u2)]
        rows.append(row)
        results.append(dict(zip(head, row)))
    if args.json:
        print(dump_report(make_report("approx", inst, args.seed, results, start)))
    else:
        print("\n".join(_table(rows)))
    return 0


def example_table() -> str:
    T = example_space()
    u = T.universe
    G = granulation(T)
    Q = build_quotient(G)
    rows = [["class", "row", "X", "lower", "upper", "negative", "bitten"]]
    for i, names in enumerate(EXAMPLE_ROWS, 1):
        p = profile(G, u.subset(names))
        rows.append([f"B{Q.class_of_subset(p.subject)}", f"A{i}", str(p.subject), str(p.lower),
                     str(p.upper), str(p.negative), str(p.bitten_upper)])
    lines = _table(rows)
    lines.append(f"classes: {len(Q)}")
    return "\n".join(lines) + "\n"


def example_dot() -> str:
    return to_dot(build_quotient(granulation(example_space())), "example")


def cmd_example(args) -> int:
    if args.part in ("table", "all"):
        sys.stdout.write(example_table())
    if args.part == "all":
        sys.stdout.write("\n")
    if args.part in ("dot", "all"):
        sys.stdout.write(example_dot())
    return 0


def _pack_results(args, inst: Instance) -> tuple[list[dict], list[str]]:
    T, G, u = inst.tolerance, inst.granulation, inst.universe
    results: list[dict] = []
    lines: list[str] = []
    if args.pack == "bitten-properties":
        rep = property_report(G, cap=args.max_universe)
        for law in LAW_IDS:
            cex = rep.results[law]
            results.append({"name": law, "holds": not cex,
                            "counterexamples": [[u.render(m) for m in c] for c in cex[:5]]})
        lines = rep.render(u)
    elif args.pack == "quotient-theorem":
        Q = build_quotient(G, args.max_universe)
        rep = quotient_theorem_report(Q)
        for item in sorted(rep.checked):
            v = rep.violations[item]
            results.append({"name": f"item {item}", "holds": not v, "checked": rep.checked[item],
                            "counterexamples": [[f"B{c}" for c in w] for w in v[:5]]})
            lines.append(f"item {item}: {'holds' if not v else 'fails'} ({rep.checked[item]} checked)")
    elif args.pack == "heyting":
        D = definable_sets(T, args.max_universe, subtract_range=args.subtract_range)
        rep = double_heyting_report(D)
        for law, v in rep.violations.items():
            results.append({"name": law, "holds": not v, "checked": rep.checked[law],
                            "counterexamples": [[u.render(m) for m in w] for w in v]})
            lines.append(f"{law}: {'holds' if not v else 'fails'} ({rep.checked[law]} checked)")
    elif args.pack in ("concrete", "abstract"):
        Q = build_quotient(G, args.max_universe)
        model = build_bite(Q, max_kstar=args.max_kstar)
        pack = concrete_law_pack(args.variant) if args.pack == "concrete" else abstract_law_pack(args.variant)
        rep = run_pack(model, pack, args.pack, args.variant, budget=args.budget, seed=args.seed)
        for r in rep.results:
            results.append(r.to_record())
            flag = "" if r.exhaustive else " (sampled)"
            lines.append(f"{r.name}: {'holds' if r.holds else 'fails'}{flag}")
    elif args.pack == "sgba":
        results, lines = _sgba_results(args, inst)
    return results, lines


def _sgba_results(args, inst: Instance) -> tuple[list[dict], list[str]]:
    Q = build_quotient(inst.granulation, args.max_universe)
    models = [sgba_model(make_choice(Q, seed=args.seed + k, mode=args.mode)) for k in range(args.choices)]
    results, lines = [], []
    bad: dict[int, list] = {}
    for k, m in enumerate(models):
        rep = sgba_law_report(m)
        for item, v in rep.violations.items():
            if v:
                bad.setdefault(item, []).append({"choice": k, "witnesses": [list(map(str, w)) for w in v[:3]]})
        if rep.extra_violations:
            bad.setdefault(0, []).append({"choice": k, "witnesses": [list(map(str, w)) for w in rep.extra_violations[:3]]})
    for item in range(1, 15):
        results.append({"name": f"item {item}", "holds": item not in bad, "counterexamples": bad.get(item, [])})
        lines.append(f"item {item}: {'holds' if item not in bad else 'fails'}")
    results.append({"name": "a·b=a implies a+b=b", "holds": 0 not in bad, "counterexamples": bad.get(0, [])})
    forced = forced_value_violations(Q, models)
    results.append({"name": "forced values", "holds": not forced,
                    "counterexamples": [list(map(str, f)) for f in forced[:5]]})
    lines.append(f"forced values independent of choice: {not forced}")
    return results, lines


def cmd_laws(args) -> int:
    start = time.perf_counter()
    inst = load_instance(args.file, args.max_universe)
    results, lines = _pack_results(args, inst)
    report = make_report("laws", inst, args.seed, results, start, pack=args.pack,
                         variant=args.variant if args.pack in ("concrete", "abstract") else None)
    return emit(args, report, lines)


def cmd_random(args) -> int:
    rng = random.Random(args.seed)
    for _ in range(args.count):
        T = random_tolerance(args.n, args.density, rng)
        print(canonical(instance_document(T, args.kind)))
    return 0


def cmd_represent(args) -> int:
    start = time.perf_counter()
    inst = load_instance(args.file, args.max_universe)
    Q = build_quotient(inst.granulation, args.max_universe)
    ks = KStar(Q.poset, args.max_kstar)
    rep = representation_check(ks)
    results = [{"name": "sigma isomorphism", "holds": rep.isomorphism and not rep.theorem_violations,
                "classes": rep.size, "kstar": len(ks), "c1o2": rep.c1o2_count, "full": rep.full,
                "separating": rep.separating, "violations": rep.theorem_violations}]
    lines = [f"classes: {len(Q)}  maps: {len(ks)}  C1O2 sets: {rep.c1o2_count}",
             f"full: {rep.full}  separating: {rep.separating}  isomorphism: {rep.isomorphism}"]
    if args.search_bound is not None:
        model = build_bite(Q, max_kstar=args.max_kstar)
        ref = refined_check(model, max_universe=args.search_bound)
        u = Universe.of([f"p{i + 1}" for i in range(len(ref.h))]) if ref.h else None
        rec = {"name": "refined search", "outcome": ref.outcome, "h0": [f"B{c}" for c in ref.h0],
               "h": [f"B{c}" for c in ref.h], "candidates": ref.candidates}
        if ref.found:
            rec["witness_pairs"] = [[f"p{a + 1}", f"p{b + 1}"] for a, b in ref.witness_pairs]
            rec["witness_blocks"] = [u.render(m) for m in ref.witness_blocks]
            rec["ortho_normal"] = bool(ref.ortho and ref.ortho.ok)
        results.append(rec)
        lines.append(f"refined search: {ref.outcome}; H = {rec['h']}")
        if ref.found:
            lines.append(f"witness tolerance pairs: {rec['witness_pairs']}  blocks: {rec['witness_blocks']}")
    return emit(args, make_report("represent", inst, args.seed, results, start), lines)


def cmd_quotient(args) -> int:
    inst = load_instance(args.file, args.max_universe)
    Q = build_quotient(inst.granulation, args.max_universe)
    u = inst.universe
    rows = [["class", "lower", "bitten", "L", "◆", "¬", "members"]]
    for c in Q.classes:
        neg = Q.neg[c.id]
        rows.append([f"B{c.id}", u.render(c.lower), u.render(c.bitten), f"B{Q.L[c.id]}",
                     f"B{Q.diamond[c.id]}", "-" if neg is None else f"B{neg}",
                     " ".join(u.render(m) for m in c.members)])
    print("\n".join(_table(rows)))
    return 0


def cmd_hasse(args) -> int:
    inst = load_instance(args.file, args.max_universe)
    sys.stdout.write(to_dot(build_quotient(inst.granulation, args.max_universe)))
    return 0


def cmd_sgba(args) -> int:
    start = time.perf_counter()
    inst = load_instance(args.file, args.max_universe)
    results, lines = _sgba_results(args, inst)
    Q = build_quotient(inst.granulation, args.max_universe)
    probe = reconstruction_probe([sgba_model(make_choice(Q, seed=args.seed + k, mode=args.mode))
                                  for k in range(args.choices)])
    mins = sorted(probe.minimal_granules) if probe.minimal_granules is not None else []
    lines.append(f"order recovered: {probe.order_matches}; minimal granule classes: "
                 f"{[f'B{c}' for c in mins]}; blocks: {probe.blocks}")
    extra = {"probe": {"order_recovered": probe.order_matches,
                       "minimal_granules": [f"B{c}" for c in mins], "blocks": probe.blocks}}
    return emit(args, make_report("sgba", inst, args.seed, results, start, **extra), lines)


def cmd_auai(args) -> int:
    start = time.perf_counter()
    inst = load_instance(args.file, args.max_universe)
    rep = bridge_check(inst.granulation, cap=args.max_universe, max_covers=args.max_covers)
    u = inst.universe
    results, lines = [], []
    for claim, cex in rep.counterexamples.items():
        results.append({"name": claim, "holds": not cex, "counterexamples": [u.render(m) for m in cex[:5]]})
        lines.append(f"{claim}: {'holds' if not cex else 'fails'}")
    return emit(args, make_report("auai", inst, args.seed, results, start), lines)


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--max-universe", type=int, default=DEFAULT_MAX_UNIVERSE)
    common.add_argument("--max-kstar", type=int, default=DEFAULT_MAX_KSTAR)
    common.add_argument("--max-cover-subfamilies", type=int, default=DEFAULT_MAX_COVER_SUBFAMILIES)

    p = argparse.ArgumentParser(prog="bitten", description="Bitten rough set semantics on finite tolerance spaces")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("approx", parents=[common], help="approximations of subsets")
    a.add_argument("file")
    a.add_argument("--subset", action="append", help="e.g. '{x1,x2}'; repeatable")
    a.add_argument("--all", action="store_true", help="sweep the power set")
    a.add_argument("--auai", action="store_true", help="add the cover approximations")
    a.set_defaults(func=cmd_approx)

    e = sub.add_parser("example", parents=[common], help="the four point worked example")
    e.add_argument("--part", choices=("table", "dot", "all"), default="all")
    e.set_defaults(func=cmd_example)

    law = sub.add_parser("laws", parents=[common], help="run a law suite")
    law.add_argument("file")
    law.add_argument("--pack", choices=PACKS, required=True)
    law.add_argument("--variant", choices=VARIANTS, default="corrected")
    law.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    law.add_argument("--subtract-range", choices=SUBTRACT_RANGES, default="definable")
    law.add_argument("--choices", type=int, default=50)
    law.add_argument("--mode", choices=CHOICE_MODES, default="minimal")
    law.set_defaults(func=cmd_laws)

    r = sub.add_parser("random", parents=[common], help="seeded random instances, one JSON per line")
    r.add_argument("--n", type=int, default=4)
    r.add_argument("--density", type=float, default=0.5)
    r.add_argument("--count", type=int, default=1)
    r.add_argument("--kind", choices=[k for k in GRANULATION_KINDS if k != "explicit"], default="t-relateds")
    r.set_defaults(func=cmd_random)

    rp = sub.add_parser("represent", parents=[common], help="isotone map representation")
    rp.add_argument("file")
    rp.add_argument("--search-bound", type=int, default=None)
    rp.set_defaults(func=cmd_represent)

    q = sub.add_parser("quotient", parents=[common], help="rough equality classes")
    q.add_argument("file")
    q.set_defaults(func=cmd_quotient)

    h = sub.add_parser("hasse", parents=[common], help="Hasse diagram of the quotient in DOT")
    h.add_argument("file")
    h.set_defaults(func=cmd_hasse)

    s = sub.add_parser("sgba", parents=[common], help="choice based operations")
    s.add_argument("file")
    s.add_argument("--choices", type=int, default=50)
    s.add_argument("--mode", choices=CHOICE_MODES, default="minimal")
    s.set_defaults(func=cmd_sgba)

    au = sub.add_parser("auai", parents=[common], help="cover approximation bridge")
    au.add_argument("file")
    au.set_defaults(func=cmd_auai)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    env_seed = os.environ.get("BITTEN_SEED")
    if env_seed is not None:
        try:
            args.seed = int(env_seed)
        except ValueError:
            print("error: BITTEN_SEED must be an integer", file=sys.stderr)
            return 2
    args.max_covers = max(args.max_cover_subfamilies, 1).bit_length() - 1
    try:
        return args.func(args)
    except (InputError, InvariantError, CapExceeded) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
