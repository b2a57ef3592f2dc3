"""Run both law packs, in both variants, on every small tolerance space up to isomorphism."""
import argparse
import json
import time
from dataclasses import asdict, dataclass

import networkx as nx

from bitten.bitealg.laws import abstract_law_pack, concrete_law_pack, run_pack
from bitten.bitealg.model import build_bite
from bitten.quotient import build_quotient
from bitten.space import Universe, granulation, tolerance_from_pairs


@dataclass
class SweepConfig:
    max_n: int = 4
    budget: int = 1 << 20
    seed: int = 0
    depth: int = 2
    kind: str = "t-relateds"


def tolerances(max_n: int):
    for g in nx.graph_atlas_g()[1:]:
        n = g.number_of_nodes()
        if n > max_n:
            return
        u = Universe.of([f"x{i + 1}" for i in range(n)])
        yield tolerance_from_pairs(u, [(f"x{a + 1}", f"x{b + 1}") for a, b in g.edges])


def sweep(cfg: SweepConfig):
    for T in tolerances(cfg.max_n):
        start = time.perf_counter()
        M = build_bite(build_quotient(granulation(T, cfg.kind)), depth=cfg.depth)
        row = {"n": len(T.universe), "pairs": T.pairs(), "carrier": M.size}
        for name, make in (("concrete", concrete_law_pack), ("abstract", abstract_law_pack)):
            for variant in ("corrected", "as-printed"):
                rep = run_pack(M, make(variant), name, variant, budget=cfg.budget, seed=cfg.seed)
                row[f"{name}/{variant}"] = {"failing": rep.failing, "exhaustive": rep.exhaustive}
        row["seconds"] = round(time.perf_counter() - start, 2)
        yield row


def main():
    p = argparse.ArgumentParser(description=__doc__)
    for k, v in asdict(SweepConfig()).items():
        p.add_argument(f"--{k.replace('_', '-')}", type=type(v), default=v)
    cfg = SweepConfig(**vars(p.parse_args()))
    for row in sweep(cfg):
        print(json.dumps(row, ensure_ascii=False), flush=True)


if __name__ == "__main__":
    main()
