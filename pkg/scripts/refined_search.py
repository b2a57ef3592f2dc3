"""Look for tolerance spaces realising the bitten algebra of random small spaces."""
import argparse
import collections
import random
from dataclasses import asdict, dataclass

from bitten.bitealg.model import build_bite
from bitten.bitealg.ortho import refined_check
from bitten.quotient import build_quotient
from bitten.space import granulation, random_tolerance


@dataclass
class RefinedConfig:
    count: int = 30
    max_n: int = 4
    max_universe: int = 6
    seed: int = 0


def main():
    p = argparse.ArgumentParser(description=__doc__)
    for k, v in asdict(RefinedConfig()).items():
        p.add_argument(f"--{k.replace('_', '-')}", type=type(v), default=v)
    cfg = RefinedConfig(**vars(p.parse_args()))
    rng = random.Random(cfg.seed)
    tally = collections.Counter()
    for _ in range(cfg.count):
        T = random_tolerance(rng.randint(1, cfg.max_n), rng.random(), rng)
        Q = build_quotient(granulation(T))
        r = refined_check(build_bite(Q), max_universe=cfg.max_universe)
        ortho = r.ortho.ok if r.ortho else None
        tally[r.outcome] += 1
        print(f"{T.pairs()}  classes={len(Q)}  |H|={len(r.h)}  {r.outcome}  ortho={ortho}")
    print(dict(tally))


if __name__ == "__main__":
    main()
