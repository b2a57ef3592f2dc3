"""Isotone-map representation on random posets: sizes, fullness, separation, isomorphism."""
import argparse
import random
from dataclasses import asdict, dataclass

from bitten.bitealg.kstar import KStar, representation_check
from bitten.order import random_poset


@dataclass
class RepresentationConfig:
    count: int = 50
    max_n: int = 6
    seed: int = 0


def main():
    p = argparse.ArgumentParser(description=__doc__)
    for k, v in asdict(RepresentationConfig()).items():
        p.add_argument(f"--{k.replace('_', '-')}", type=type(v), default=v)
    cfg = RepresentationConfig(**vars(p.parse_args()))
    rng = random.Random(cfg.seed)
    print("n  maps  c1o2  iso   inner_full  inner_sep  inner_onto")
    bad = 0
    for _ in range(cfg.count):
        P = random_poset(rng.randint(1, cfg.max_n), rng.random(), rng)
        ks = KStar(P)
        rep = representation_check(ks)
        inner = representation_check(ks, ks.all & ~ks.constants)
        bad += not rep.isomorphism
        print(f"{len(P):<2} {len(ks):<5} {rep.c1o2_count:<5} {rep.isomorphism!s:<5} "
              f"{inner.full!s:<11} {inner.separating!s:<10} {inner.surjective}")
    print(f"isomorphism failures: {bad}")


if __name__ == "__main__":
    main()
