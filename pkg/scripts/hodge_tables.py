"""Measured Hodge and Hodge–Tate rank tables next to C(n+k-1, k-1)."""

import argparse
from dataclasses import dataclass
from math import comb

from deltaprism.cech import hodge_tate_ranks
from deltaprism.coeff import CoeffRing
from deltaprism.dpoly import DeltaPoly
from deltaprism.filtration import hodge_regular
from deltaprism.prism import DeltaPresentation, Prism, envelope_regular


@dataclass
class TableConfig:
    prime: int = 2
    max_k: int = 2
    weight: int = 3


def tables(cfg: TableConfig):
    ring = CoeffRing.exact(cfg.prime)
    for k in range(1, cfg.max_k + 1):
        names = [f"x{i + 1}" for i in range(k)]
        zero = {s: DeltaPoly.zero(ring) for s in names}
        A = DeltaPresentation.free(cfg.prime, names, explicit=zero, depth=1, degree=2 * cfg.weight, precision=2)
        hodge = hodge_regular(A, [A.element(s) for s in names], cfg.weight).rank_table()
        B = DeltaPresentation.free(cfg.prime, names, explicit=zero, depth=3, degree=cfg.weight, precision=1)
        env = envelope_regular(Prism(B, DeltaPoly.const(ring, cfg.prime)), [B.element(s) for s in names])
        ht = hodge_tate_ranks(env, cfg.weight).rows
        for (n, h, tw), (_, m, _, ttw) in zip(hodge, ht):
            yield k, n, h, tw, m, ttw, comb(n + k - 1, k - 1)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-p", "--prime", type=int, default=2)
    ap.add_argument("-k", "--max-k", type=int, default=2)
    ap.add_argument("-W", "--weight", type=int, default=3)
    cfg = TableConfig(**vars(ap.parse_args()))
    print(f"{'k':>2} {'n':>2} {'hodge':>6} {'twist':>6} {'ht':>4} {'twist':>6} {'C(n+k-1,k-1)':>13}")
    for k, n, h, tw, m, ttw, want in tables(cfg):
        print(f"{k:>2} {n:>2} {h:>6} {'{' + str(tw) + '}':>6} {m:>4} {'{' + str(ttw) + '}':>6} {want:>13}")


if __name__ == "__main__":
    main()
