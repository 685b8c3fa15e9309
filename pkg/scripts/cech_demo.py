"""Build the truncated Čech–Alexander complex of F_p over (Z_p, p) and print its report.

P = Z_p[x1..xk] with δ = 0 on the generators, and R = P/(p, x1..xk).
"""

import argparse
import json
from dataclasses import dataclass

from deltaprism.cech import build_cech, cech_report
from deltaprism.coeff import CoeffRing
from deltaprism.dpoly import DeltaPoly
from deltaprism.prism import DeltaPresentation, Prism


@dataclass
class CechConfig:
    prime: int = 2
    generators: int = 1
    levels: int = 2
    depth: int = 2
    degree: int = 4
    precision: int = 1


def build(cfg: CechConfig):
    ring = CoeffRing.exact(cfg.prime)
    names = ["x"] if cfg.generators == 1 else [f"x{i + 1}" for i in range(cfg.generators)]
    A = DeltaPresentation.free(cfg.prime, [], depth=cfg.depth, degree=cfg.degree, precision=cfg.precision)
    P = DeltaPresentation.free(cfg.prime, names, explicit={s: DeltaPoly.zero(ring) for s in names})
    seq = [DeltaPoly.var(ring, s) for s in names]
    return build_cech(Prism(A, DeltaPoly.const(ring, cfg.prime)), P, seq, L=cfg.levels)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-p", "--prime", type=int, default=2)
    ap.add_argument("-k", "--generators", type=int, default=1)
    ap.add_argument("-L", "--levels", type=int, default=2)
    ap.add_argument("-K", "--depth", type=int, default=2)
    ap.add_argument("-D", "--degree", type=int, default=4)
    ap.add_argument("-N", "--precision", type=int, default=1)
    cfg = CechConfig(**vars(ap.parse_args()))
    print(json.dumps(cech_report(build(cfg)), indent=2))


if __name__ == "__main__":
    main()
