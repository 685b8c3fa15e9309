"""Slice dimensions of the crystalline envelope against the divided power algebra.

For the prism (Z_p, p) and A = Z_p[x] with δ(x) = 0, the envelope of (x)
modulo p should look like F_p<x> weight by weight. Prints one row per
degree bound D.
"""

import argparse
import time
from dataclasses import dataclass

from deltaprism.suites import crystalline_envelope, divided_power_dimension


@dataclass
class ProfileConfig:
    prime: int = 2
    depth: int = 3
    max_degree: int = 6
    precision: int = 1


def profile(cfg: ProfileConfig) -> list:
    rows = []
    for D in range(cfg.max_degree + 1):
        t0 = time.perf_counter()
        env = crystalline_envelope(cfg.prime, cfg.depth, D, cfg.precision)
        rows.append((D, env.slice_dimension(), env.slice_length(), divided_power_dimension(cfg.prime, D),
                     time.perf_counter() - t0))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-p", "--prime", type=int, default=2)
    ap.add_argument("-K", "--depth", type=int, default=3)
    ap.add_argument("-D", "--max-degree", type=int, default=6)
    ap.add_argument("-N", "--precision", type=int, default=1)
    cfg = ProfileConfig(**vars(ap.parse_args()))
    print(f"p={cfg.prime} K={cfg.depth} N={cfg.precision}")
    print(f"{'D':>3} {'dim':>5} {'length':>7} {'gamma':>6} {'ok':>4} {'sec':>7}")
    for D, dim, length, ref, sec in profile(cfg):
        ok = "yes" if cfg.precision > 1 or dim == ref else "NO"
        print(f"{D:>3} {dim:>5} {length:>7} {ref:>6} {ok:>4} {sec:>7.3f}")


if __name__ == "__main__":
    main()
