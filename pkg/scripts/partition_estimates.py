"""p(n) against the Hardy-Ramanujan formula, the Euler-scheme estimate and
the exact-saddle estimate."""
import argparse
import csv
import math
import sys

from khinchin.family import FamilyEvaluator
from khinchin.saddle import BUILTIN_SCHEMES, Oracle, baez_duarte_estimate, hardy_ramanujan, hayman_estimate
from khinchin.series import builtin


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[10, 50, 100, 200, 500, 1000, 2000])
    ap.add_argument("--out")
    args = ap.parse_args(argv)
    g = builtin("partitions")
    ev = FamilyEvaluator(g)
    oracle = Oracle(g, max(args.n))
    scheme = BUILTIN_SCHEMES["partitions-euler"]
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["n", "log_p", "hr_ratio", "euler_ratio", "euler_sigma_tilde_ratio", "saddle_ratio"])
    for n in args.n:
        lp = oracle(n)
        bd = baez_duarte_estimate(ev, scheme, n, oracle)
        hy = hayman_estimate(ev, n, oracle)
        w.writerow([n, f"{lp:.12g}", f"{math.exp(hardy_ramanujan(n) - lp):.8f}",
                    f"{math.exp(bd.log_ratio):.8f}", f"{math.exp(bd.log_ratio_sigma_tilde):.8f}",
                    f"{math.exp(hy.log_ratio):.8f}"])
    if args.out:
        fh.close()


if __name__ == "__main__":
    main()
