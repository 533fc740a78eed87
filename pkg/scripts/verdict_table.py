"""Admissibility verdicts for every builtin series, one CSV row each."""
import argparse
import csv
import sys

from khinchin.admissibility import ReportOptions, full_report
from khinchin.series import builtin

CASES = [
    ("sets_of_sets", {}), ("pointed_sets", {}), ("lists", {}), ("lists_gamma", {"gamma": "1/2"}),
    ("lists_gamma", {"gamma": "3"}), ("cycles", {}), ("negative_binomial", {"N": 2}),
    ("functions", {}), ("rooted_trees", {}), ("trees", {}), ("power_alpha", {"alpha": "1/2"}),
    ("partitions", {}), ("distinct_parts", {}), ("plane_partitions", {}),
    ("colored_partitions", {"c": 2}), ("square_partitions", {}), ("binary_partitions", {}),
    ("monomial", {"k": 1}), ("monomial", {"k": 2}), ("polynomial", {"coeffs": "0 1 1"}),
]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", help="CSV path (default stdout)")
    args = ap.parse_args(argv)
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["series", "criterion", "verdict", "beta_hat", "lambda_hat", "margin", "cut_lo", "cut_hi"])
    for name, params in CASES:
        rep = full_report(builtin(name, params), ReportOptions(diagnostics=False))
        fit = rep.fit
        win = rep.cut_exponent_window or ("", "")
        w.writerow([rep.series["provenance"], rep.criterion, rep.verdict,
                    f"{fit.beta_hat:.6g}" if fit else "", f"{fit.lambda_hat:.6g}" if fit else "",
                    "" if rep.margin is None else f"{rep.margin:.6g}",
                    *(f"{x:.6g}" if x != "" else "" for x in win)])
    if args.out:
        fh.close()


if __name__ == "__main__":
    main()
