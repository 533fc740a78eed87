"""Cut, minor-arc, major-arc and local-CLT diagnostics along the approach grid
for one series, e.g. ``python3 scripts/arc_trends.py builtin:partitions --alpha 1.45``."""
import argparse
import csv
import sys

from khinchin.admissibility import ReportOptions, full_report
from khinchin.series import parse_series_spec


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("series")
    ap.add_argument("--alpha", type=float)
    ap.add_argument("--ks", type=int, nargs="+")
    ap.add_argument("--out")
    args = ap.parse_args(argv)
    g = parse_series_spec(args.series)
    rep = full_report(g, ReportOptions(alpha=args.alpha, ks=tuple(args.ks) if args.ks else None))
    d = rep.diagnostics
    if d is None:
        sys.exit(f"no diagnostics: {rep.notes}")
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["k", "t", "variance", "cut", "log_minor", "major", "clt"])
    for i, (k, t) in enumerate(zip(d["grid"]["k"], d["grid"]["t"])):
        clt = d["central_limit"]["points"][i]
        w.writerow([k, t, d["variance"]["values"][i], d["cut_condition"]["values"][i],
                    d["minor_arc"]["points"][i]["log_value"], d["major_arc"]["points"][i]["value"],
                    clt["value"] if clt else ""])
    w.writerow([])
    w.writerow(["verdict", rep.verdict, "alpha", rep.cut["alpha"]])
    for name in ("cut_condition", "variance"):
        w.writerow([name, d[name]["verdict"]])
    for name in ("minor_arc", "major_arc"):
        w.writerow([name, d[name]["trend"]["verdict"]])
    if args.out:
        fh.close()


if __name__ == "__main__":
    main()
