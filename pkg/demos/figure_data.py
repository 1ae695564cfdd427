# coding: utf-8

# # Curve data for the three bound plots
#
# The CLI writes the curves as CSV; plotting is left to whatever tool you like.
# Here we generate the q = 1/2 family and check the bracket at the solved points.

import csv
import io

from coulombpower import cli

out = io.StringIO()
cli.main(["figure", "--id", "3", "--beta-min", "0.01", "--beta-max", "10", "--points", "20",
          "--star-every", "4"], stdout=out)
rows = list(csv.DictReader(io.StringIO(out.getvalue())))
print(len(rows), "rows")

for r in rows:
    if r["EX"]:
        ex = float(r["EX"])
        ok = float(r["ELS"]) <= ex <= min(float(r["EU"]), float(r["EC"]))
        print(r["ell"], f"{float(r['beta']):.4g}", f"{ex:.6f}", "bracketed" if ok else "VIOLATION")

# The same data from a shell:
#
#     coulombpower figure --id 3 --beta-min 0.01 --beta-max 10 --points 20 --out fig3.csv
