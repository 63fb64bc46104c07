"""
Iteration counts against the theoretical rate
=============================================

A short sweep over sizes and discounts. The ``ratio`` column is iterations
divided by the rate for that algorithm; the runs sit far below 1.
"""

import csv
import io
from collections import defaultdict

from tbsg.bench import rows_to_csv, run_sweep, sweep_cells

cells = sweep_cells(sizes=[2, 4, 6, 8], gammas=[0.5, 0.9, 0.99], seeds=range(3),
                    actions_per_state=(2, 4), timing=False, random_start=True)
rows = list(csv.DictReader(io.StringIO(rows_to_csv(run_sweep(cells, jobs=2)))))

# Worst ratio per (algorithm, gamma).
worst = defaultdict(float)
for r in rows:
    worst[r["algorithm"], r["gamma"]] = max(worst[r["algorithm"], r["gamma"]],
                                            float(r["ratio"]))
for (alg, gamma), ratio in sorted(worst.items()):
    print(f"{alg:17s} gamma={float(gamma):<5g} worst ratio {ratio:.4f}")

print("all certified:", all(r["certified"] == "true" for r in rows))
