"""Pareto front for the yogurt-bottling CUSUM chart.

Run from the repository root:  python3 demos/yogurt_front.py
"""

from dataclasses import replace

import numpy as np

from cusumopt.config import load_config
from cusumopt.economics import LITERAL, NO_IN_CONTROL_COST
from cusumopt.problem import ArlConstraints
from cusumopt.report import percentile_summary, run_optimize

cfg = load_config("example_sec5")

# The bundled config charges the in-control cost and enforces ARL0 >= 200.
front = run_optimize(cfg)
lo, hi = front.endpoints()
print(f"enforced, literal cost: {len(front)} designs")
print(f"  cheapest   C_E={lo.objectives[0]:.2f}  ARL_delta={lo.objectives[1]:.2f}  {lo.design}")
print(f"  fastest    C_E={hi.objectives[0]:.2f}  ARL_delta={hi.objectives[1]:.2f}  {hi.design}")

# Dropping the in-control cost and the ARL constraints gives the reference
# front shape, with its cheapest point near C_E = 9.4.
repro = replace(cfg, variant=NO_IN_CONTROL_COST, constraints=ArlConstraints(200, 14, "off"))
front = run_optimize(repro)
print(f"\nunconstrained, no in-control cost: {len(front)} designs, "
      f"n values {sorted({r.design.n for r in front})}")
print(f"{'pct':>4} {'C_E':>7} {'ARL_d':>6} {'n':>3} {'h':>5} {'H':>5}")
for p, row in percentile_summary(front):
    if p in (1, 25, 50, 75, 100):
        d = row.design
        print(f"{p:>4} {row.objectives[0]:7.2f} {row.objectives[1]:6.2f} {d.n:>3} "
              f"{d.h:5.2f} {d.decision_interval:5.2f}")

# the same designs priced under the literal model
problem = replace(repro, variant=LITERAL).problem()
literal = np.array([problem.evaluate_design(r.design).cost for r in front])
print(f"\nliteral C_E over that front: {literal.min():.2f} .. {literal.max():.2f}")
