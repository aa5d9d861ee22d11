"""How the front endpoints move when one model input changes at a time."""

from dataclasses import replace

from cusumopt.config import DEFAULT_SWEEP, load_config
from cusumopt.economics import NO_IN_CONTROL_COST
from cusumopt.moea import MoeaConfig
from cusumopt.problem import ArlConstraints
from cusumopt.report import run_sensitivity

cfg = load_config("example_sec5")
cfg = replace(cfg, variant=NO_IN_CONTROL_COST, constraints=ArlConstraints(200, 14, "off"))

# a lighter budget keeps the whole sweep to about a minute
rows = run_sensitivity(cfg, DEFAULT_SWEEP, MoeaConfig(population_size=60, generations=150,
                                                      rng_seed=2024))

print(f"{'factor':>7} {'value':>6} {'end':>8} {'C_E':>7} {'ARL_d':>6} {'n':>3} {'h':>5} {'H':>5}")
for r in rows:
    if r.level == "low" and r.factor != "delta":
        continue
    if r.row is None:
        print(f"{r.factor:>7} {r.value:6g} error: {r.error}")
        continue
    d = r.row.design
    print(f"{r.factor:>7} {r.value:6g} {r.endpoint:>8} {r.row.objectives[0]:7.2f} "
          f"{r.row.objectives[1]:6.2f} {d.n:>3} {d.h:5.2f} {d.decision_interval:5.2f}")
