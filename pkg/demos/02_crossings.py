# %% [markdown]
# Threshold crossings and their signed count.
# Every crossing of v_i through 0 is one elementary transition. Pairs of
# opposite crossings cancel, so the net count per variable only depends on
# where the run started and ended.

# %%
from memflow import CircuitSystem, IntegratorConfig, generate_planted_ksat, solve
from memflow.instrumentation import events_by_variable, net_signed_crossings

formula, _ = generate_planted_ksat(40, 4.25, k=3, seed=3)
out = solve(CircuitSystem(formula), IntegratorConfig(), seed=1)
print(out.verdict.value, "crossings:", len(out.crossings))

# %%
by_var = events_by_variable(out.crossings)
busiest = sorted(by_var, key=lambda i: -len(by_var[i]))[:5]
for i in busiest:
    dirs = "".join("+" if e.direction > 0 else "-" for e in by_var[i])
    start, end = out.initial_readout[i - 1], out.assignment[i - 1]
    print(f"x{i:<3} {dirs:<16} net={net_signed_crossings(out.crossings, i):+d}  {int(start)} -> {int(end)}")

# %%
flips = sum(a != b for a, b in zip(out.initial_readout, out.assignment))
print("variables that changed value:", flips, "<= total crossings:", len(out.crossings))
