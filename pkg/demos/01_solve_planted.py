# %% [markdown]
# Solving a planted 3-SAT instance by relaxation.
# The circuit starts from random voltages and flows until the readout
# stays satisfying for a short window.

# %%
import numpy as np

from memflow import CircuitSystem, IntegratorConfig, count_defects, generate_planted_ksat, solve

formula, plant = generate_planted_ksat(60, 4.25, k=3, seed=12)
system = CircuitSystem(formula)
print(f"n={formula.num_variables} M={formula.num_clauses} D={system.dimension}")

# %%
out = solve(system, IntegratorConfig(record_stride=5), seed=0)
print(out.verdict.value, "at t =", out.t_solved, "after", out.steps_taken, "steps")
print("defects of the readout:", count_defects(formula, out.assignment))
print("agreement with the plant:", np.mean(np.array(out.assignment) == np.array(plant)))

# %%
# logical defects over time, from the recorded samples
for s in out.samples[:: max(1, len(out.samples) // 12)]:
    print(f"t={s.t:7.2f}  defects={s.defects:3d}  |v| mean={np.abs(s.state.v).mean():.3f}")
