# %% [markdown]
# Critical points along a trajectory.
# A toy double well first: leaving the saddle and settling in a minimum
# visits index 1, then index 0. Then the end point of a circuit run, which
# is stable with many flat memory directions.

# %%
import numpy as np

from memflow.dynamics import step_rk4
from memflow.fields import PointState, double_well_2d
from memflow.instrumentation import SlowPointTracker, index_sequence

field = double_well_2d()
tracker = SlowPointTracker(field)
state = PointState(np.array([1e-5, 1e-4]))
for _ in range(600):
    tracker.feed(state.t, state.x)
    state = step_rk4(field, state, 0.05)
trace = tracker.finish()
for visit in trace.visits:
    print(f"t={visit.t:6.2f} at {np.round(visit.location.x, 6)} index={visit.index}")
print("index sequence:", index_sequence(trace))

# %%
from memflow import CircuitSystem, IntegratorConfig, generate_planted_ksat, solve
from memflow.instrumentation import refine_critical_point

formula, _ = generate_planted_ksat(30, 4.25, k=3, seed=8)
system = CircuitSystem(formula)
out = solve(system, IntegratorConfig(), seed=2)
rep = refine_critical_point(system, out.final_state)
print(f"residual={rep.residual:.1e} index={rep.index} center={rep.center_dims} stable={rep.stable_dims}")
