# %% [markdown]
# Largest Lyapunov exponent.
# Calibrate on linear flows with known rates, then measure the circuit
# after it has found a solution.

# %%
import numpy as np

from memflow.fields import LinearField, PointState
from memflow.instrumentation import lyapunov_max

for rate in (-1.0, -0.2, 0.5, 1.0):
    est = lyapunov_max(LinearField([[rate]]), PointState(np.array([1.0])), 10.0, 0.01, np.random.default_rng(0))
    print(f"rate {rate:+.1f} -> estimate {est.lambda_max:+.4f}")

# %%
from memflow import CircuitSystem, IntegratorConfig, generate_planted_ksat, solve

formula, _ = generate_planted_ksat(30, 4.25, k=3, seed=4)
system = CircuitSystem(formula)
out = solve(system, IntegratorConfig(), seed=0)
est = lyapunov_max(system, out.final_state, 100.0, 0.05, np.random.default_rng(1))
print(f"post-solution estimate {est.lambda_max:+.4f} over t={est.horizon:g}")
