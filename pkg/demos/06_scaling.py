# %% [markdown]
# A small scaling study: median crossings of solved runs against n,
# fitted as a power law on log-log axes.

# %%
from memflow import bench

configs = bench.scaling_configs([20, 40, 80], ratio=4.25, instances=5, seed=1, track_critical=False)
results = bench.run_many(configs)
summary = bench.summarize(results)
fit = summary.fit
for n, m in zip(fit.sizes, fit.medians):
    print(f"n={int(n):4d} median crossings={m:g} solve rate={summary.solve_rates[int(n)]:.2f}")
print(f"slope={fit.slope:.2f} r2={fit.r_squared:.3f} passed={summary.passed}")
