# %% [markdown]
# Index sums under deformation.
# Zeros move and change as the parameter sweeps, the signed sum does not.

# %%
from memflow import topology

for name in topology.FAMILIES:
    rows = topology.check_family(name, 5)
    print(name, [(round(r.parameter, 2), r.zero_count, r.signed_sum) for r in rows])

# %%
vf = topology.torus_morse_gradient(0.4)
for z in topology.zeros_with_index(vf):
    print([round(float(c), 3) for c in z.location], z.sign_index)
