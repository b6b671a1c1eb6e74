# %% [markdown]
# # The readout distribution, exactly
#
# The probability of reading I~ when the integral is I is a product of cos^2
# factors. Enumerating every adaptive transcript of the ladder gives the same
# numbers, which checks the formula against the actual feedback protocol.

# %%
import numpy as np

from qubitfield import enumerate_distribution, error_probability, readout_probability, tail_probability

alpha, N = 1.0, 8
I = 100.5  # worst case: halfway between lattice points
dist = enumerate_distribution(I, alpha, N)
m = np.array(sorted(dist))
formula = readout_probability(m * alpha, I, alpha, N)
print("max |enumeration - formula| =", np.max(np.abs(formula - [dist[k] for k in m])))
for k in range(96, 106):
    print(f"  m = {k:3d}: {dist[k]:.5f}")

# %%
# Error profile at 30 qubits, M = 5, guard 10.
M, N = 5.0, 30
a = 10 * M / 2**N
for units in (0, 0.5, 1, 1.5, 2.5, 5.5, 9.5):
    print(f"  p(delta = {units:>4} alpha) = {error_probability(units * a, M, N):.4e}")

# %%
# Probability of missing by more than 10 alpha at the worst offset.
print("published summation range :", round(tail_probability(10, 30), 6))
print("symmetric summation range :", round(tail_probability(10, 30, symmetric=True), 6))
