# %% [markdown]
# # Ten integrals, 30 bits vs 30 qubits
#
# I_n = n pi mod 10, M = 5, lam = 1.2/M, alpha = 50 / 2**30. Single draws
# differ from run to run; the magnitudes are the point: classical errors of
# order 1, quantum errors of order 1e-7.

# %%
from qubitfield import table1_experiment

table = table1_experiment(seed=0)
print(table.format())
print(f"\nalpha = {table.alpha:.3e}")
print("quantum errors  :", " ".join(f"{abs(r.quantum - r.I):.1e}" for r in table.rows))
print("classical errors:", " ".join(f"{abs(r.classical - r.I):.2f}" for r in table.rows))
