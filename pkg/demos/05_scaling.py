# %% [markdown]
# # How errors shrink with the number of carriers
#
# Bits one at a time: N**-0.5. Bits together as a counter: 2**(-N/2).
# Qubits one at a time on the coupling ladder: 2**-N.

# %%
from qubitfield import scaling_study

for protocol, ns in (
    ("classical", [30, 120, 480, 1920]),
    ("method-i", [64, 256, 1024]),
    ("counter", [10, 20, 30, 40]),
    ("method-ii", [10, 16, 22, 28]),
):
    res = scaling_study(protocol, ns, trials=4000, seed=1, workers=4)
    print(f"== {protocol}")
    print(res.table())
