# %% [markdown]
# # From one parity bit to all the digits
#
# With the coupling tuned so that I = alpha is half a turn, one qubit tells
# whether m in I = m alpha is even or odd. Halving the coupling at each next
# qubit, and undoing the digits already known, reads m one binary digit at a time.

# %%
from qubitfield import QuantumConfig, RngStream, gh_parity, run_method_II
from qubitfield.field import MagnitudeScale

alpha = 0.25
rng = RngStream(0)
for m in range(5):
    print(m, gh_parity(m * alpha, alpha, rng).value)

# %%
# Reading m = 45 with 8 qubits: every step is certain.
cfg = QuantumConfig(alpha, 8, scale=MagnitudeScale(5.0))
r = run_method_II(45 * alpha, cfg, rng)
print("digits (least significant first):", r.digits, "-> m =", r.m_hat)
for s in r.steps:
    print(f"  step {s.k}: correction {s.theta_corr:+.4f} rad, P(flip) = {s.p_minus:.3f}")

# %%
# Off the lattice the readout is random but stays close.
r = run_method_II(45.3 * alpha, cfg, rng)
print(f"I = {45.3 * alpha}, read {r.i_tilde} (error {r.i_tilde - 45.3 * alpha:+.4f}, alpha = {alpha})")
