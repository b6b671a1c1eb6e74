# %% [markdown]
# # Classical bits
#
# Each bit crosses the field alone and flips with probability 1 - exp(-lam I).
# After N bits the flip fraction is inverted by maximum likelihood. How good can
# that get with 30 bits when the integral is about M = 5?

# %%
import numpy as np

from qubitfield import ClassicalConfig, RngStream, estimate_integral, optimize_lambda, simulate_bits, uncertainty

M, N = 5.0, 30
cfg = ClassicalConfig.default(M, N)  # lam = 1.2 / M
print(f"lambda = {cfg.lam}")

# %%
# One run at I = pi.
flips = simulate_bits(np.pi, cfg, RngStream(1))
est = estimate_integral(flips, cfg)
print(f"{flips} of {N} flipped -> I_hat = {est.i_hat:.4f} (true {np.pi:.4f})")

# %%
# The predicted spread at I = M, and where the coupling is actually best.
lam_opt = optimize_lambda(M, N)
print(f"uncertainty at lam = 1.2/M : {uncertainty(M, cfg.lam, N):.4f}")
print(f"uncertainty at lam*        : {uncertainty(M, lam_opt, N):.4f}  (lam* M = {lam_opt * M:.4f})")

# %%
# Monte Carlo check of that spread.
errors = [estimate_integral(simulate_bits(M, cfg, RngStream(7).substream(t)), cfg).i_hat - M for t in range(20_000)]
print(f"empirical rms error at I = M: {np.sqrt(np.mean(np.square(errors))):.4f}")
