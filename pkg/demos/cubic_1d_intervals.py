"""
Nested prediction intervals on a skewed 1-D cubic
=================================================

Targets are ``x**3`` plus noise that is three times wider above the curve
than below it. One fit gives bands for several confidence levels, and the
bands never cross.
"""

import numpy as np

import pi3nn
from pi3nn import nnet

train, test = pi3nn.gen_cubic_1d(n_train=2000, n_test=2000, seed=0)
_, same_range = pi3nn.gen_cubic_1d(2000, 2000, test_range=(-4, 4), seed=1)

# %%
# Train once. The three networks share one architecture spec.
triplet = pi3nn.fit(train, pi3nn.MlpSpec(1), pi3nn.TrainConfig(epochs=1000))
print("median shift nu (normalised units):", triplet.nu)

# %%
# Several confidence levels, no retraining.
gammas = [0.9, 0.95, 0.99]
sols = pi3nn.solve_gammas(triplet, train, gammas)
for s in sols:
    print(f"gamma={s.gamma}: alpha={s.alpha:.3f} beta={s.beta:.3f}")

# %%
# On the training set the coverage is exact by construction; on fresh data
# from the same range it should land close to gamma.
for band, s in zip(pi3nn.predict_intervals(triplet, sols, same_range.x), sols):
    print(f"gamma={s.gamma}: test PICP={pi3nn.picp(band, same_range.y):.3f}  MPIW={pi3nn.mpiw(band):.1f}")

# %%
# The upper scale network should have learned the wider positive noise.
xn = triplet.norm.transform_x(train.x)
print("mean u / mean l:", nnet.mean_output(triplet.u, xn) / nnet.mean_output(triplet.l, xn))

# %%
# Bands on a grid covering the extrapolation region, ready for plotting.
grid = np.linspace(-7, 7, 300)
bands = pi3nn.predict_intervals(triplet, sols, grid[:, None])
for lo, hi in zip(bands, bands[1:]):
    assert np.all(hi.upper >= lo.upper) and np.all(hi.lower <= lo.lower)
bands[1].to_csv("cubic_1d_band_95.csv", grid[:, None], ["x"])

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.scatter(train.x[:, 0], train.y, s=2, c="0.6", label="train")
    for band in reversed(bands):
        ax.fill_between(grid, band.lower, band.upper, alpha=0.25, label=f"{band.gamma:.0%}")
    ax.plot(grid, bands[0].point_median, "k", lw=1)
    ax.legend()
    fig.savefig("cubic_1d_intervals.png", dpi=120)
