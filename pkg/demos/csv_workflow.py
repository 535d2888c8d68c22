"""
Intervals for your own table
============================

Any headered numeric CSV works. Here one is written first so the script is
self-contained. The same steps run from the shell as

    pi3nn run --csv demo_table.csv --target y --gammas 0.9,0.95 --out demo_run
"""

import numpy as np

import pi3nn
from pi3nn.data import Dataset, save_csv

rng = np.random.default_rng(0)
x = rng.uniform(-2, 2, size=(600, 3))
y = np.sin(x[:, 0]) + 0.5 * x[:, 1] * x[:, 2] + (0.1 + 0.2 * np.abs(x[:, 0])) * rng.normal(size=600)
save_csv(Dataset(x, y, ["a", "b", "c"]), "demo_table.csv")

data = pi3nn.load_csv("demo_table.csv", "y")
train, test = pi3nn.split(data, test_fraction=0.1, seed=0)

triplet = pi3nn.fit(train, pi3nn.MlpSpec(train.d, l1=0.02, l2=0.02), pi3nn.TrainConfig(epochs=800))
sols = pi3nn.solve_gammas(triplet, train, [0.9, 0.95])
for band in pi3nn.predict_intervals(triplet, sols, test.x):
    report = pi3nn.coverage_report(band, test.y)
    print(f"gamma={report.gamma}: PICP={report.picp:.3f} MPIW={report.mpiw:.3f} (n={report.n})")

triplet.save("demo_triplet.json")
reloaded = pi3nn.TrainedTriplet.load("demo_triplet.json")
assert pi3nn.solve_gammas(reloaded, train, [0.9]) == sols[:1]
