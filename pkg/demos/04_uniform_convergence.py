"""Train/test gap of exact ERM shrinks roughly like 1/sqrt(m).

A reduced version of the acceptance experiment (fewer trials) so it runs in
seconds; pass --full for the 20-trial, m up to 512 setting.
"""

import sys
from fractions import Fraction

from gdtune import GDConfig, InstanceDistribution, uniform_convergence_experiment

full = "--full" in sys.argv
dist = InstanceDistribution("scalar_quadratic", {"curvature": ["1/2", "2"]}, seed=7)
cfg = GDConfig(H=5, theta=Fraction(1, 10), domain=(0, 2))
ms = [8, 32, 128, 512] if full else [8, 32, 128]
rep = uniform_convergence_experiment(dist, ms, trials=20 if full else 5, cfg=cfg, seed=1)

for m, gap in rep.median_sup_gap().items():
    print(f"m = {m:4d}: median sup-gap {gap:.4f}")
print(f"log-log slope {rep.loglog_slope():.3f} (1/sqrt(m) would be -0.5)")
print(rep.to_csv().splitlines()[0])
