"""Tune a per-step schedule by exact coordinate descent, and momentum over a grid."""

from fractions import Fraction

from gdtune import (GDConfig, InstanceDistribution, momentum_grid_tune, sample_instances,
                    schedule_coordinate_descent)

dist = InstanceDistribution("scalar_quadratic", {"curvature": ["1/2", "2"]}, seed=3)
sample = sample_instances(dist, m=8, seed=0)

cfg = GDConfig(H=3, theta=Fraction(1, 10), domain=(0, 2))
res = schedule_coordinate_descent(sample, cfg, sweeps=2, init_schedule=[Fraction(1, 4)] * 3)
print("schedule:", [f"{float(v):.4f}" for v in res.schedule])
print("mean cost after each coordinate update:", [str(c) for c in res.costs])

cfg = GDConfig(H=6, theta=Fraction(1, 10), domain=(0, 2))
mom = momentum_grid_tune(sample, cfg, [0, Fraction(1, 4), Fraction(1, 2)])
for g, e in mom.per_gamma.items():
    print(f"gamma {g}: eta_hat ~ {float(e.eta_hat):.4f}, mean cost {e.train_mean_cost}")
print(f"best: gamma {mom.gamma}, mean cost {mom.mean_cost}")
