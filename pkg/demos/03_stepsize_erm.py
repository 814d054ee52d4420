"""Learn a step size from a sample of random quadratics by exact ERM.

The mean of the per-instance duals is again piecewise constant; its leftmost
minimizing cell is found exactly and a rational point inside it is returned.
"""

from fractions import Fraction

from gdtune import GDConfig, InstanceDistribution, erm_stepsize, sample_instances, trace_stepsize

dist = InstanceDistribution("scalar_quadratic", {"curvature": ["1/2", "2"]}, seed=7)
cfg = GDConfig(H=5, theta=Fraction(1, 10), domain=(0, 2))

sample = sample_instances(dist, m=32, seed=0)
duals = [trace_stepsize(inst.objective, inst.x0, cfg) for inst in sample]
erm = erm_stepsize(duals)
print(f"m = {erm.m}, merged breakpoints = {erm.n_breakpoints}")
print(f"eta_hat ~ {float(erm.eta_hat):.6f} in cell ({float(erm.cell[0]):.6f}, {float(erm.cell[1]):.6f})")
print(f"mean iterations at eta_hat: {erm.train_mean_cost} ~ {float(erm.train_mean_cost):.4f}")
