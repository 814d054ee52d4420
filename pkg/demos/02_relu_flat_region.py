"""A one-weight ReLU network: large steps jump into the flat region and "converge" there.

For eta > 1 the second iterate 2 - 2 eta is negative, the loss is the constant 1,
the gradient vanishes and descent stops after two iterations. The validation
dual shows the price: the returned weight has loss (1 - 2 eta)^2.
"""

from fractions import Fraction

from gdtune import GDConfig, PwPolyObjective, gen_net_mse, pwpoly_min, trace_stepsize, trace_validation
from gdtune.polynomials import MultiPoly

w = MultiPoly.variable(0, 1)
f = gen_net_mse([1, 1], "relu", [((1,), (1,))], free_weights=[0], frozen_weight_values=[1])
print("boundaries:", f.boundaries, " pieces:", {s: f.piece(s) for s in f.all_sign_vectors()})

cfg = GDConfig(H=5, theta=Fraction(1, 10), domain=(0, Fraction(3, 2)))
dual = trace_stepsize(f, [2], cfg)
for (a, b), cost in zip(dual.cell_endpoints(), dual.values):
    print(f"  eta in ({float(a):.5f}, {float(b):.5f}): cost {cost}")

vdual = trace_validation(f, PwPolyObjective.polynomial((w - 1) ** 2), [2], cfg)
print("validation loss on the flat region:", vdual.piece_at(Fraction(5, 4)))
best = pwpoly_min(vdual)
print(f"best validation loss {best.value} at eta = {best.location}")
