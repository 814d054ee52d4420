"""Smooth (sigmoid) networks are not polynomial, so their dual is estimated numerically.

Grid evaluation plus bisection localizes every detected jump; the count is
compared with the Pfaffian piece-count shape value.
"""

import warnings
from fractions import Fraction

from gdtune import BoundQuery, GDConfig, NonFiniteIterate, StepSize, bounds_calculator, gen_net_mse, numeric_dual

data = [((Fraction(1, 2),), (Fraction(1, 4),)), ((-1,), (Fraction(3, 4),))]
f = gen_net_mse([1, 2, 1], "sigmoid", data, free_weights=[0, 1, 2, 3])
cfg = GDConfig(H=10, theta=Fraction(1, 10), domain=(0, 8))

with warnings.catch_warnings():
    warnings.simplefilter("ignore", NonFiniteIterate)
    nd = numeric_dual(f, StepSize((Fraction(1, 2), Fraction(-1, 2), 1, 1)), cfg, grid=10_000)
print(f"{nd.n_jumps} jumps detected; cost values {sorted(set(nd.values))}")
for b, v in list(zip(nd.breakpoints, nd.values[1:]))[:8]:
    print(f"  jump near eta = {b:.8f} -> cost {v}")
bound = bounds_calculator(BoundQuery("pieces_pfaffian", q=1, d=4, H=10, Delta=2, M=2))
print(f"Pfaffian shape value: log = {bound.log_value:.1f}")
