"""Exact step-size dual of gradient descent on x^2/2, checked against float GD.

Every breakpoint is an algebraic number 1 -+ 10^(-1/(i-1)); the script prints
each cell, the defining polynomial of each breakpoint, and a grid comparison
against plain floating-point runs.
"""

from fractions import Fraction

from gdtune import GDConfig, PwPolyObjective, StepSize, MultiPoly, oracle_compare, trace_stepsize

x = MultiPoly.variable(0, 1)
f = PwPolyObjective.polynomial(x * x * Fraction(1, 2))
cfg = GDConfig(H=5, theta=Fraction(1, 10), domain=(0, 2))

dual = trace_stepsize(f, [1], cfg)
print(f"{dual.n_pieces} cells")
for (a, b), cost in zip(dual.cell_endpoints(), dual.values):
    print(f"  eta in ({float(a):.6f}, {float(b):.6f}): {cost} iterations")
for b in dual.breakpoints:
    print(f"  breakpoint {float(b):.10f} is a root of {b.defining}")

rep = oracle_compare(dual, f, StepSize((1,)), cfg, grid=10_000)
print(f"float oracle: {rep.checked} grid points checked, {len(rep.mismatches)} mismatches")
print("per-round iterate degrees:", [r.max_degree for r in dual.stats.rounds])
