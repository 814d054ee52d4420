"""Empirical pseudo-dimension of step-size duals next to the theoretical shape values."""

from fractions import Fraction

from gdtune import BoundQuery, GDConfig, bounds_calculator, empirical_pdim_lower_bound, trace_stepsize
from gdtune.objective import PwPolyObjective
from gdtune.polynomials import MultiPoly

x = MultiPoly.variable(0, 1)
cfg = GDConfig(H=8, theta=Fraction(1, 10), domain=(0, 2))
duals = [trace_stepsize(PwPolyObjective.polynomial(x * x * Fraction(c, 2)), [1], cfg)
         for c in (1, 3, 5)]
print("pseudo-shattered subset size:", empirical_pdim_lower_bound(duals, m_max=3))

for q in (BoundQuery("pieces_poly", H=8, Delta=2),
          BoundQuery("pdim_pieces", N=max(d.n_pieces for d in duals)),
          BoundQuery("stepsize_poly", H=10, eps=Fraction(1, 10), delta=Fraction(1, 100), Delta=3),
          BoundQuery("warren", degree=2, s=3, n=1)):
    r = bounds_calculator(q)
    print(f"{r.regime:>14}: {r.value:.6g}   {r.formula}   ({r.label})")
