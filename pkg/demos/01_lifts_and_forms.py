"""
Lifts, pair forms and the matrix P
==================================

Walk through the construction for two and three points by hand.
"""

import numpy as np

from atiyah_lab import geometry as g
from atiyah_lab.core import build_matrix, evaluate

# A direction (a, v) in R x C lifts to a spinor (z, w) with hopf(z, w) = (a, v)
a, v = 0.3, complex(-1.2, 0.5)
s = g.standard_lift(a, v)
print("lift           ", s.z, s.w)
print("hopf(lift)     ", g.hopf(s), " expected", (a, v))

# Two points: the ratio |det P| / bound is exactly 1
c = g.Configuration([(0.0, 0), (a, v)])
print("P for N=2\n", build_matrix(c))
print("ratio N=2      ", evaluate(c).ratio)

# Three points on a vertical line give a diagonal P and ratio 1
c = g.Configuration([(0.0, 0), (1.0, 0), (2.0, 0)])
print("P collinear\n", build_matrix(c).real)
print("ratio          ", evaluate(c).ratio)

# A generic triangle sits strictly above the bound
c = g.Configuration([(0.0, 0), (0.0, 1), (0.0, np.exp(2j * np.pi / 3))])
print("ratio triangle ", evaluate(c).ratio)
