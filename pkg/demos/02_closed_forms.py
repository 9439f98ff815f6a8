"""
Points on two perpendicular lines
=================================

Compare det P of the line-pair configurations with their closed forms.
"""

import numpy as np

from atiyah_lab.closed_forms import (
    case_a_det,
    case_a_inequality,
    case_b_det,
    case_b_inequality_probe,
    case_lambdas,
    specialized_identity,
)
from atiyah_lab.core import build_matrix, log_determinant
from atiyah_lab.generators import case_a_config, case_b_config, dropped_scalar

a = np.array([-0.7, 0.1, 1.5])
lam = case_lambdas(a)
print("lambdas            ", lam)

c, policy = case_a_config(a)
abs_det = np.exp(log_determinant(build_matrix(c, policy))[0])
print("case A |det P|     ", abs_det)
print("S * closed form    ", dropped_scalar(a, [-1.0]) * case_a_det(lam))
ineq = case_a_inequality(lam)
print("case A lhs / rhs   ", ineq.lhs / ineq.rhs, "termwise", ineq.termwise)

c, policy = case_b_config(a)
abs_det = np.exp(log_determinant(build_matrix(c, policy))[0])
print("case B |det P|     ", abs_det)
print("S_B * 2pq          ", dropped_scalar(a, [-1.0, 1.0]) * case_b_det(lam).det)
print("case B p*q / rhs   ", case_b_inequality_probe(lam).slack)

# the equal-lambda identity on a grid
grid = np.linspace(0.01, 4, 400)
worst = max(specialized_identity(m, grid).residual.max() for m in range(1, 21))
print("identity residual  ", worst)
