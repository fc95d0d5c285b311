"""The harmonic accuracy/size metric and its weighted variant.

M = 2*A*S' / (A + S') with S' = p_min / P rewards architectures that are
simultaneously accurate and small; either quality alone is not enough. The
weighted form M_alpha slides between pure accuracy (alpha = 0) and pure
size (alpha -> infinity).
"""

import numpy as np

from mfnas import m_alpha, m_factor, netscore, p_min, s_prime

P_MIN = p_min()

# A model 10% larger than the smallest gives up very little S'.
for params in (272_474, 284_762, 301_146, 544_948):
    s = s_prime(params, P_MIN)
    print(f"P={params:>7,}  S'={s:.4f}  M(A=0.75)={m_factor(0.75, s):.4f}")

# The harmonic mean punishes imbalance: a large accurate model scores below
# both its accuracy and the arithmetic mean.
a, s = 0.9, 0.4
print(f"\nA={a}, S'={s}: harmonic {m_factor(a, s):.4f} "
      f"vs arithmetic {(a + s) / 2:.4f} vs geometric {np.sqrt(a * s):.4f}")

# Sweeping alpha shifts the emphasis continuously.
print(f"\nalpha sweep (A={a}, S'={s}):")
for alpha in (0.0, 0.25, 1.0, 4.0, 1e6):
    print(f"  alpha={alpha:>9g}  M_alpha={m_alpha(a, s, alpha):.5f}")

# For comparison, the log-domain composite over accuracy, params and MACs:
print(f"\nnetscore(A=0.9, P=272,474, MACs=40.8M) = "
      f"{netscore(0.9, 272_474, 40_813_184):.2f}")
