"""
Filter functions and the ohmic dephasing objective
==================================================

A pulse sequence is a set of fractional times in (0, 1). Its filter
function ``y(z)`` decides how much low-frequency noise leaks through,
and the objective ``I_n(z_c)`` integrates ``|y|^2 / z`` up to the
dimensionless cutoff ``z_c = omega_c * t``.
"""
# %%
# Baseline sequences
# ------------------
import numpy as np

from ddopt import I_quadrature, I_series, filter_value, make_sequence, pdd, udd
from ddopt.sequences import empty

for n in (1, 2, 3, 4):
    print(f'n={n}  UDD {np.round(udd(n).deltas, 4)}  PDD {np.round(pdd(n).deltas, 4)}')

# %%
# The filter function vanishes at zero frequency for every sequence and
# grows like z**2 nearby. UDD pushes that zero to higher order.
for z in (0.0, 0.1, 1.0, np.pi):
    row = '  '.join(f'{name}={filter_value(seq, z).magnitude_squared:.3e}'
                    for name, seq in (('free', empty()), ('PDD4', pdd(4)), ('UDD4', udd(4))))
    print(f'z={z:5.3f}  {row}')

# %%
# Two independent evaluations of the objective
# --------------------------------------------
# Adaptive Gauss-Kronrod quadrature and the closed pair-sum with the
# entire cosine integral agree to rounding level.
seq = make_sequence([0.1, 0.45, 0.8])
for z_c in (0.5, 5.0, 20.0):
    q = I_quadrature(seq, z_c)
    s = I_series(seq, z_c)
    print(f'z_c={z_c:5.1f}  quadrature {q.value:.15g} (+-{q.error_estimate:.1e})'
          f'  series {s.value:.15g}')

# %%
# Free evolution has the closed form ``2 Cin(z_c)``.
print('free evolution, z_c=1:', I_quadrature(empty(), 1.0).value)
