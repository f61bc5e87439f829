"""
Optimised sequences against UDD
===============================

With a sharp ohmic cutoff at ``omega_c = 5`` and ``t = 1``, solving the
stationarity conditions gives sequences whose dephasing integral falls
well below that of UDD as the pulse count grows.
"""
# %%
from ddopt import I_quadrature, solve_hlodd, udd

print(' n        I_udd      I_optimal      ratio   verified')
for n in range(1, 11):
    res = solve_hlodd(n, 5.0)
    i_udd = I_quadrature(udd(n), 5.0).value
    print(f'{n:2d}  {i_udd:11.4e}  {res.objective.value:11.4e}  {i_udd / res.objective.value:9.1f}'
          f'   {res.minimum_verified}')

# %%
# Continuation path
# -----------------
# The solve starts from UDD at a small cutoff, where UDD is already
# nearly optimal, and warm-starts each larger cutoff from the last.
res = solve_hlodd(3, 8.0)
for z_c, seq in res.path:
    print(f'z_c={z_c:4.1f}  {seq.deltas.round(5)}')

# %%
# At small cutoffs the optimum is UDD up to small corrections.
small = solve_hlodd(5, 1.0)
print('n=5, z_c=1 deviation from UDD:', abs(small.sequence.deltas - udd(5).deltas).max())
