"""
One pulse: when the midpoint stops being optimal
================================================

For a single pulse the midpoint ``delta = 1/2`` is stationary at every
cutoff, by symmetry. It is the minimum only while the curvature there is
positive. Past a critical cutoff it becomes a local maximum and the
optimum splits into a mirror pair of off-centre times.
"""
# %%
import numpy as np

from ddopt import I_series, hessian, make_sequence, solve_hlodd

mid = make_sequence([0.5])


def curvature(z_c):
    return hessian(mid, z_c)[0, 0]


# %%
# Locate the sign change of the curvature by bisection.
lo, hi = 1.0, 10.0
assert curvature(lo) > 0 > curvature(hi)
for _ in range(60):
    m = 0.5 * (lo + hi)
    lo, hi = (m, hi) if curvature(m) > 0 else (lo, m)
print(f'midpoint curvature changes sign at z_c = {lo:.6f}')

# %%
# Profiles of I_1(delta) on either side of the critical cutoff.
deltas = np.linspace(0.02, 0.98, 25)
for z_c in (2.0, 5.0):
    values = [I_series(make_sequence([d]), z_c).value for d in deltas]
    k = int(np.argmin(values))
    print(f'z_c={z_c}: lowest sampled I at delta={deltas[k]:.2f}, '
          f'I(0.5)={I_series(mid, z_c).value:.5f}, min sampled {values[k]:.5f}')

# %%
# The solver follows the minimum as the cutoff grows.
for z_c in (1.0, 4.0, 5.0, 20.0, 50.0):
    res = solve_hlodd(1, z_c)
    print(f'z_c={z_c:5.1f}  delta*={res.sequence.deltas[0]:.8f}  I={res.objective.value:.8f}'
          f'  verified={res.minimum_verified}')
