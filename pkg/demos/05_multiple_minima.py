"""
Several local minima at large cutoffs
=====================================

At large ``z_c`` the objective has more than one basin. Seeded
restarts from perturbed UDD starts find them, and each is checked for
local minimality.
"""
# %%
from ddopt import multistart, solve_hlodd

for n, z_c in ((1, 20.0), (2, 20.0), (3, 5.0)):
    rep = multistart(n, z_c, starts=8, seed=0)
    print(f'n={n} z_c={z_c}: {rep.distinct_minima} distinct minima')
    for cl in rep.clusters:
        print(f'    I={cl["value"]:.8f}  runs={len(cl["members"])}  verified={cl["verified"]}'
              f'  deltas={[round(d, 5) for d in cl["deltas"]]}')
    print(f'    continuation result: I={solve_hlodd(n, z_c).objective.value:.8f}')

# %%
# The continuation branch and the perturbed-UDD starts need not land in
# the same basin. At ``n = 2, z_c = 20`` continuation reaches a lower
# minimum than any of the eight restarts, so neither route alone is a
# global search.
