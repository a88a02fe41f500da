"""
Projective bundles and weighted projective planes
=================================================

X_{m,n} = P(O + O(m)) over P^n, and the stacks P(w_0, ..., w_n).
"""
import numpy as np

from tiltgen.geometry import ProjectiveBundleSpace
from tiltgen.presets import hirzebruch_collection, quiver_f4, weighted_collection
from tiltgen.tilting import anticanonical_diagnostics, generation_time_report, hom_matrix

# Generation time across the grid: n + 1 until m reaches n + 2, then 2n + 1.
grid = np.array([[generation_time_report(hirzebruch_collection(m, n), with_pullback=False).generation_time
                  for n in range(1, 4)] for m in range(1, 7)])
print("rows m = 1..6, columns n = 1..3")
print(grid)

# Once m >= 2n + 2 the anticanonical bundle has cohomology in degree n.
for m, n in ((3, 1), (4, 1), (6, 2)):
    print(f"X_{m},{n}: h(-K) =", anticanonical_diagnostics(ProjectiveBundleSpace(m, n)).h)

# %%
# Full collections O, ..., O(sum w - 1) on weighted planes have i0 = 0.
for w in ((1, 1, 4), (1, 2, 3), (1, 1, 1, 5)):
    r = generation_time_report(weighted_collection(w), with_pullback=False)
    print(f"P{w}: i0 = {r.i0}, generation time {r.generation_time}")

# %%
# The same Hom table appears on P(1,1,4) and on F_4.
a, b = quiver_f4()
print(np.array(hom_matrix(a)))
print("equal on F_4:", hom_matrix(a) == hom_matrix(b))
