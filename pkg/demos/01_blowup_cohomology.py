"""
Line bundles on blow-ups of the plane
=====================================

Cohomology of O(D) on P^2 blown up at a few points, and how it depends on
where the points are.
"""
from tiltgen.cohomology import h_line_bundle_surface
from tiltgen.lattice import euler_char_surface, intersect
from tiltgen.presets import collinear_b3, general_blowup

# Three general points and three points on a line give the same lattice.
general = general_blowup(3)
collinear = collinear_b3()
L = general.lattice
print("canonical class:", L.format(L.canonical))

# The strict transform of a line through all three points.
D = L.parse("H-E1-E2-E3")
print("D.D =", intersect(L, D, D), " D.K =", intersect(L, D, L.canonical),
      " chi =", euler_char_surface(L, D))

# chi vanishes either way, but the split into h^0 and h^1 does not.
print("general points:  h =", h_line_bundle_surface(general, D).h)
print("collinear points: h =", h_line_bundle_surface(collinear, D).h)

# %%
# Adding a fourth point pushes chi negative, so h^1 is forced.
B4 = general_blowup(4)
D4 = B4.lattice.parse("H-E1-E2-E3-E4")
print("B4:", B4.lattice.format(D4), "h =", h_line_bundle_surface(B4, D4).h)

# %%
# Past ten points the anticanonical class itself picks up h^1.
for t in (6, 9, 10, 11):
    X = general_blowup(t)
    print(f"B{t}: h(-K) =", h_line_bundle_surface(X, -X.lattice.canonical).h)
