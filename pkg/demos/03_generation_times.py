"""
Generation times of the standard collections
============================================

dim X + i0, where i0 is the top degree of Ext(E_a, E_b (x) omega-dual).
"""
from tiltgen.presets import collinear_b3, general_blowup, rank7_collection, t1, t2, t3
from tiltgen.tilting import generation_time_report, zero_pairing_classes

print("T1 = O, O(E_i), O(H), O(2H)")
for t in range(6):
    r = generation_time_report(t1(general_blowup(t)), with_pullback=False)
    print(f"  B{t}: i0 = {r.i0}, generation time {r.generation_time}")
r = generation_time_report(t1(collinear_b3()), with_pullback=False)
print(f"  B3 collinear: i0 = {r.i0}, generation time {r.generation_time}")

print("T2 = O, O(H), O(2H), O_E_i")
for t in range(1, 6):
    r = generation_time_report(t2(general_blowup(t)), with_pullback=False)
    print(f"  B{t}: generation time {r.generation_time}, strongly cyclic {r.strongly_cyclic}")

# %%
# Two Picard-rank-7 collections: six general points, and the toric surface
# with two infinitely near centers.
for name, C in (("del Pezzo", t3()), ("toric", rank7_collection())):
    r = generation_time_report(C)
    L = C.space.lattice
    print(f"{name}: generation time {r.generation_time}, cyclic {r.strongly_cyclic}, "
          f"pullback {r.pullback.status} ({r.pullback.certificate})")
    print("  classes orthogonal to K:", [L.format(D) for D in zero_pairing_classes(C)])
