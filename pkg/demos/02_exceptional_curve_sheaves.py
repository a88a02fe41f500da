"""
Ext groups with sheaves on exceptional curves
=============================================

O_E(k) lives on a (-1)-curve E = P^1.  Its Ext groups with line bundles and
with itself come from cohomology on P^1.
"""
from tiltgen.presets import general_blowup
from tiltgen.sheaves import ExceptionalTwist, LineBundle, ext_dims, twist

X = general_blowup(2)
L = X.lattice
K = L.canonical
O_E1 = ExceptionalTwist(1)

# Tensoring by the anticanonical bundle raises the degree on E by one.
print("O_E1 (x) omega-dual =", twist(O_E1, -K))

pairs = [
    ("Ext(O, O_E1)", LineBundle(L.zero()), O_E1),
    ("Ext(O_E1, O(-E1))", O_E1, LineBundle(L.parse("-E1"))),
    ("Ext(O_E1, O_E1)", O_E1, O_E1),
    ("Ext(O_E1, O_E1 (x) omega-dual)", O_E1, twist(O_E1, -K)),
    ("Ext(O(2H), O_E1 (x) omega-dual)", LineBundle(L.parse("2H")), twist(O_E1, -K)),
    ("Ext(O_E1, O_E2)", O_E1, ExceptionalTwist(2)),
]
for name, A, B in pairs:
    print(f"{name:36s} {ext_dims(X, A, B).h}")

# %%
# The degree-one group against omega-dual is what keeps T2 from having i0 = 0.
