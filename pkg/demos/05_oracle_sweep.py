"""
Checking the engines against the toric oracle
=============================================

The interpolation engine on a blow-up model and the Cech oracle on the fan
must agree class by class.
"""
import time

import numpy as np

from tiltgen.geometry import rank7_toric_preset, torus_fixed_b3
from tiltgen.sweep import oracle_batch, sweep_blowup_model, sweep_hirzebruch

model = rank7_toric_preset()
print("rays:", model.fan.rays)
print("self-intersections:", model.fan.self_intersections())

# The batch kernel takes ray-coefficient rows.
A = np.array([[0] * 9, [-1] * 9, [1, 0, 0, 0, 0, 0, 0, 0, 2]])
print(oracle_batch(np.array(model.fan.rays), A))

# %%
# Small sweeps finish instantly; the acceptance run uses radius 5 everywhere.
for res in (sweep_hirzebruch(4, 5), sweep_blowup_model(torus_fixed_b3(), 4, "B3")):
    print(res.summary())

start = time.perf_counter()
res = sweep_blowup_model(model, 2, "rank7")
print(res.summary(), f"({time.perf_counter() - start:.1f}s)")
