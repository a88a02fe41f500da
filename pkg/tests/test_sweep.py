import numpy as np
from hypothesis import given, settings, strategies as st

from tiltgen import sweep
from tiltgen.cohomology import h_toric_oracle
from tiltgen.geometry import hirzebruch_fan, rank7_toric_preset, torus_fixed_b3


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 6), st.lists(st.lists(st.integers(-4, 4), min_size=4, max_size=4), min_size=1, max_size=8))
def test_batch_oracle_matches_single_oracle(m, rows):
    fan = hirzebruch_fan(m)
    got = sweep.oracle_batch(np.array(fan.rays), np.array(rows))
    for a, h in zip(rows, got):
        assert tuple(h) == h_toric_oracle(fan, a).h


def test_batch_oracle_rank7_rows():
    fan = rank7_toric_preset().fan
    rng = np.random.default_rng(3)
    A = rng.integers(-3, 4, size=(50, len(fan.rays)))
    got = sweep.oracle_batch(np.array(fan.rays), A)
    for a, h in zip(A, got):
        assert tuple(h) == h_toric_oracle(fan, a.tolist()).h


def test_index_round_trip():
    rng = np.random.default_rng(0)
    D = rng.integers(-3, 4, size=(100, 5))
    idx = sweep._index(D, 3, 7)
    assert (sweep._unindex(idx, 3, 7, 5) == D).all()


def test_small_sweeps_are_clean():
    res = sweep.sweep_blowup_model(torus_fixed_b3(), 2, "B3")
    assert res.ok and res.checked == 5 ** 4
    assert res.serre_pairs > 0
    res = sweep.sweep_hirzebruch(3, 4)
    assert res.ok and res.checked == 81
    assert "0 discrepancies" in res.summary()


def test_sweep_detects_a_corrupted_engine(monkeypatch):
    real = sweep._h0_cached

    def off_by_one(config, d, orders):
        return real(config, d, orders) + (1 if d == 2 and sum(orders) == 0 else 0)

    monkeypatch.setattr(sweep, "_h0_cached", off_by_one)
    res = sweep.sweep_blowup_model(torus_fixed_b3(), 2, "B3")
    assert res.n_discrepancies > 0
    assert not res.ok
