import numpy as np
import pytest

from shiftaut import kernels
from shiftaut.fixtures import toy_belt

BACKENDS = kernels.backends()
rng = np.random.default_rng(7)


def test_compiled_backend_selected():
    # the extension is built by the editable install; the fallback must still exist
    assert "python" in BACKENDS
    if "cython" in BACKENDS:
        assert kernels.BACKEND == "cython"


def agree(name, *args):
    outs = [getattr(mod, name)(*args) for mod in BACKENDS.values()]
    for other in outs[1:]:
        if isinstance(other, tuple):
            for a, b in zip(outs[0], other):
                np.testing.assert_array_equal(a, b)
        else:
            np.testing.assert_array_equal(outs[0], other)
    return outs[0]


@pytest.mark.parametrize("base", [2, 3])
def test_lookup_rows(base):
    rows = rng.integers(0, base, size=(500, 9), dtype=np.int32)
    nbr = rng.integers(0, 9, size=(4, 3), dtype=np.int32)
    table = rng.integers(0, base, size=base**3, dtype=np.int32)
    out = agree("lookup_rows", rows, nbr, table, base)
    j = 2
    codes = rows[:, nbr[j, 0]] * base * base + rows[:, nbr[j, 1]] * base + rows[:, nbr[j, 2]]
    np.testing.assert_array_equal(out[:, j], table[codes])


def test_match_placements():
    rows = rng.integers(0, 2, size=(400, 8), dtype=np.int32)
    cols = rng.integers(-1, 8, size=(6, 3), dtype=np.int32)
    vals = rng.integers(0, 2, size=(6, 3), dtype=np.int32)
    out = agree("match_placements", rows, cols, vals)
    for i in range(20):
        want = -1
        for q in range(6):
            if all(c < 0 or rows[i, c] == v for c, v in zip(cols[q], vals[q])):
                want = q
                break
        assert out[i] == want


def test_overlap_free():
    rows = rng.integers(0, 2, size=(300, 6), dtype=np.int32)
    pa = np.array([0, 1, 2, 3, 4], dtype=np.int32)
    pb = np.array([1, 2, 3, 4, 5], dtype=np.int32)
    ptr = np.array([0, 2, 5], dtype=np.int32)
    out = agree("overlap_free", rows, pa, pb, ptr)
    want = (np.any(rows[:, [0, 1]] != rows[:, [1, 2]], axis=1)) & np.any(rows[:, [2, 3, 4]] != rows[:, [3, 4, 5]], axis=1)
    np.testing.assert_array_equal(out.astype(bool), want)


def test_overlap_free_empty_group_is_false():
    rows = np.zeros((3, 2), dtype=np.int32)
    ptr = np.array([0, 0], dtype=np.int32)
    empty = np.zeros(0, dtype=np.int32)
    out = agree("overlap_free", rows, empty, empty, ptr)
    assert not out.any()


@pytest.mark.parametrize("forward", [True, False])
def test_belt_walk(forward):
    belt = toy_belt()
    arr = belt.arrays()
    n = 12
    syms = rng.integers(0, len(belt.alphabet), size=(300, n), dtype=np.int32)
    codes = arr["code"][syms]
    nbr = belt.neighbours(list(range(n)))
    pos = rng.integers(0, n, size=300, dtype=np.int32)
    trk = rng.integers(0, 2, size=300, dtype=np.int32)
    agree("belt_walk", codes, nbr, arr["inv_s"], arr["back"], arr["fwd"], pos, trk, 5, forward)


def test_belt_walk_round_trip():
    belt = toy_belt()
    arr = belt.arrays()
    n = 10
    codes = arr["code"][rng.integers(0, len(belt.alphabet), size=(200, n), dtype=np.int32)]
    nbr = belt.neighbours(list(range(n)))
    pos = rng.integers(0, n, size=200, dtype=np.int32)
    trk = rng.integers(0, 2, size=200, dtype=np.int32)
    p1, t1 = kernels.belt_walk(codes, nbr, arr["inv_s"], arr["back"], arr["fwd"], pos, trk, 3, True)
    live = p1 >= 0
    p2, t2 = kernels.belt_walk(codes[live], nbr, arr["inv_s"], arr["back"], arr["fwd"], p1[live], t1[live], 3, False)
    np.testing.assert_array_equal(p2, pos[live])
    np.testing.assert_array_equal(t2, trk[live])


def test_orbit_labels():
    nxt = np.array([[1, 2, 0, -1, 3], [4, 3, -1, 1, 0]], dtype=np.int32)
    out = agree("orbit_labels", nxt)
    np.testing.assert_array_equal(out, [[0, 0, 0, 3, 3], [0, 1, 2, 1, 0]])


def test_fallback_selected_by_environment():
    import os
    import subprocess
    import sys

    env = dict(os.environ, SHIFTAUT_PURE_PYTHON="1")
    code = "from shiftaut import kernels, acceptance; print(kernels.BACKEND, acceptance.c01_marker_oracle().verdict)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["python", "pass"]
