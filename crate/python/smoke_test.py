"""Smoke test for the u21 extension module.

Build and install with
    pip install --no-build-isolation -e crates/py
then run
    python python/smoke_test.py
"""

import os
import tempfile

import u21


def main():
    g = u21.UnitaryGroup(3, 3)
    assert g.order() == 24192
    assert g.enumerate_order() == 24192
    assert g.num_flags() == 28

    m = u21.UnitaryGroup(3, 2).induce(ell=2)
    assert m.dim == 4 and m.field == (2, 1)
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "ps.fmod")
        m.write(path)
        back = u21.Module.read(path)
    assert back.to_fmod() == m.to_fmod()

    rep = m.socle_series(seed=7)
    assert rep["seed"] == 7
    assert rep["uniserial"]
    assert [f["dim"] for f in rep["factors"]] == [1, 2]

    h = u21.hecke_characters(3, a=3, ell=2)
    assert h["count"] == 1

    fin = u21.classify_finite(3, 7, rank=3)
    assert fin["length"] == 3

    try:
        u21.classify_finite(5, 3, rank=3)
    except u21.UnsupportedCase:
        pass
    else:
        raise AssertionError("expected UnsupportedCase")

    pad = u21.classify_padic(3, 2, "trivial")
    assert pad["length"] == 6

    print("smoke test passed")


if __name__ == "__main__":
    main()
