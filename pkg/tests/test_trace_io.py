import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slekit.sle_core import (
    Trace,
    TraceFormatError,
    from_bytes,
    from_csv,
    load_binary,
    sample_driving,
    save_binary,
    to_bytes,
    to_csv,
    trace_from_driving,
)

finite = st.floats(-1e300, 1e300, allow_nan=False)


def _trace():
    return trace_from_driving(sample_driving(2.5, 1.0, 0.01, seed=2**64 - 1), method="zipper")


def test_binary_round_trip_exact(tmp_path):
    tr = _trace()
    p = tmp_path / "t.bin"
    save_binary(tr, p)
    back = load_binary(p)
    assert back == tr
    assert back.seed == 2**64 - 1
    assert not list(tmp_path.glob("*.tmp"))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(finite, finite), min_size=1, max_size=30), st.integers(0, 2**64 - 1))
def test_binary_round_trip_property(xy, seed):
    pts = np.array([complex(a, b) for a, b in xy])
    tr = Trace(points=pts, times=np.arange(len(pts)) * 0.1, kappa=1.5, dt=0.1, seed=seed,
               horizon=0.1 * len(pts), scale=3.0, rotation=0.25)
    assert from_bytes(to_bytes(tr)) == tr


def test_binary_layout():
    tr = _trace()
    buf = to_bytes(tr)
    assert buf[:8] == b"SLETRC01"
    # header 8 + 3 doubles + 2 uint64 + 2 doubles, then xy pairs and times
    assert len(buf) == 64 + 24 * len(tr)
    xy = np.frombuffer(buf, "<f8", count=2 * len(tr), offset=64)
    assert np.array_equal(xy[0::2], tr.points.real)


def test_binary_rejects_garbage():
    buf = to_bytes(_trace())
    with pytest.raises(TraceFormatError):
        from_bytes(b"XXXXXXXX" + buf[8:])
    with pytest.raises(TraceFormatError):
        from_bytes(buf[:-8])
    with pytest.raises(TraceFormatError):
        from_bytes(buf[:10])


def test_csv_round_trip():
    tr = _trace()
    text = to_csv(tr)
    assert text.splitlines()[0] == "t,re,im"
    back = from_csv(text, kappa=tr.kappa, dt=tr.dt, seed=tr.seed)
    assert np.array_equal(back.points, tr.points)
    assert np.array_equal(back.times, tr.times)


def test_csv_bad_header():
    with pytest.raises(TraceFormatError):
        from_csv("a,b,c\n1,2,3\n")


def test_trace_validation_and_read_only():
    with pytest.raises(ValueError):
        Trace(points=np.zeros(3, complex), times=np.zeros(2), kappa=1, dt=1, seed=0, horizon=1)
    with pytest.raises(ValueError):
        Trace(points=np.zeros(0, complex), times=np.zeros(0), kappa=1, dt=1, seed=0, horizon=1)
    tr = _trace()
    with pytest.raises(ValueError):
        tr.points[0] = 0
