from __future__ import annotations

import mpmath
import pytest

mpmath.mp.dps = 50


def mp(v):
    """mpmath value of a HiPrecValue (or plain number)."""
    if hasattr(v, "hi"):
        return mpmath.mpf(v.hi) + mpmath.mpf(v.lo)
    return mpmath.mpf(v)


def rel(a, b):
    a, b = mp(a), mp(b)
    return float(abs(a - b) / abs(b)) if b != 0 else float(abs(a - b))


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("XDG_CACHE_HOME", str(tmp_path / "xdg"))
    monkeypatch.delenv("DDS_CONFIG", raising=False)
    monkeypatch.delenv("DDS_PI_DIGITS", raising=False)
    monkeypatch.chdir(tmp_path)
