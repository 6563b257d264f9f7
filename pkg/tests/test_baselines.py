import random

import pytest

from aphc import baselines
from aphc.baselines import ADAPTERS, list_codecs, make_adapter
from aphc.errors import AdapterError, UnknownCodecError
from aphc.trace_io import category_of

AVAILABLE = list_codecs()


def test_full_build_lists_everything():
    assert {"null", "aphc"} <= set(AVAILABLE)
    assert set(AVAILABLE) <= set(ADAPTERS)


def test_minimal_build(monkeypatch):
    monkeypatch.setattr(baselines.DeflateSyncAdapter, "available", classmethod(lambda cls: False))
    monkeypatch.setattr(baselines.LzmaSyncAdapter, "available", classmethod(lambda cls: False))
    assert list_codecs() == ["null", "aphc"]
    with pytest.raises(UnknownCodecError):
        make_adapter("deflate-sync")


def test_unknown_codec_names_available():
    with pytest.raises(UnknownCodecError) as info:
        make_adapter("brotli")
    assert "null" in str(info.value) and "aphc" in str(info.value)


def test_null_is_identity():
    a = make_adapter("null")
    assert a.compress_packet(b"xyz") == b"xyz" == a.decompress_packet(b"xyz")


@pytest.mark.parametrize("name", AVAILABLE)
def test_round_trip_random_packets(name):
    rng = random.Random(13)
    a = make_adapter(name)
    history = []
    for i in range(1000):
        if i % 5 == 0:
            p = b""
        elif history and rng.random() < 0.3:
            p = rng.choice(history)
        else:
            p = rng.randbytes(rng.randint(1, 120))
        history.append(p)
        assert a.decompress_packet(a.compress_packet(p)) == p


def test_levels_match_reported_settings():
    if "deflate-sync" in AVAILABLE:
        assert make_adapter("deflate-sync").settings()["level"] == 9
    if "lzma-sync" in AVAILABLE:
        s = make_adapter("lzma-sync").settings()
        assert s["level"] == 3 and s["extreme"] is False


@pytest.mark.skipif("deflate-sync" not in AVAILABLE, reason="zlib missing")
def test_deflate_inflates_very_small_packets(default_trace):
    a = make_adapter("deflate-sync")
    n_in = n_out = 0
    for p in default_trace:
        b = a.compress_packet(p)
        if category_of(len(p)) == 0:
            n_in += len(p)
            n_out += len(b)
    assert n_out / n_in > 1.0


@pytest.mark.skipif("deflate-sync" not in AVAILABLE, reason="zlib missing")
def test_deflate_errors_carry_code():
    a = make_adapter("deflate-sync")
    with pytest.raises(AdapterError) as info:
        a.decompress_packet(b"\xff\xff\xff\xff")
    assert info.value.code is not None


@pytest.mark.skipif("lzma-sync" not in AVAILABLE, reason="liblzma missing")
def test_lzma_errors_carry_code():
    a = make_adapter("lzma-sync")
    with pytest.raises(AdapterError) as info:
        a.decompress_packet(b"not an xz stream at all")
    assert info.value.code is not None
