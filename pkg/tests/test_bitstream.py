import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from aphc.bitstream import BitReader, BitWriter
from aphc.errors import TruncationError, UsageError


def test_msb_first_then_zero_pad():
    w = BitWriter().write_bits(0b101, 3).align_to_byte()
    assert w.getvalue() == bytes([0b1010_0000])


def test_zero_width_write_is_noop():
    w = BitWriter().write_bits(0, 0)
    assert w.bit_position == 0 and w.getvalue() == b""


def test_thirteen_bits_align_to_two_bytes():
    w = BitWriter().write_bits(0x1FFF, 13)
    assert w.bit_position == 13
    w.align_to_byte()
    assert w.bit_position == 16
    data = w.getvalue()
    assert len(data) == 2 and data[1] & 0b111 == 0


def test_align_is_idempotent():
    w = BitWriter().write_bits(0xABCD, 16)
    w.align_to_byte().align_to_byte()
    assert w.bit_position == 16 and w.getvalue() == b"\xab\xcd"


@pytest.mark.parametrize("value,n", [(1, 0), (8, 3), (-1, 4), (0, 33)])
def test_write_rejects_bad_fields(value, n):
    with pytest.raises(UsageError):
        BitWriter().write_bits(value, n)


def test_thousand_random_fields_round_trip():
    rng = random.Random(1234)
    fields = []
    for _ in range(1000):
        n = rng.randint(0, 32)
        fields.append((rng.getrandbits(n) if n else 0, n))
    w = BitWriter()
    for v, n in fields:
        w.write_bits(v, n)
    w.align_to_byte()
    r = BitReader(w.getvalue())
    assert [r.read_bits(n) for _, n in fields] == [v for v, _ in fields]


def test_read_zero_bits_keeps_position():
    r = BitReader(b"\xff")
    assert r.read_bits(0) == 0 and r.bit_position == 0


def test_read_past_end_raises():
    r = BitReader(b"\xff")
    r.read_bits(5)
    with pytest.raises(TruncationError):
        r.read_bits(4)
    assert r.bit_position == 5


def test_peek_pads_with_zeros():
    r = BitReader(b"\xff")
    r.read_bits(4)
    assert r.peek_bits(8) == 0xF0
    assert r.bit_position == 4


@given(st.lists(st.integers(0, 32).flatmap(
    lambda n: st.tuples(st.integers(0, (1 << n) - 1), st.just(n))), max_size=60))
def test_round_trip_property(fields):
    w = BitWriter()
    for v, n in fields:
        w.write_bits(v, n)
    total = sum(n for _, n in fields)
    assert w.bit_position == total
    w.align_to_byte()
    data = w.getvalue()
    assert len(data) == (total + 7) // 8
    if total % 8:
        assert data[-1] & ((1 << (8 - total % 8)) - 1) == 0
    r = BitReader(data)
    assert [r.read_bits(n) for _, n in fields] == [v for v, _ in fields]
    assert r.read_bits(-r.bit_position & 7) == 0
