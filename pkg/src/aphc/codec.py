"""
Packet codec: greedy LZ77 parse against the block window, tuples coded
through three adaptive canonical Huffman tables, one byte-aligned block per
packet.

Block layout, MSB-first::

    tuple*  END_OF_BLOCK  zero-pad

    match tuple    := pos-bucket  pos-extra  len-bucket  len-extra  literal|NO_LITERAL
    literal tuple  := LITERAL_ONLY  literal
    rebuild point  := REBUILD   (tables rebuilt from the ledger right after)

Encoder and decoder each keep their own window, ledger and tables and stay in
lockstep as long as every block is decoded, in order, exactly once.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import astuple, dataclass
from typing import NamedTuple, Optional

from .adaptive_huffman import (
    END_OF_BLOCK, FIRST_POSITION_BUCKET, LITERAL_ONLY, NO_LITERAL, REBUILD,
    Alphabets, Ledger, RebuildSchedule, bucket_base, bucket_extra_bits, bucket_of,
    build_tables,
)
from .bitstream import BitReader, BitWriter
from .errors import ConfigurationError, CorruptionError, FormatError, OversizeError, TruncationError
from .suffix_window import Window

MAX_PACKET = 1 << 20
MAX_WINDOW = 1 << 24


class ParseTuple(NamedTuple):
    """One LZ77 parse element; ``length == 0`` means literal only."""

    position: Optional[int]
    length: int
    literal: Optional[int]

    def expand(self, window_bytes):
        out = b""
        if self.length:
            out = bytes(window_bytes[self.position:self.position + self.length])
        if self.literal is not None:
            out += bytes((self.literal,))
        return out


@dataclass(frozen=True)
class CodecConfig:
    block_size: int = 8192
    max_blocks: int = 4
    ledger_size: int = 4096
    rebuild_cap: int = 512
    min_match: int = 3
    max_match: int = 258

    _ECHO = struct.Struct("<IHHHBB")

    def __post_init__(self):
        for name, value in zip(("block_size", "max_blocks", "ledger_size", "rebuild_cap",
                                "min_match", "max_match"), astuple(self)):
            if not isinstance(value, int) or value < 1:
                raise ConfigurationError(f"{name} must be a positive integer, got {value!r}")
        if self.min_match < 2:
            raise ConfigurationError(f"min_match must be >= 2, got {self.min_match}")
        if self.max_match < self.min_match:
            raise ConfigurationError("max_match must be >= min_match")
        if not 3 <= self.max_match <= 258:
            raise ConfigurationError("max_match must lie in 3..258")
        if self.min_match > 255:
            raise ConfigurationError("min_match must fit in one byte")
        if self.block_size * self.max_blocks > MAX_WINDOW:
            raise ConfigurationError("window capacity block_size * max_blocks exceeds 2**24")
        if self.rebuild_cap < 2:
            raise ConfigurationError("rebuild_cap must be >= 2")
        for name in ("max_blocks", "ledger_size", "rebuild_cap"):
            if getattr(self, name) > 0xFFFF:
                raise ConfigurationError(f"{name} must fit in 16 bits")

    @property
    def window_capacity(self):
        return self.block_size * self.max_blocks

    def to_bytes(self):
        return self._ECHO.pack(self.block_size, self.max_blocks, self.ledger_size,
                               self.rebuild_cap, self.min_match, self.max_match - 3)

    @classmethod
    def from_bytes(cls, raw):
        bs, mb, ls, cap, lo, hi = cls._ECHO.unpack(raw)
        return cls(bs, mb, ls, cap, lo, hi + 3)


class _CodecState:
    def __init__(self, config, indexed):
        self.config = config
        self.alphabets = Alphabets(config.window_capacity, config.min_match, config.max_match)
        self.window = Window(config.block_size, config.max_blocks, indexed=indexed)
        self.ledger = Ledger(self.alphabets, config.ledger_size)
        self.tables = build_tables(self.ledger)
        self.packets_processed = 0
        self.rebuilds = []  # tuples_seen at every rebuild

    def _rebuild(self):
        self.ledger.push_special(REBUILD)
        self.tables = build_tables(self.ledger)
        self.rebuilds.append(self.ledger.tuples_seen)

    def state_hash(self):
        """Digest of window bytes, ledger contents and table code lengths."""
        h = hashlib.sha256()
        h.update(self.packets_processed.to_bytes(8, "little"))
        h.update(self.window.total_live.to_bytes(8, "little"))
        for block in self.window.blocks:
            h.update(block.data)
        self.ledger.digest_into(h)
        self.tables.digest_into(h)
        return h.hexdigest()


class Encoder(_CodecState):
    def __init__(self, config=None):
        super().__init__(config or CodecConfig(), indexed=True)
        self.schedule = RebuildSchedule(self.config.rebuild_cap)

    def parse(self, data):
        """Greedy parse of one packet against the current window.

        The window is not updated; a packet never matches itself.
        """
        cfg = self.config
        lo, hi = cfg.min_match, cfg.max_match
        find = self.window.find_match
        tuples = []
        i = 0
        n = len(data)
        while i < n:
            m = find(data[i:i + hi], lo, hi) if n - i >= lo else None
            if m is None:
                tuples.append(ParseTuple(None, 0, data[i]))
                i += 1
            else:
                position, length = m
                i += length
                if i < n:
                    tuples.append(ParseTuple(position, length, data[i]))
                    i += 1
                else:
                    tuples.append(ParseTuple(position, length, None))
        return tuples

    def encode_packet(self, data):
        """Compress one packet into a standalone, byte-aligned block."""
        if len(data) > MAX_PACKET:
            raise OversizeError(f"packet of {len(data)} bytes exceeds {MAX_PACKET}")
        data = bytes(data)
        min_match = self.config.min_match
        ledger = self.ledger
        schedule = self.schedule
        w = BitWriter()
        write = w.write_bits
        pos_t, len_t, lit_t = self.tables
        for tup in self.parse(data):
            if schedule.due(ledger.tuples_seen):
                pos_t.encode(REBUILD, w)
                schedule.advance(ledger.tuples_seen)
                self._rebuild()
                pos_t, len_t, lit_t = self.tables
            if tup.length == 0:
                pos_t.encode(LITERAL_ONLY, w)
                lit_t.encode(tup.literal, w)
            else:
                b = bucket_of(tup.position)
                pos_t.encode(FIRST_POSITION_BUCKET + b, w)
                write(tup.position - bucket_base(b), bucket_extra_bits(b))
                v = tup.length - min_match
                b = bucket_of(v)
                len_t.encode(b, w)
                write(v - bucket_base(b), bucket_extra_bits(b))
                lit_t.encode(NO_LITERAL if tup.literal is None else tup.literal, w)
            ledger.push(tup)
        pos_t.encode(END_OF_BLOCK, w)
        ledger.push_special(END_OF_BLOCK)
        w.align_to_byte()
        self.window.append(data)
        self.packets_processed += 1
        return bytes(w.buffer)


class Decoder(_CodecState):
    def __init__(self, config=None):
        super().__init__(config or CodecConfig(), indexed=False)

    def clone(self):
        """Independent copy of this decoder's state."""
        other = Decoder.__new__(Decoder)
        other.config = self.config
        other.alphabets = self.alphabets
        other.window = Window(self.config.block_size, self.config.max_blocks, indexed=False)
        for block in self.window.blocks:
            other.window.append(bytes(block.data))
        other.ledger = Ledger(self.alphabets, self.config.ledger_size)
        other.ledger.ring.extend(self.ledger.ring)
        other.ledger.tuples_seen = self.ledger.tuples_seen
        other.ledger.counts = tuple(list(c) for c in self.ledger.counts)
        other.tables = self.tables
        other.packets_processed = self.packets_processed
        other.rebuilds = list(self.rebuilds)
        return other

    def decode_packet(self, block):
        """Decode one block produced by :meth:`Encoder.encode_packet`.

        Raises CorruptionError on malformed input; the decoder is out of sync
        afterwards.
        """
        r = BitReader(block)
        cfg = self.config
        window = self.window
        ledger = self.ledger
        live = window.total_live
        min_match, max_match = cfg.min_match, cfg.max_match
        out = bytearray()
        pos_t, len_t, lit_t = self.tables
        try:
            while True:
                at = r.bit_position
                sym = pos_t.decode(r)
                if sym == END_OF_BLOCK:
                    ledger.push_special(END_OF_BLOCK)
                    if r.align_to_byte():
                        raise CorruptionError("non-zero padding", at)
                    if r.bits_remaining:
                        raise CorruptionError("trailing bytes after end of block", r.bit_position)
                    break
                if sym == REBUILD:
                    self._rebuild()
                    pos_t, len_t, lit_t = self.tables
                    continue
                if sym == LITERAL_ONLY:
                    lit = lit_t.decode(r)
                    if lit == NO_LITERAL:
                        raise CorruptionError("literal-only tuple without literal", at)
                    out.append(lit)
                    ledger.push(ParseTuple(None, 0, lit))
                else:
                    b = sym - FIRST_POSITION_BUCKET
                    position = bucket_base(b) + r.read_bits(bucket_extra_bits(b))
                    b = len_t.decode(r)
                    length = min_match + bucket_base(b) + r.read_bits(bucket_extra_bits(b))
                    if length > max_match:
                        raise CorruptionError(f"match length {length} above {max_match}", at)
                    if position + length > live:
                        raise CorruptionError(
                            f"match {position}+{length} outside window of {live} bytes", at)
                    lit = lit_t.decode(r)
                    out += window.read(position, length)
                    if lit != NO_LITERAL:
                        out.append(lit)
                    ledger.push(ParseTuple(position, length, None if lit == NO_LITERAL else lit))
                if len(out) > MAX_PACKET:
                    raise CorruptionError("decoded packet exceeds size cap", r.bit_position)
        except TruncationError:
            raise CorruptionError("truncated block", r.bit_position) from None
        data = bytes(out)
        window.append(data)
        self.packets_processed += 1
        return data


def state_hash(state):
    return state.state_hash()


# -- APHC container --------------------------------------------------------

MAGIC = b"APHC"
VERSION = 1
_HEADER = 4 + 1 + 12
_U32 = struct.Struct("<I")


def pack_container(config, blocks):
    parts = [MAGIC, bytes((VERSION,)), config.to_bytes()]
    for block in blocks:
        parts.append(_U32.pack(len(block)))
        parts.append(block)
    return b"".join(parts)


def unpack_container(raw):
    """Split a container into ``(config, blocks)``."""
    if len(raw) < _HEADER:
        raise FormatError("container header truncated", len(raw))
    if raw[:4] != MAGIC:
        raise FormatError("bad container magic", 0)
    if raw[4] != VERSION:
        raise FormatError(f"unsupported container version {raw[4]}", 4)
    try:
        config = CodecConfig.from_bytes(raw[5:_HEADER])
    except ConfigurationError as exc:
        raise FormatError(f"invalid config echo: {exc}", 5) from None
    blocks = []
    off = _HEADER
    while off < len(raw):
        if off + 4 > len(raw):
            raise FormatError("block length truncated", off)
        (n,) = _U32.unpack_from(raw, off)
        if off + 4 + n > len(raw):
            raise FormatError("block payload truncated", off)
        blocks.append(raw[off + 4:off + 4 + n])
        off += 4 + n
    return config, blocks


def compress_packets(packets, config=None):
    config = config or CodecConfig()
    enc = Encoder(config)
    return pack_container(config, [enc.encode_packet(p) for p in packets])


def decompress_packets(raw):
    config, blocks = unpack_container(raw)
    dec = Decoder(config)
    return [dec.decode_packet(b) for b in blocks]


__all__ = [
    "CodecConfig", "Decoder", "Encoder", "ParseTuple", "compress_packets",
    "decompress_packets", "pack_container", "state_hash", "unpack_container",
]
