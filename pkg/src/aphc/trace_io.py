"""PKT1 packet trace files and per-size statistics."""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

from .errors import FormatError

MAGIC = b"PKT1"
VERSION = 1
_U32 = struct.Struct("<I")

# (name, lowest length, highest length or None)
CATEGORIES = (
    ("very_small", 0, 10),
    ("small", 11, 100),
    ("medium", 101, 1000),
    ("large", 1001, None),
)
CATEGORY_NAMES = tuple(c[0] for c in CATEGORIES)


def category_of(length):
    if length <= 10:
        return 0
    if length <= 100:
        return 1
    if length <= 1000:
        return 2
    return 3


def histogram_bucket(length):
    """10-byte histogram bucket: 0 covers 0..10, bucket i covers 10i+1..10(i+1)."""
    return 0 if length <= 10 else (length - 1) // 10


def bucket_label(i):
    return "0-10" if i == 0 else f"{10 * i + 1}-{10 * (i + 1)}"


class PacketTrace(list):
    """Ordered packet payloads, as ``bytes``."""

    def __init__(self, packets=()):
        super().__init__(bytes(p) for p in packets)

    @property
    def total_bytes(self):
        return sum(map(len, self))


def dumps_trace(trace):
    parts = [MAGIC, bytes((VERSION,)), _U32.pack(len(trace))]
    for p in trace:
        parts.append(_U32.pack(len(p)))
        parts.append(p)
    return b"".join(parts)


def loads_trace(raw):
    if len(raw) < 9:
        raise FormatError("trace header truncated", len(raw))
    if raw[:4] != MAGIC:
        raise FormatError("bad trace magic", 0)
    if raw[4] != VERSION:
        raise FormatError(f"unsupported trace version {raw[4]}", 4)
    (count,) = _U32.unpack_from(raw, 5)
    packets = []
    off = 9
    for i in range(count):
        if off + 4 > len(raw):
            raise FormatError(f"packet {i} length truncated", off)
        (n,) = _U32.unpack_from(raw, off)
        if off + 4 + n > len(raw):
            raise FormatError(f"packet {i} payload truncated", off + 4)
        packets.append(raw[off + 4:off + 4 + n])
        off += 4 + n
    if off != len(raw):
        raise FormatError(f"{len(raw) - off} bytes after the declared {count} packets", off)
    return PacketTrace(packets)


def write_trace(path, trace):
    with open(path, "wb") as fp:
        fp.write(dumps_trace(trace))


def read_trace(path):
    with open(path, "rb") as fp:
        return loads_trace(fp.read())


@dataclass
class TraceStats:
    packet_count: int = 0
    total_bytes: int = 0
    histogram: list = field(default_factory=list)
    category_counts: list = field(default_factory=lambda: [0] * 4)
    category_bytes: list = field(default_factory=lambda: [0] * 4)

    def fraction_at_most(self, length):
        if not self.packet_count:
            return 0.0
        below = sum(c for i, c in enumerate(self.histogram) if 10 * (i + 1) <= length)
        return below / self.packet_count

    def summary_lines(self):
        lines = [
            f"packets: {self.packet_count}",
            f"bytes: {self.total_bytes}",
            f"mean length: {self.total_bytes / self.packet_count:.2f}" if self.packet_count
            else "mean length: n/a",
            f"fraction <= 10 bytes: {self.fraction_at_most(10):.4f}",
            f"fraction <= 20 bytes: {self.fraction_at_most(20):.4f}",
        ]
        for (name, lo, hi), n, b in zip(CATEGORIES, self.category_counts, self.category_bytes):
            span = f"{lo}-{hi}" if hi is not None else f">{lo - 1}"
            lines.append(f"{name} ({span} B): {n} packets, {b} bytes")
        return lines


def trace_stats(trace):
    stats = TraceStats()
    for p in trace:
        n = len(p)
        stats.packet_count += 1
        stats.total_bytes += n
        b = histogram_bucket(n)
        if b >= len(stats.histogram):
            stats.histogram.extend([0] * (b + 1 - len(stats.histogram)))
        stats.histogram[b] += 1
        c = category_of(n)
        stats.category_counts[c] += 1
        stats.category_bytes[c] += n
    return stats
