"""
Canonical Huffman tables rebuilt at signalled points from a bounded ledger
of recent tuples.

Encoder and decoder call the same deterministic :func:`build_tables` on
identical ledgers, so nothing but the REBUILD symbol crosses the wire.
"""

from __future__ import annotations

import hashlib
import heapq
from array import array
from collections import deque
from itertools import chain
from typing import NamedTuple

from .errors import CorruptionError, TruncationError, UsageError

END_OF_BLOCK = 0
REBUILD = 1
LITERAL_ONLY = 2
FIRST_POSITION_BUCKET = 3
NO_LITERAL = 256

MAX_CODE_LENGTH = 32


# Value buckets: 0..3 are exact; bucket b >= 4 carries b//2 - 1 extra bits
# on top of base (2 + b%2) << extra.

def bucket_of(value):
    if value < 4:
        return value
    n = value.bit_length()
    return 2 * (n - 1) + ((value >> (n - 2)) & 1)


def bucket_extra_bits(bucket):
    return bucket // 2 - 1 if bucket >= 4 else 0


def bucket_base(bucket):
    if bucket < 4:
        return bucket
    return (2 + (bucket & 1)) << (bucket // 2 - 1)


def bucket_count(capacity):
    """Number of buckets needed to cover values in ``[0, capacity)``."""
    return bucket_of(capacity - 1) + 1


class Alphabets:
    """Sizes and symbol mapping of the three code tables."""

    def __init__(self, window_capacity, min_match, max_match):
        self.window_capacity = window_capacity
        self.min_match = min_match
        self.max_match = max_match
        self.position_buckets = bucket_count(window_capacity)
        self.length_buckets = bucket_count(max_match - min_match + 1)
        self.position_size = FIRST_POSITION_BUCKET + self.position_buckets
        self.length_size = self.length_buckets
        self.literal_size = 257

    @property
    def sizes(self):
        return self.position_size, self.length_size, self.literal_size

    def entry_for(self, tup):
        """Ledger entry ``(position_symbol, position, length, literal_symbol)``."""
        lit = NO_LITERAL if tup.literal is None else tup.literal
        if tup.length == 0:
            return (LITERAL_ONLY, -1, 0, lit)
        return (FIRST_POSITION_BUCKET + bucket_of(tup.position), tup.position, tup.length, lit)


class Ledger:
    """FIFO of the last ``capacity`` coded events with running symbol counts.

    Events are tuples and the specials END_OF_BLOCK and REBUILD.
    ``tuples_seen`` counts tuples only.
    """

    def __init__(self, alphabets, capacity):
        if capacity < 1:
            raise UsageError("ledger capacity must be positive")
        self.alphabets = alphabets
        self.capacity = capacity
        self.ring = deque()
        self.tuples_seen = 0
        self.counts = tuple([0] * n for n in alphabets.sizes)

    def _add(self, entry, delta):
        pos_counts, len_counts, lit_counts = self.counts
        sym, _, length, lit = entry
        pos_counts[sym] += delta
        if sym >= FIRST_POSITION_BUCKET:
            len_counts[bucket_of(length - self.alphabets.min_match)] += delta
        if lit >= 0:
            lit_counts[lit] += delta

    def _record(self, entry):
        if len(self.ring) == self.capacity:
            self._add(self.ring.popleft(), -1)
        self.ring.append(entry)
        self._add(entry, 1)

    def push(self, tup):
        self._record(self.alphabets.entry_for(tup))
        self.tuples_seen += 1

    def push_special(self, symbol):
        if symbol not in (END_OF_BLOCK, REBUILD):
            raise UsageError(f"not a standalone special symbol: {symbol}")
        self._record((symbol, -1, 0, -1))

    def frequencies(self):
        """Per-table weights: baseline 1 plus ledger occurrences."""
        return tuple([c + 1 for c in counts] for counts in self.counts)

    def digest_into(self, h):
        h.update(self.tuples_seen.to_bytes(8, "little"))
        h.update(array("q", chain.from_iterable(self.ring)).tobytes())


class RebuildSchedule:
    """Fire points 2, 4, 8, ... up to ``cap``, then every ``cap`` tuples."""

    def __init__(self, cap, first=2):
        if cap < first:
            raise UsageError(f"rebuild cap {cap} below first interval {first}")
        self.cap = cap
        self.interval = first
        self.next_rebuild_at = first

    def due(self, tuples_seen):
        return tuples_seen == self.next_rebuild_at

    def advance(self, tuples_seen):
        self.next_rebuild_at = tuples_seen + self.interval
        self.interval = min(2 * self.interval, self.cap)


def huffman_code_lengths(freqs):
    """Huffman code lengths with deterministic tie-breaking.

    Merges the two lightest nodes, ties broken by the smallest symbol index
    a node contains.
    """
    n = len(freqs)
    if n < 2:
        raise UsageError("a code table needs at least two symbols")
    heap = [(w, s, s) for s, w in enumerate(freqs)]
    heapq.heapify(heap)
    parent = [0] * (2 * n - 1)
    pop, replace = heapq.heappop, heapq.heapreplace
    for node in range(n, 2 * n - 1):
        w1, m1, a = pop(heap)
        w2, m2, b = heap[0]
        parent[a] = parent[b] = node
        replace(heap, (w1 + w2, m1 if m1 < m2 else m2, node))
    root = 2 * n - 2
    depth = [0] * (2 * n - 1)
    for i in range(root - 1, -1, -1):
        depth[i] = depth[parent[i]] + 1
    return depth[:n]


def canonical_codes(lengths):
    """Assign canonical codes: by length, then by symbol index."""
    codes = [0] * len(lengths)
    code = 0
    prev = 0
    for sym in sorted(range(len(lengths)), key=lambda s: (lengths[s], s)):
        code <<= lengths[sym] - prev
        codes[sym] = code
        code += 1
        prev = lengths[sym]
    return codes


class CodeTable:
    FAST_BITS = 9

    def __init__(self, lengths):
        if max(lengths) > MAX_CODE_LENGTH:
            raise UsageError("code length exceeds 32 bits")
        self.code_lengths = tuple(lengths)
        self.codes = tuple(canonical_codes(lengths))
        self._decoder = None

    @classmethod
    def from_frequencies(cls, freqs):
        return cls(huffman_code_lengths(freqs))

    def __len__(self):
        return len(self.code_lengths)

    def __eq__(self, other):
        return isinstance(other, CodeTable) and self.code_lengths == other.code_lengths

    def kraft_sum(self):
        """Sum of 2**-len as an exact fraction ``(numerator, denominator)``."""
        top = max(self.code_lengths)
        return sum(1 << (top - n) for n in self.code_lengths), 1 << top

    def encode(self, symbol, writer):
        writer.write_bits(self.codes[symbol], self.code_lengths[symbol])

    def _build_decoder(self):
        lengths = self.code_lengths
        max_len = max(lengths)
        fast = min(self.FAST_BITS, max_len)
        table = [None] * (1 << fast)
        first = [0] * (max_len + 1)
        count = [0] * (max_len + 1)
        offset = [0] * (max_len + 1)
        order = sorted(range(len(lengths)), key=lambda s: (lengths[s], s))
        for sym in order:
            count[lengths[sym]] += 1
        code = 0
        idx = 0
        for n in range(1, max_len + 1):
            code <<= 1
            first[n] = code
            offset[n] = idx
            code += count[n]
            idx += count[n]
        for sym, n in enumerate(lengths):
            if n <= fast:
                lo = self.codes[sym] << (fast - n)
                for v in range(lo, lo + (1 << (fast - n))):
                    table[v] = (sym, n)
        self._decoder = (fast, table, max_len, first, count, offset, order)

    def decode(self, reader):
        if self._decoder is None:
            self._build_decoder()
        fast, table, max_len, first, count, offset, order = self._decoder
        hit = table[reader.peek_bits(fast)]
        if hit is not None:
            sym, n = hit
        else:
            for n in range(fast + 1, max_len + 1):
                v = reader.peek_bits(n) - first[n]
                if 0 <= v < count[n]:
                    sym = order[offset[n] + v]
                    break
            else:  # unreachable for complete codes
                raise CorruptionError("invalid prefix code", reader.bit_position)
        if n > reader.bits_remaining:
            raise TruncationError(f"code of {n} bits truncated at bit {reader.bit_position}")
        reader.bit_position += n
        return sym


class CodeTableSet(NamedTuple):
    position: CodeTable
    length: CodeTable
    literal: CodeTable

    def digest_into(self, h):
        for table in self:
            h.update(bytes(table.code_lengths))

    def fingerprint(self):
        h = hashlib.sha256()
        self.digest_into(h)
        return h.hexdigest()


def build_tables(ledger):
    """Rebuild all three tables from the ledger's weights."""
    pos, length, lit = ledger.frequencies()
    return CodeTableSet(CodeTable.from_frequencies(pos),
                        CodeTable.from_frequencies(length),
                        CodeTable.from_frequencies(lit))
