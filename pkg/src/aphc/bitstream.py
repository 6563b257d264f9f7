"""MSB-first bit packing over in-memory byte buffers."""

from .errors import TruncationError, UsageError

MAX_WIDTH = 32


class BitWriter:
    __slots__ = ("buffer", "_acc", "_pending")

    def __init__(self):
        self.buffer = bytearray()
        self._acc = 0
        self._pending = 0  # bits held in _acc, always < 8 between calls

    @property
    def bit_position(self):
        return 8 * len(self.buffer) + self._pending

    def write_bits(self, value, n):
        if not 0 <= n <= MAX_WIDTH:
            raise UsageError(f"bit width {n} outside 0..{MAX_WIDTH}")
        if value < 0 or value >> n:
            raise UsageError(f"value {value} does not fit in {n} bits")
        acc = (self._acc << n) | value
        pending = self._pending + n
        while pending >= 8:
            pending -= 8
            self.buffer.append((acc >> pending) & 0xFF)
        self._acc = acc & ((1 << pending) - 1)
        self._pending = pending
        return self

    def align_to_byte(self):
        """Pad with zero bits up to the next byte boundary."""
        if self._pending:
            self.buffer.append((self._acc << (8 - self._pending)) & 0xFF)
            self._acc = 0
            self._pending = 0
        return self

    def getvalue(self):
        """Bytes written so far; a partial final byte is shown zero-padded."""
        if self._pending:
            return bytes(self.buffer) + bytes([(self._acc << (8 - self._pending)) & 0xFF])
        return bytes(self.buffer)


class BitReader:
    __slots__ = ("source", "bit_position", "_limit")

    def __init__(self, source):
        self.source = bytes(source)
        self.bit_position = 0
        self._limit = 8 * len(self.source)

    @property
    def bits_remaining(self):
        return self._limit - self.bit_position

    def _window(self, n):
        # n + up to 7 bits of leading offset, read big-endian
        pos = self.bit_position
        start = pos >> 3
        end = (pos + n + 7) >> 3
        chunk = int.from_bytes(self.source[start:end], "big")
        have = 8 * (min(end, len(self.source)) - start)
        if have < 8 * (end - start):
            chunk <<= 8 * (end - start) - have
        return chunk >> (8 * (end - start) - (pos & 7) - n) & ((1 << n) - 1)

    def read_bits(self, n):
        if not 0 <= n <= MAX_WIDTH:
            raise UsageError(f"bit width {n} outside 0..{MAX_WIDTH}")
        if n == 0:
            return 0
        if self.bit_position + n > self._limit:
            raise TruncationError(
                f"need {n} bits at bit {self.bit_position}, only {self.bits_remaining} left")
        value = self._window(n)
        self.bit_position += n
        return value

    def peek_bits(self, n):
        """Next ``n`` bits without consuming them; bits past the end read as zero."""
        if n == 0:
            return 0
        return self._window(n)

    def skip_bits(self, n):
        if self.bit_position + n > self._limit:
            raise TruncationError(
                f"need {n} bits at bit {self.bit_position}, only {self.bits_remaining} left")
        self.bit_position += n

    def align_to_byte(self):
        """Consume bits up to the next byte boundary and return them."""
        pad = -self.bit_position & 7
        return self.read_bits(pad)
