"""
Per-packet stream codecs behind one interface.

Each adapter instance is one stream: ``compress_packet`` flushes so the
output for that packet is decodable on its own, given every earlier output
went through ``decompress_packet`` in order.
"""

from __future__ import annotations

import ctypes
import ctypes.util
import re

try:
    import zlib
except ImportError:  # pragma: no cover
    zlib = None

from .codec import CodecConfig, Decoder, Encoder
from .errors import AdapterError, CorruptionError, UnknownCodecError


class CodecAdapter:
    name = ""

    @classmethod
    def available(cls):
        return True

    def settings(self):
        """Settings echoed into bench reports."""
        return {}

    def compress_packet(self, data):
        raise NotImplementedError

    def decompress_packet(self, data):
        raise NotImplementedError


class NullAdapter(CodecAdapter):
    name = "null"

    def compress_packet(self, data):
        return bytes(data)

    def decompress_packet(self, data):
        return bytes(data)


class AphcAdapter(CodecAdapter):
    name = "aphc"

    def __init__(self, config=None, level=None):
        self.config = config or CodecConfig()
        self.encoder = Encoder(self.config)
        self.decoder = Decoder(self.config)

    def settings(self):
        c = self.config
        return {"block_size": c.block_size, "max_blocks": c.max_blocks,
                "ledger_size": c.ledger_size, "rebuild_cap": c.rebuild_cap,
                "min_match": c.min_match, "max_match": c.max_match}

    def compress_packet(self, data):
        return self.encoder.encode_packet(data)

    def decompress_packet(self, data):
        return self.decoder.decode_packet(data)


def _zlib_code(exc):
    m = re.search(r"Error (-?\d+)", str(exc))
    return int(m.group(1)) if m else None


class DeflateSyncAdapter(CodecAdapter):
    """zlib stream, Z_SYNC_FLUSH after every packet."""

    name = "deflate-sync"
    DEFAULT_LEVEL = 9

    @classmethod
    def available(cls):
        return zlib is not None

    def __init__(self, config=None, level=None):
        self.level = self.DEFAULT_LEVEL if level is None else level
        try:
            self._c = zlib.compressobj(self.level, zlib.DEFLATED, zlib.MAX_WBITS, zlib.DEF_MEM_LEVEL)
        except (ValueError, zlib.error) as exc:
            raise AdapterError(f"zlib init failed: {exc}", _zlib_code(exc)) from None
        self._d = zlib.decompressobj()

    def settings(self):
        return {"level": self.level, "wbits": zlib.MAX_WBITS, "memlevel": zlib.DEF_MEM_LEVEL,
                "zlib": zlib.ZLIB_RUNTIME_VERSION}

    def compress_packet(self, data):
        try:
            return self._c.compress(data) + self._c.flush(zlib.Z_SYNC_FLUSH)
        except zlib.error as exc:
            raise AdapterError(f"zlib compress failed: {exc}", _zlib_code(exc)) from None

    def decompress_packet(self, data):
        try:
            return self._d.decompress(data)
        except zlib.error as exc:
            raise AdapterError(f"zlib decompress failed: {exc}", _zlib_code(exc)) from None


# -- liblzma through ctypes: the stdlib lzma module has no sync flush ---------

class _LzmaStream(ctypes.Structure):
    _fields_ = [
        ("next_in", ctypes.c_void_p),
        ("avail_in", ctypes.c_size_t),
        ("total_in", ctypes.c_uint64),
        ("next_out", ctypes.c_void_p),
        ("avail_out", ctypes.c_size_t),
        ("total_out", ctypes.c_uint64),
        ("allocator", ctypes.c_void_p),
        ("internal", ctypes.c_void_p),
        ("reserved_ptr1", ctypes.c_void_p),
        ("reserved_ptr2", ctypes.c_void_p),
        ("reserved_ptr3", ctypes.c_void_p),
        ("reserved_ptr4", ctypes.c_void_p),
        ("reserved_int1", ctypes.c_uint64),
        ("reserved_int2", ctypes.c_uint64),
        ("reserved_int3", ctypes.c_size_t),
        ("reserved_int4", ctypes.c_size_t),
        ("reserved_enum1", ctypes.c_int),
        ("reserved_enum2", ctypes.c_int),
    ]


LZMA_OK = 0
LZMA_STREAM_END = 1
LZMA_BUF_ERROR = 10
LZMA_RUN = 0
LZMA_SYNC_FLUSH = 1
LZMA_CHECK_CRC64 = 4
LZMA_PRESET_EXTREME = 0x80000000

_liblzma = None


def _load_liblzma():
    global _liblzma
    if _liblzma is None:
        path = ctypes.util.find_library("lzma")
        lib = None
        for candidate in filter(None, (path, "liblzma.so.5", "liblzma.dylib")):
            try:
                lib = ctypes.CDLL(candidate)
                break
            except OSError:
                continue
        if lib is None:
            _liblzma = False
            return None
        P = ctypes.POINTER(_LzmaStream)
        lib.lzma_easy_encoder.argtypes = [P, ctypes.c_uint32, ctypes.c_int]
        lib.lzma_easy_encoder.restype = ctypes.c_int
        lib.lzma_stream_decoder.argtypes = [P, ctypes.c_uint64, ctypes.c_uint32]
        lib.lzma_stream_decoder.restype = ctypes.c_int
        lib.lzma_code.argtypes = [P, ctypes.c_int]
        lib.lzma_code.restype = ctypes.c_int
        lib.lzma_end.argtypes = [P]
        lib.lzma_end.restype = None
        lib.lzma_version_string.restype = ctypes.c_char_p
        _liblzma = lib
    return _liblzma or None


class _LzmaPipe:
    CHUNK = 1 << 16

    def __init__(self, lib, stream):
        self.lib = lib
        self.stream = stream

    def run(self, data, action):
        lib, s = self.lib, self.stream
        inbuf = ctypes.create_string_buffer(bytes(data), len(data))
        out = ctypes.create_string_buffer(self.CHUNK)
        s.next_in = ctypes.cast(inbuf, ctypes.c_void_p)
        s.avail_in = len(data)
        parts = []
        while True:
            s.next_out = ctypes.cast(out, ctypes.c_void_p)
            s.avail_out = self.CHUNK
            ret = lib.lzma_code(ctypes.byref(s), action)
            parts.append(out.raw[:self.CHUNK - s.avail_out])
            if action == LZMA_SYNC_FLUSH:
                if ret == LZMA_STREAM_END:
                    break
                if ret != LZMA_OK:
                    raise AdapterError("lzma_code failed while flushing", ret)
            else:
                if ret not in (LZMA_OK, LZMA_STREAM_END, LZMA_BUF_ERROR):
                    raise AdapterError("lzma_code failed while decoding", ret)
                if s.avail_out and not s.avail_in:
                    break
                if ret == LZMA_BUF_ERROR:
                    raise AdapterError("lzma_code made no progress", ret)
        s.next_in = None
        return b"".join(parts)

    def __del__(self):
        try:
            self.lib.lzma_end(ctypes.byref(self.stream))
        except Exception:
            pass


class LzmaSyncAdapter(CodecAdapter):
    """liblzma .xz stream, LZMA_SYNC_FLUSH after every packet."""

    name = "lzma-sync"
    DEFAULT_LEVEL = 3

    @classmethod
    def available(cls):
        return _load_liblzma() is not None

    def __init__(self, config=None, level=None, extreme=False):
        lib = _load_liblzma()
        if lib is None:
            raise AdapterError("liblzma not found")
        self.level = self.DEFAULT_LEVEL if level is None else level
        self.extreme = extreme
        preset = self.level | (LZMA_PRESET_EXTREME if extreme else 0)
        enc = _LzmaStream()
        ret = lib.lzma_easy_encoder(ctypes.byref(enc), preset, LZMA_CHECK_CRC64)
        if ret != LZMA_OK:
            raise AdapterError("lzma_easy_encoder failed", ret)
        dec = _LzmaStream()
        ret = lib.lzma_stream_decoder(ctypes.byref(dec), (1 << 64) - 1, 0)
        if ret != LZMA_OK:
            raise AdapterError("lzma_stream_decoder failed", ret)
        self._enc = _LzmaPipe(lib, enc)
        self._dec = _LzmaPipe(lib, dec)

    def settings(self):
        return {"level": self.level, "extreme": self.extreme, "check": "crc64",
                "liblzma": _load_liblzma().lzma_version_string().decode()}

    def compress_packet(self, data):
        return self._enc.run(data, LZMA_SYNC_FLUSH)

    def decompress_packet(self, data):
        return self._dec.run(data, LZMA_RUN)


ADAPTERS = {a.name: a for a in (NullAdapter, AphcAdapter, DeflateSyncAdapter, LzmaSyncAdapter)}
KNOWN_CODECS = tuple(ADAPTERS)


def list_codecs():
    """Names of adapters usable in this environment."""
    return [name for name, cls in ADAPTERS.items() if cls.available()]


def make_adapter(name, config=None, level=None):
    """Fresh stream instance of the named codec."""
    cls = ADAPTERS.get(name)
    if cls is None or not cls.available():
        raise UnknownCodecError(name, list_codecs())
    if cls is NullAdapter:
        return cls()
    return cls(config=config, level=level)


# decoders raise their own error types; bench treats all of these as failures
DECODE_ERRORS = (AdapterError, CorruptionError)
