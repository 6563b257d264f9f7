"""Per-packet stream compression: LZ77 over suffix-tree blocks with adaptive
canonical Huffman coding, plus traces, baselines and a benchmark harness."""

from .codec import CodecConfig, Decoder, Encoder, ParseTuple, compress_packets, decompress_packets
from .errors import (
    AdapterError, AphcError, ConfigurationError, CorruptionError, FormatError,
    OversizeError, TruncationError, UnknownCodecError, UsageError,
)
from .trace_io import PacketTrace, read_trace, trace_stats, write_trace

__version__ = "0.1.0"
