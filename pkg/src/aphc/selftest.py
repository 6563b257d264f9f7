"""Quick oracle checks runnable from the command line."""

from __future__ import annotations

import random

from . import oracles
from .adaptive_huffman import CodeTable, RebuildSchedule, huffman_code_lengths
from .bitstream import BitReader, BitWriter
from .codec import CodecConfig, Decoder, Encoder
from .suffix_window import Window


def check_bitstream(rng):
    pairs = [(n, rng.getrandbits(n) if n else 0) for n in (rng.randint(0, 32) for _ in range(1000))]
    w = BitWriter()
    for n, v in pairs:
        w.write_bits(v, n)
    w.align_to_byte()
    r = BitReader(w.buffer)
    return all(r.read_bits(n) == v for n, v in pairs)


def check_huffman(rng):
    for _ in range(100):
        freqs = [rng.randint(1, 200) for _ in range(rng.randint(2, 12))]
        lengths = huffman_code_lengths(freqs)
        if sum(f * n for f, n in zip(freqs, lengths)) != oracles.optimal_code_cost(freqs):
            return False
        num, den = CodeTable(lengths).kraft_sum()
        if num != den:
            return False
    return True


def check_longest_match(rng):
    for _ in range(100):
        bs = rng.choice((64, 256, 512))
        w = Window(bs, rng.randint(1, 4))
        alphabet = rng.choice((b"ab", b"abcd", bytes(range(256))))
        blocks_data = bytes(rng.choice(alphabet) for _ in range(rng.randint(0, 2048)))
        w.append(blocks_data)
        look = bytes(rng.choice(alphabet) for _ in range(rng.randint(0, 64)))
        live = [bytes(b.data) for b in w.blocks]
        if w.find_match(look, 2, 64) != oracles.longest_match(live, look, 2, 64, bs):
            return False
    return True


def check_schedule(_rng):
    s = RebuildSchedule(512)
    fired = []
    for seen in range(10001):
        if s.due(seen):
            fired.append(seen)
            s.advance(seen)
    return fired == oracles.rebuild_points(512, 10000)


def check_codec(rng):
    cfg = CodecConfig(block_size=512, max_blocks=4, ledger_size=256, rebuild_cap=64)
    enc, dec = Encoder(cfg), Decoder(cfg)
    history = []
    for _ in range(300):
        k = rng.random()
        if k < 0.4 and history:
            p = rng.choice(history)
        elif k < 0.7:
            p = bytes(rng.getrandbits(8) for _ in range(rng.randint(0, 40)))
        else:
            p = bytes([rng.randint(0, 3)]) * rng.randint(0, 50)
        history.append(p)
        snapshot = enc.window.live_bytes()
        tuples = enc.parse(p)
        if oracles.replay_parse(snapshot, tuples) != p:
            return False
        if dec.decode_packet(enc.encode_packet(p)) != p or enc.state_hash() != dec.state_hash():
            return False
    return True


CHECKS = (
    ("bitstream round-trip", check_bitstream),
    ("huffman optimality", check_huffman),
    ("longest match", check_longest_match),
    ("rebuild schedule", check_schedule),
    ("codec lockstep round-trip", check_codec),
)


def run(seed=0, out=print):
    ok = True
    for name, check in CHECKS:
        passed = check(random.Random(seed))
        ok &= passed
        out(f"{'PASS' if passed else 'FAIL'}  {name}")
    return ok
