"""
Deterministic synthetic server->client traffic shaped like a text-mode
multiplayer roguelike.

Packets start with one type byte followed by 1/2/4-byte binary fields,
run-length coded screen rows, or templated text. The packet kinds are
invented stand-ins; only the aggregate shape is targeted. The default
profile aims at 38% of packets <= 10 bytes, 84% <= 20 bytes, ~33 bytes mean
length and ~11% text bytes.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field, fields
from importlib import resources

from .errors import ConfigurationError
from .trace_io import PacketTrace

MASK64 = (1 << 64) - 1

# (label, lowest length, highest length)
STRATA = (
    ("0-10", 0, 10),
    ("11-20", 11, 20),
    ("21-100", 21, 100),
    ("101-1000", 101, 1000),
    ("1001+", 1001, 3000),
)


class SplitMix64:
    """SplitMix64 (Steele, Lea & Flood 2014); 64-bit state, one add per draw.

    ``below(n)`` reduces by modulo; the bias is below 2**-40 for the
    ranges used here.
    """

    def __init__(self, seed):
        self.state = seed & MASK64

    def next_u64(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def random(self):
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def below(self, n):
        return self.next_u64() % n

    def between(self, lo, hi):
        """Uniform integer in ``[lo, hi]``."""
        return lo + self.below(hi - lo + 1)

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def weighted(self, weights):
        x = self.random() * sum(weights)
        for i, w in enumerate(weights):
            x -= w
            if x < 0:
                return i
        return len(weights) - 1


@dataclass
class TrafficProfile:
    seed: int = 1
    size_mix: dict = field(default_factory=lambda: {
        "0-10": 0.38, "11-20": 0.46, "21-100": 0.13, "101-1000": 0.028, "1001+": 0.002})
    text_byte_fraction: float = 0.11
    stat_repeat_prob: float = 0.8
    template_pool_size: int = 24

    def validate(self):
        labels = [s[0] for s in STRATA]
        if sorted(self.size_mix) != sorted(labels):
            raise ConfigurationError(f"size_mix needs exactly the strata {labels}")
        if any(not 0 <= w <= 1 for w in self.size_mix.values()):
            raise ConfigurationError("size_mix weights must lie in [0, 1]")
        if abs(sum(self.size_mix.values()) - 1) > 1e-9:
            raise ConfigurationError(
                f"size_mix weights sum to {sum(self.size_mix.values())}, not 1")
        for name in ("text_byte_fraction", "stat_repeat_prob"):
            if not 0 <= getattr(self, name) <= 1:
                raise ConfigurationError(f"{name} must lie in [0, 1]")
        if not 1 <= self.template_pool_size <= len(MONSTERS):
            raise ConfigurationError(f"template_pool_size must lie in 1..{len(MONSTERS)}")
        if self.seed < 0:
            raise ConfigurationError("seed must be non-negative")
        return self

    def to_text(self):
        lines = [f"seed={self.seed}"]
        for label, _, _ in STRATA:
            lines.append(f"mix.{label}={self.size_mix[label]!r}")
        lines.append(f"text_byte_fraction={self.text_byte_fraction!r}")
        lines.append(f"stat_repeat_prob={self.stat_repeat_prob!r}")
        lines.append(f"template_pool_size={self.template_pool_size}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        """Parse the flat ``key=value`` format; ``#`` starts a comment."""
        profile = cls()
        mix = {}
        types = {f.name: f.type for f in fields(cls)}
        for n, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = (s.strip() for s in line.partition("="))
            if not sep:
                raise ConfigurationError(f"line {n}: expected key=value")
            try:
                if key.startswith("mix."):
                    mix[key[4:]] = float(value)
                elif key in ("seed", "template_pool_size"):
                    setattr(profile, key, int(value))
                elif key in types and key != "size_mix":
                    setattr(profile, key, float(value))
                else:
                    raise ConfigurationError(f"line {n}: unknown key {key!r}")
            except ValueError:
                raise ConfigurationError(f"line {n}: bad value {value!r} for {key}") from None
        if mix:
            profile.size_mix = mix
        return profile.validate()

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fp:
            return cls.from_text(fp.read())


def default_profile():
    text = resources.files("aphc").joinpath("profiles/default.profile").read_text("utf-8")
    return TrafficProfile.from_text(text)


def describe_profile(profile):
    profile.validate()
    mix = profile.size_mix
    le10 = mix["0-10"]
    le20 = le10 + mix["11-20"]
    lines = [
        "synthetic traffic profile (invented packet kinds; aggregate shape only)",
        f"  seed: {profile.seed}",
        f"  target fraction <= 10 bytes: {le10:.2f}",
        f"  target fraction <= 20 bytes: {le20:.2f}",
        f"  target text byte fraction: {profile.text_byte_fraction:.2f}",
    ]
    for label, _, _ in STRATA:
        lines.append(f"  mix {label:>8}: {mix[label]:.3f}")
    lines.append(f"  stat repeat probability: {profile.stat_repeat_prob:.2f}")
    lines.append(f"  template pool size: {profile.template_pool_size}")
    return "\n".join(lines)


MONSTERS = (
    "cave orc", "snaga", "jackal", "kobold archer", "giant white louse", "cave spider",
    "wild dog", "black orc", "hill giant", "wolf", "warg", "uruk", "young blue dragon",
    "dark elven priest", "novice mage", "grip, Farmer Maggot's dog", "fang, Farmer Maggot's dog",
    "giant frog", "rock lizard", "soldier ant", "bullroarer the hobbit", "wormtongue",
    "grey mold", "disenchanter eye", "shrieker", "floating eye", "cutpurse", "apprentice",
)
PLAYERS = ("Moltor", "Ceyla", "Thrain", "Ari", "Vexx", "Lindir")
TEMPLATES = (
    "You hit the {m}.",
    "You miss the {m}.",
    "The {m} misses you.",
    "The {m} hits you.",
    "The {m} bites you.",
    "You have slain the {m}.",
    "The {m} flees in terror!",
    "You feel something roll beneath your feet.",
    "You have no more Flasks of oil.",
    "You have {n} gold pieces worth of items.",
    "{p} has entered the game.",
    "{p} has attained level {n}.",
    "{p} was slain by a {m}.",
    "You see a Potion of Cure Light Wounds.",
    "You feel less thirsty.",
    "You are hungry.",
)

MAP_W, MAP_H = 198, 66
VIEW_W, VIEW_H = 80, 22


class _World:
    """Mutable game state the packets are drawn from."""

    def __init__(self, rng, profile):
        self.rng = rng
        self.profile = profile
        self.monsters = MONSTERS[:profile.template_pool_size]
        self.x = MAP_W // 2
        self.y = MAP_H // 2
        self.turn = 1000
        self.hp, self.mhp = 120, 150
        self.sp, self.msp = 30, 40
        self.stats = [18, 16, 17, 14, 15, 12, 450, 12345, 2, 37]
        self.grid = self._make_map()
        self.inven = [(rng.between(1, 99), rng.between(1, 9), rng.between(1, 250)) for _ in range(23)]

    def _make_map(self):
        rng = self.rng
        grid = []
        for y in range(MAP_H):
            row = []
            x = 0
            while x < MAP_W:
                kind = rng.weighted((6, 3, 1, 1))
                run = rng.between(2, 14)
                if kind == 0:
                    cell = (1, ord("."))
                elif kind == 1:
                    cell = (7, ord("#"))
                elif kind == 2:
                    cell = (0, ord(" "))
                else:
                    cell = (rng.between(1, 15), ord(rng.choice("+'<>%:^$")))
                    run = 1
                row.extend([cell] * min(run, MAP_W - x))
                x += run
            grid.append(row)
        return grid

    def tick(self):
        rng = self.rng
        self.turn += rng.between(1, 4)
        if rng.random() < 0.02:
            y, x = rng.below(MAP_H), rng.below(MAP_W)
            self.grid[y][x] = (rng.between(1, 15), ord(rng.choice("okjCpZ")))

    # -- stratum 0-10 ---------------------------------------------------------

    def move(self):
        rng = self.rng
        self.x = min(MAP_W - 1, max(0, self.x + rng.between(-1, 1)))
        self.y = min(MAP_H - 1, max(0, self.y + rng.between(-1, 1)))
        return struct.pack("<BHH", 0x0B, self.x, self.y)

    def draw_char(self):
        rng = self.rng
        dx, dy = rng.between(-3, 3), rng.between(-2, 2)
        x = min(MAP_W - 1, max(0, self.x + dx))
        y = min(MAP_H - 1, max(0, self.y + dy))
        attr, ch = self.grid[y][x]
        if dx == 0 and dy == 0:
            attr, ch = 1, ord("@")
        return struct.pack("<BBBBB", 0x2A, (x - self.x + 40) & 0xFF, (y - self.y + 11) & 0xFF,
                           attr, ch)

    def hp_update(self):
        rng = self.rng
        self.hp = min(self.mhp, max(1, self.hp + rng.between(-6, 4)))
        return struct.pack("<BHH", 0x22, self.hp, self.mhp)

    def sp_update(self):
        self.sp = min(self.msp, max(0, self.sp + self.rng.between(-3, 2)))
        return struct.pack("<BHH", 0x23, self.sp, self.msp)

    def keepalive(self):
        if self.rng.random() < 0.5:
            return bytes((0x01,))
        return struct.pack("<BI", 0x02, self.turn)

    def state_flag(self):
        return bytes((0x05, self.rng.choice((0, 1, 1, 1, 2)), 0))

    # -- stratum 11-20 --------------------------------------------------------

    def stat_block(self):
        rng = self.rng
        if rng.random() >= self.profile.stat_repeat_prob:
            i = rng.below(len(self.stats))
            self.stats[i] = max(0, self.stats[i] + rng.between(-2, 3))
        s = self.stats
        return struct.pack("<BBBBBBBHI", 0x30, *s[:6], s[6], s[7])

    def multi_char(self):
        n = self.rng.between(3, 4)
        body = b"".join(self.draw_char()[1:] for _ in range(n))
        return bytes((0x2B, n)) + body

    def inven_slot(self):
        rng = self.rng
        slot = rng.below(len(self.inven))
        tval, sval, weight = self.inven[slot]
        count = rng.choice((1, 1, 1, 2, 5))
        return struct.pack("<BBBBHHHI", 0x33, ord("a") + slot, tval, sval, weight, count,
                           rng.choice((0, 0, 10)), 0)

    # -- stratum 21-100 -------------------------------------------------------

    def sentence(self):
        rng = self.rng
        t = TEMPLATES[rng.below(len(TEMPLATES))]
        return t.format(m=rng.choice(self.monsters), p=rng.choice(PLAYERS),
                        n=rng.between(2, 999))

    def message(self):
        text = self.sentence()
        while len(text) < 18 or (len(text) < 60 and self.rng.random() < 0.35):
            text += " " + self.sentence()
        raw = text.encode("ascii")[:97]
        return struct.pack("<BH", 0x40, len(raw)) + raw, len(raw)

    def binary_mid(self):
        rng = self.rng
        n = rng.between(4, 16)
        body = bytearray((0x41, n))
        for _ in range(n):
            slot = rng.below(len(self.inven))
            tval, sval, weight = self.inven[slot]
            body += struct.pack("<BBBHB", ord("a") + slot, tval, sval, weight, rng.choice((1, 1, 3)))
        return bytes(body)

    # -- strata 101-1000 and 1001+ ---------------------------------------------

    def rle_row(self, y):
        row = self.grid[y]
        x0 = max(0, min(MAP_W - VIEW_W, self.x - VIEW_W // 2))
        runs = bytearray()
        n = 0
        x = x0
        while x < x0 + VIEW_W:
            cell = row[x]
            k = 1
            while x + k < x0 + VIEW_W and row[x + k] == cell:
                k += 1
            if k >= 3:
                runs += bytes((0xFF, k, cell[0], cell[1]))
            else:
                runs += bytes((cell[0], cell[1])) * k
            n += 1
            x += k
        return bytes((y & 0xFF, n)) + runs

    def rows(self, lo, hi):
        rng = self.rng
        target = lo + int((hi - lo) * rng.random() ** 2)  # skewed toward lo
        y = max(0, self.y - VIEW_H // 2 + rng.below(VIEW_H))
        out = bytearray((0x50, 0))
        count = 0
        while len(out) < target:
            row = self.rle_row((y + count) % MAP_H)
            if len(out) + len(row) > hi:
                break
            out += row
            count += 1
        while len(out) < lo:  # pad with status filler
            out += bytes((0xFE, 0))
        out[1] = count & 0xFF
        return bytes(out[:hi])


def generate(profile, n_packets):
    """Return ``(trace, text_bytes)`` for ``n_packets`` packets."""
    if n_packets < 0:
        raise ConfigurationError("n_packets must be non-negative")
    profile.validate()
    rng = SplitMix64(profile.seed)
    world = _World(rng, profile)
    mix = [profile.size_mix[label] for label, _, _ in STRATA]
    # mean length implied by the mix with ~45-byte text packets and ~37-byte binary ones
    expected_mean = mix[0] * 5 + mix[1] * 16 + mix[2] * 42 + mix[3] * 330 + mix[4] * 2600
    p_text = 0.0
    if mix[2]:
        p_text = min(1.0, profile.text_byte_fraction * expected_mean / (mix[2] * 43))
    small = (world.move, world.move, world.move, world.draw_char, world.draw_char,
             world.hp_update, world.sp_update, world.keepalive, world.state_flag)
    mid = (world.stat_block, world.stat_block, world.multi_char, world.inven_slot)
    packets = []
    text_bytes = 0
    for _ in range(n_packets):
        world.tick()
        s = rng.weighted(mix)
        if s == 0:
            p = rng.choice(small)()
        elif s == 1:
            p = rng.choice(mid)()
        elif s == 2:
            if rng.random() < p_text:
                p, t = world.message()
                text_bytes += t
            else:
                p = world.binary_mid()
        elif s == 3:
            p = world.rows(101, 1000)
        else:
            p = world.rows(1001, 3000)
        packets.append(p)
    return PacketTrace(packets), text_bytes


def gen_trace(profile=None, n_packets=32000):
    return generate(profile or default_profile(), n_packets)[0]
