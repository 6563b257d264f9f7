"""
Brute-force reference answers used by ``selftest`` and the test suite.

Nothing here shares code with the paths it checks; everything is written
for obviousness, not speed.
"""

from __future__ import annotations


def longest_match(blocks, lookahead, min_len, max_len, block_size):
    """Scan every block for the longest prefix of ``lookahead``.

    ``blocks`` are byte strings oldest to newest. Matches stay inside one
    block; ties go to the newest block, then the smallest offset.
    """
    cap = min(max_len, len(lookahead))
    best = None
    for k, data in enumerate(blocks):
        for off in range(len(data)):
            n = 0
            while n < cap and off + n < len(data) and data[off + n] == lookahead[n]:
                n += 1
            if n >= min_len and (best is None or n > best[1] or (n == best[1] and k > best[2])):
                best = (k * block_size + off, n, k)
    return None if best is None else best[:2]


def substrings(text):
    return {text[i:j] for i in range(len(text)) for j in range(i + 1, len(text) + 1)}


def optimal_code_cost(freqs):
    """Minimum of sum(freq * length) over all complete prefix codes.

    Enumerates every non-decreasing length profile satisfying Kraft equality,
    pairing the shortest lengths with the largest frequencies.
    """
    f = sorted(freqs, reverse=True)
    n = len(f)
    depth = n - 1
    best = [float("inf")]

    def walk(i, min_len, room, cost):
        # room: unused Kraft budget in units of 2**-depth
        if cost >= best[0]:
            return
        if i == n:
            if room == 0:
                best[0] = cost
            return
        left = n - i
        for length in range(min_len, depth + 1):
            unit = 1 << (depth - length)
            if unit > room:
                continue
            if left * unit < room:  # the rest can never fill the budget
                break
            walk(i + 1, length, room - unit, cost + f[i] * length)

    walk(0, 1, 1 << depth, 0)
    return best[0]


def replay_parse(window_bytes, tuples):
    """Expand parse tuples against a window snapshot."""
    out = bytearray()
    for t in tuples:
        if t.length:
            src = window_bytes[t.position:t.position + t.length]
            assert len(src) == t.length, "match runs past the window"
            out += src
        if t.literal is not None:
            out.append(t.literal)
    return bytes(out)


def rebuild_points(cap, tuples):
    """Tuple counts at which rebuilds fire: 2, 4, ... cap, then every cap."""
    points = []
    at = 2
    while at <= tuples:
        points.append(at)
        at = at * 2 if at < cap else at + cap
    return points
