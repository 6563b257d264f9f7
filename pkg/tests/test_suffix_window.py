import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aphc import oracles
from aphc.suffix_window import SuffixTree, Window


def tree_of(data):
    return SuffixTree().extend(data)


def leaf_strings(tree):
    """Strings spelled by root-to-leaf paths."""
    text = bytes(tree.text)
    out = []
    stack = [(0, b"")]
    while stack:
        node, path = stack.pop()
        if node and tree.end[node] == -1:
            out.append(path + text[tree.start[node]:])
            continue
        if node:
            path += text[tree.start[node]:tree.end[node]]
        stack.extend((c, path) for c in tree.children[node].values())
    return out


def test_banana_suffixes():
    t = tree_of(b"banana")
    leaves = set(leaf_strings(t))
    suffixes = {b"banana", b"anana", b"nana", b"ana", b"na", b"a"}
    # implicit tree: every leaf is a suffix, every suffix is spelled from the root
    assert leaves <= suffixes
    assert all(t.contains(s) for s in suffixes)
    assert {s for s in suffixes if any(l.startswith(s) for l in leaves)} == suffixes


def test_single_byte_is_one_leaf():
    t = tree_of(b"x")
    assert t.node_count == 2 and leaf_strings(t) == [b"x"]


def test_node_bound_on_random_block():
    data = random.Random(7).randbytes(4096)
    assert tree_of(data).node_count <= 8192


def test_internal_nodes_branch():
    t = tree_of(random.Random(3).choices(b"ab", k=500))
    for node in range(1, t.node_count):
        if t.end[node] != -1:
            assert len(t.children[node]) >= 2


@pytest.mark.parametrize("text,pattern,limit,expected", [
    (b"abcabx", b"abcd", None, (0, 3)),
    (b"abcabx", b"", None, (0, 0)),
    (b"aaaa", b"aaaaaa", 6, (0, 4)),
    (b"abcabx", b"bx", None, (4, 2)),
    (b"abcabx", b"zz", None, (0, 0)),
])
def test_prefix_match_examples(text, pattern, limit, expected):
    assert tree_of(text).longest_prefix_match(pattern, limit) == expected
    brute = oracles.longest_match([text], pattern, 1, limit or len(pattern), 1 << 20)
    assert (brute or (0, 0)) == expected


def test_substring_completeness_sampled():
    rng = random.Random(11)
    for _ in range(20):
        alphabet = rng.choice((b"ab", b"acgt", bytes(range(256))))
        text = bytes(rng.choices(alphabet, k=rng.randint(1, 512)))
        t = tree_of(text)
        subs = oracles.substrings(text) if len(text) <= 120 else None
        for _ in range(50):
            if rng.random() < 0.5:
                i = rng.randrange(len(text))
                probe = text[i:i + rng.randint(1, 20)]
            else:
                probe = bytes(rng.choices(alphabet, k=rng.randint(1, 6)))
            expected = probe in subs if subs is not None else probe in text
            assert t.contains(probe) == expected


def test_construction_steps_linear():
    for alphabet in (b"a", b"ab", bytes(range(256))):
        data = bytes(random.Random(5).choices(alphabet, k=8192))
        assert tree_of(data).steps <= 20 * 8192


def test_incremental_extension_matches_batch():
    data = random.Random(2).randbytes(1000)
    a = tree_of(data)
    b = SuffixTree()
    for i in range(0, 1000, 37):
        b.extend(data[i:i + 37])
    assert a.start == b.start and a.end == b.end and a.children == b.children


def test_append_evicts_oldest():
    w = Window(block_size=16, max_blocks=2)
    assert w.append(bytes(48)) == 1
    assert w.total_live == 32 and len(w.blocks) == 2
    assert [b.base_offset for b in w.blocks] == [0, 16]


def test_append_nothing():
    w = Window(16, 2)
    assert w.append(b"") == 0 and w.total_live == 0 and w.blocks == []


def test_partial_block():
    w = Window(16, 2)
    w.append(b"0123456789")
    assert w.total_live == 10 and len(w.blocks) == 1


def test_find_match_the_cat():
    w = Window(64, 2)
    w.append(b"the cat")
    assert w.find_match(b"the dog", 3, 258) == (0, 4)
    assert w.find_match(b"the dog", 5, 258) is None


def test_find_match_empty_and_absent():
    w = Window(64, 2)
    assert w.find_match(b"abc", 3, 10) is None
    w.append(b"xyzxyz")
    assert w.find_match(b"abc", 1, 10) is None


def test_ties_prefer_newest_block():
    w = Window(8, 3)
    w.append(b"abcdefgh" + b"abcd0000" + b"zzabcd")
    assert w.find_match(b"abcd", 3, 8) == (18, 4)


def test_read_spans_blocks():
    w = Window(4, 3, indexed=False)
    w.append(b"0123456789")
    assert w.read(2, 6) == b"234567"
    with pytest.raises(IndexError):
        w.read(8, 3)


def test_match_oracle_500_instances():
    rng = random.Random(99)
    for _ in range(500):
        bs = rng.choice((32, 128, 512, 1024))
        mb = rng.randint(1, 4)
        alphabet = rng.choice((b"ab", b"abc", b"0123456789", bytes(range(256))))
        w = Window(bs, mb)
        for _ in range(rng.randint(0, 5)):
            w.append(bytes(rng.choices(alphabet, k=rng.randint(0, 600))))
        look = bytes(rng.choices(alphabet, k=rng.randint(0, 64)))
        lo, hi = rng.randint(2, 4), rng.randint(4, 64)
        live = [bytes(b.data) for b in w.blocks]
        got = w.find_match(look, lo, hi)
        assert got == oracles.longest_match(live, look, lo, hi, bs)
        if got:
            assert w.read(*got) == look[:got[1]]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.binary(max_size=300), max_size=8), st.binary(min_size=1, max_size=40))
def test_eviction_never_exposes_dead_bytes(chunks, look):
    w = Window(64, 3)
    everything = b""
    for c in chunks:
        w.append(c)
        everything += c
    live = w.live_bytes()
    assert everything.endswith(live)
    assert len(live) == w.total_live <= 3 * 64
    m = w.find_match(look, 1, 64)
    if m:
        pos, n = m
        assert pos + n <= w.total_live and live[pos:pos + n] == look[:n]
