"""
LZ77 sliding window made of fixed-size blocks, each indexed by its own
suffix tree built online with Ukkonen's algorithm.

The trees are implicit (no terminator): every substring of a block's text is
spelled by some root-to-locus path, which is all a longest-prefix query needs.
Matches never span two blocks.
"""

from __future__ import annotations

_LEAF = -1


class SuffixTree:
    """Online suffix tree over a growing byte string.

    Nodes live in parallel lists indexed by node id; node 0 is the root.
    ``end`` is ``_LEAF`` for leaves, whose edges run to the end of the text.
    ``min_start`` holds the smallest suffix start found in a node's subtree,
    which is the leftmost occurrence of any string ending on the edge into it.
    """

    def __init__(self):
        self.text = bytearray()
        self.start = [0]
        self.end = [0]
        self.link = [0]
        self.children = [{}]
        self.min_start = [0]
        self.leaf_count = 0
        self.steps = 0  # active-point moves, for the linear-time check
        self._active_node = 0
        self._active_edge = 0
        self._active_length = 0
        self._remainder = 0

    def __len__(self):
        return len(self.text)

    @property
    def node_count(self):
        return len(self.start)

    def _new_node(self, start, end, min_start):
        self.start.append(start)
        self.end.append(end)
        self.link.append(0)
        self.children.append({})
        self.min_start.append(min_start)
        return len(self.start) - 1

    def extend(self, data):
        """Append ``data`` byte by byte, updating the tree after each byte."""
        text = self.text
        start, end, link, children, min_start = (
            self.start, self.end, self.link, self.children, self.min_start)
        new_node = self._new_node
        active_node = self._active_node
        active_edge = self._active_edge
        active_length = self._active_length
        remainder = self._remainder
        steps = self.steps

        for c in data:
            text.append(c)
            pos = len(text) - 1
            remainder += 1
            last_new = 0
            while remainder:
                steps += 1
                if active_length == 0:
                    active_edge = pos
                edge_char = text[active_edge]
                child = children[active_node].get(edge_char)
                if child is None:
                    leaf = new_node(pos, _LEAF, pos - remainder + 1)
                    self.leaf_count += 1
                    children[active_node][edge_char] = leaf
                    if last_new:
                        link[last_new] = active_node
                        last_new = 0
                else:
                    e = end[child]
                    edge_len = (pos + 1 if e == _LEAF else e) - start[child]
                    if active_length >= edge_len:
                        active_edge += edge_len
                        active_length -= edge_len
                        active_node = child
                        continue
                    if text[start[child] + active_length] == c:
                        if last_new and active_node:
                            link[last_new] = active_node
                        active_length += 1
                        break
                    split_at = start[child] + active_length
                    split = new_node(start[child], split_at, min_start[child])
                    children[active_node][edge_char] = split
                    leaf = new_node(pos, _LEAF, pos - remainder + 1)
                    self.leaf_count += 1
                    children[split][c] = leaf
                    start[child] = split_at
                    children[split][text[split_at]] = child
                    if last_new:
                        link[last_new] = split
                    last_new = split
                remainder -= 1
                if active_node == 0 and active_length > 0:
                    active_length -= 1
                    active_edge = pos - remainder + 1
                elif active_node:
                    active_node = link[active_node]

        self._active_node = active_node
        self._active_edge = active_edge
        self._active_length = active_length
        self._remainder = remainder
        self.steps = steps
        return self

    def longest_prefix_match(self, pattern, limit=None):
        """Longest prefix of ``pattern`` occurring in the text.

        Returns ``(offset, length)`` where ``offset`` is the leftmost
        occurrence; ``(0, 0)`` when not even the first byte occurs.
        """
        n = len(pattern) if limit is None else min(len(pattern), limit)
        if n <= 0:
            return 0, 0
        text = self.text
        text_len = len(text)
        start, end, children = self.start, self.end, self.children
        node = 0
        matched = 0
        last = 0
        while matched < n:
            child = children[node].get(pattern[matched])
            if child is None:
                break
            s = start[child]
            e = end[child]
            edge_len = (text_len if e == _LEAF else e) - s
            k = min(edge_len, n - matched)
            last = child
            if text[s:s + k] == pattern[matched:matched + k]:
                matched += k
                if k < edge_len:
                    break
                node = child
            else:
                j = 1  # first byte matched via the child lookup
                while text[s + j] == pattern[matched + j]:
                    j += 1
                matched += j
                break
        if not matched:
            return 0, 0
        return self.min_start[last], matched

    def contains(self, s):
        return self.longest_prefix_match(s)[1] == len(s)

    def suffixes(self):
        """All suffixes of the text, read back by walking the tree."""
        text = bytes(self.text)
        found = set()
        stack = [(0, b"")]
        while stack:
            node, path = stack.pop()
            if node and self.end[node] == _LEAF:
                found.add(path + text[self.start[node]:])
                continue
            if node:
                path = path + text[self.start[node]:self.end[node]]
            for child in self.children[node].values():
                stack.append((child, path))
        # implicit suffixes end mid-edge; they are prefixes of explicit ones
        return {text[i:] for i in range(len(text)) if any(
            f.startswith(text[i:]) for f in found)}


class Block:
    __slots__ = ("base_offset", "data", "tree")

    def __init__(self, base_offset, indexed=True):
        self.base_offset = base_offset
        self.tree = SuffixTree() if indexed else None
        self.data = self.tree.text if indexed else bytearray()

    def __len__(self):
        return len(self.data)


class Window:
    """Bounded queue of blocks; positions count from the oldest live byte.

    With ``indexed=False`` no suffix trees are kept; decoders only need the
    bytes.
    """

    def __init__(self, block_size=8192, max_blocks=4, indexed=True):
        if block_size < 1 or max_blocks < 1:
            raise ValueError("block_size and max_blocks must be positive")
        self.block_size = block_size
        self.max_blocks = max_blocks
        self.indexed = indexed
        self.blocks = []
        self.total_live = 0

    @property
    def capacity(self):
        return self.block_size * self.max_blocks

    def append(self, data):
        """Add bytes to the newest block, opening and evicting blocks as needed.

        Returns the number of evicted blocks. Every eviction shifts all
        positions down by ``block_size``.
        """
        evicted = 0
        i = 0
        n = len(data)
        bs = self.block_size
        while i < n:
            if not self.blocks or len(self.blocks[-1]) == bs:
                if len(self.blocks) == self.max_blocks:
                    self.blocks.pop(0)
                    self.total_live -= bs
                    evicted += 1
                    for k, b in enumerate(self.blocks):
                        b.base_offset = k * bs
                self.blocks.append(Block(len(self.blocks) * bs, self.indexed))
            block = self.blocks[-1]
            take = min(bs - len(block), n - i)
            chunk = data[i:i + take]
            if self.indexed:
                block.tree.extend(chunk)
            else:
                block.data += chunk
            self.total_live += take
            i += take
        return evicted

    def find_match(self, lookahead, min_len, max_len):
        """Longest match of a prefix of ``lookahead`` inside one live block.

        Returns ``(position, length)`` or None when nothing reaches
        ``min_len``. Ties go to the newest block, then the smallest offset.
        """
        if not self.indexed:
            raise RuntimeError("find_match needs an indexed window")
        cap = min(max_len, len(lookahead))
        if cap < min_len or not self.blocks:
            return None
        best_len = 0
        best_pos = 0
        for block in reversed(self.blocks):
            off, length = block.tree.longest_prefix_match(lookahead, cap)
            if length > best_len:
                best_len = length
                best_pos = block.base_offset + off
                if length == cap:
                    break
        if best_len < min_len:
            return None
        return best_pos, best_len

    def read(self, position, length):
        """Copy ``length`` live bytes starting at ``position``."""
        if position < 0 or length < 0 or position + length > self.total_live:
            raise IndexError(f"range {position}+{length} outside window of {self.total_live}")
        bs = self.block_size
        k, off = divmod(position, bs)
        data = self.blocks[k].data
        if off + length <= len(data):
            return bytes(data[off:off + length])
        out = bytearray()
        while length:
            data = self.blocks[k].data
            take = min(len(data) - off, length)
            out += data[off:off + take]
            length -= take
            k += 1
            off = 0
        return bytes(out)

    def live_bytes(self):
        return b"".join(bytes(b.data) for b in self.blocks)
