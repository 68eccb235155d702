"""BaseTree: a binary trie over base bit positions, with lossy pruning.

The tree is stored level-wise rather than as linked nodes.  Every chunk
carries the label of the leaf it currently sits in; labels are kept sorted
by leaf prefix, so label order is the left-to-right leaf order of the trie
(the 0 branch left of the 1 branch).  A leaf's prefix is the base value of
all chunks mapped to it, bits in expansion order.

Pruning flips the level bit of every chunk in the pruned child, moving it
into its sibling.  The flips are kept as a per-chunk XOR mask so the
original chunks stay recoverable.
"""

from dataclasses import dataclass
import math

import numpy as np

from .image_model import bit_significance


def bmse(p_bits, q_bits, m, n):
    """Binary mean square error of mapping bits ``p`` onto ``q``.

    ``p_bits`` and ``q_bits`` hold the level bit of each of the ``k`` mapped
    chunks before and after the mapping, ``m`` is the bit's significance in
    its channel and ``n`` the number of chunks in the image.
    """
    scale = 1 << m
    return sum((scale * p - scale * q) ** 2 for p, q in zip(p_bits, q_bits)) / n


def psnr(bmse_value, t=7):
    """PSNR in dB of a mapping with the given BMSE; ``t`` is the top bit significance."""
    if bmse_value == 0:
        return math.inf
    return 20.0 * math.log10((1 << t) / math.sqrt(bmse_value))


def mapping_psnr(k, m, n, t=7):
    """PSNR of flipping one bit of significance ``m`` in ``k`` of ``n`` chunks."""
    return psnr(bmse([1] * k, [0] * k, m, n), t)


@dataclass(frozen=True)
class Leaf:
    prefix: int
    indices: np.ndarray


@dataclass(frozen=True)
class Mapping:
    """One performed pruning: leaf ``source`` merged into ``target``."""

    pos: int
    source: int
    target: int
    k: int
    psnr: float


class BaseTree:
    def __init__(self, chunks):
        chunks = np.asarray(chunks, dtype=np.uint64).reshape(-1)
        if chunks.size == 0:
            raise ValueError("BaseTree needs at least one chunk")
        chunks.flags.writeable = False
        self.chunks = chunks
        self.flip_mask = np.zeros_like(chunks)
        self.labels = np.zeros(chunks.size, dtype=np.int64)
        self.prefixes = np.zeros(1, dtype=np.uint64)
        self.levels = []
        self._last_split = None

    @property
    def n_chunks(self):
        return int(self.chunks.size)

    @property
    def n_b(self):
        return int(self.prefixes.size)

    @property
    def height(self):
        return len(self.levels)

    @property
    def effective(self):
        """Chunks with all pruning flips applied."""
        return self.chunks ^ self.flip_mask

    def effective_chunk(self, i):
        return int(self.chunks[i] ^ self.flip_mask[i])

    @property
    def leaves(self):
        order = np.argsort(self.labels, kind="stable")
        bounds = np.searchsorted(self.labels[order], np.arange(self.n_b + 1))
        return [Leaf(int(self.prefixes[j]), order[bounds[j]:bounds[j + 1]])
                for j in range(self.n_b)]

    def _bit(self, pos):
        return ((self.effective >> np.uint64(pos)) & np.uint64(1)).astype(np.int64)

    def _check_new(self, pos):
        if pos in self.levels:
            raise ValueError(f"bit position {pos} already expanded")

    def count_new_bases(self, pos):
        """Number of leaves that would spawn two children if ``pos`` were expanded."""
        self._check_new(pos)
        counts = np.bincount(self.labels * 2 + self._bit(pos), minlength=2 * self.n_b)
        return int(np.count_nonzero((counts[0::2] > 0) & (counts[1::2] > 0)))

    def expand(self, pos):
        self._check_new(pos)
        keys = self.labels * 2 + self._bit(pos)
        uniq, inverse = np.unique(keys, return_inverse=True)
        parent = uniq >> 1
        self.prefixes = (self.prefixes[parent] << np.uint64(1)) | (uniq & 1).astype(np.uint64)
        self.labels = inverse.reshape(-1).astype(np.int64)
        self.levels.append(pos)
        self._last_split = parent

    def prune_level(self, pos, psnr_thr, t=7):
        """Prune the children spawned by the most recent expansion of ``pos``.

        For each parent with two children the smaller child (the 1 child on a
        tie) is mapped into its sibling when the mapping's PSNR exceeds
        ``psnr_thr``.  Returns the performed :class:`Mapping` list.
        """
        if not self.levels or self.levels[-1] != pos:
            raise ValueError(f"bit position {pos} is not the most recently expanded level")
        parent = self._last_split
        sizes = np.bincount(self.labels, minlength=self.n_b)
        scale = float(1 << bit_significance(pos))
        n = self.n_chunks
        # two children of one parent are adjacent labels (0 child first)
        left = np.flatnonzero(parent[:-1] == parent[1:])
        right = left + 1
        tie_or_right_smaller = sizes[right] <= sizes[left]
        source = np.where(tie_or_right_smaller, right, left)
        target = np.where(tie_or_right_smaller, left, right)

        is_source = np.zeros(self.n_b, dtype=bool)
        is_source[source] = True
        members = is_source[self.labels]
        p = self._bit(pos).astype(np.float64)
        q = 1.0 - p
        sq_err = np.where(members, (scale * p - scale * q) ** 2, 0.0)
        err = np.bincount(self.labels, weights=sq_err, minlength=self.n_b)
        with np.errstate(divide="ignore"):
            cost = 20.0 * np.log10((1 << t) / np.sqrt(err[source] / n))
        accept = cost > psnr_thr

        merge_into = np.arange(self.n_b)
        merge_into[source[accept]] = target[accept]
        mappings = [Mapping(pos, int(self.prefixes[s]), int(self.prefixes[d]),
                            int(sizes[s]), float(c))
                    for s, d, c in zip(source[accept], target[accept], cost[accept])]
        if mappings:
            flipped = merge_into[self.labels] != self.labels
            self.flip_mask[flipped] ^= np.uint64(1 << pos)
            keep = merge_into == np.arange(self.n_b)
            new_label = np.cumsum(keep) - 1
            self.labels = new_label[merge_into[self.labels]]
            self.prefixes = self.prefixes[keep]
            self._last_split = parent[keep]
        return mappings

    def enumerate_bases(self):
        """Return ``(dictionary, assignment)`` with IDs in first-occurrence order."""
        first = np.full(self.n_b, self.n_chunks, dtype=np.int64)
        np.minimum.at(first, self.labels, np.arange(self.n_chunks))
        order = np.argsort(first, kind="stable")
        rank = np.empty(self.n_b, dtype=np.int64)
        rank[order] = np.arange(self.n_b)
        dictionary = [int(v) for v in self.prefixes[order]]
        return dictionary, rank[self.labels]


def new_tree(chunks):
    return BaseTree(chunks)
