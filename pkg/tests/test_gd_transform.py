from itertools import permutations

import numpy as np
from hypothesis import given
import hypothesis.strategies as st
import pytest

from rage.gd_transform import BitSelection, Merger, merge, split, split_array


def test_split_examples():
    sel = BitSelection((7, 6, 5, 4, 3), 8)
    assert split(0b10110010, sel) == (0b10110, 0b010)
    assert merge(0b10110, 0b010, sel) == 0b10110010


def test_selection_order_sets_significance():
    sel = BitSelection((0, 7), 8)
    assert split(0b10000001, sel) == (0b11, 0)
    assert split(0b00000001, sel) == (0b10, 0)
    assert sel.deviation_positions == (6, 5, 4, 3, 2, 1)


def test_full_selection_has_empty_deviation():
    sel = BitSelection(tuple(range(8)), 8)
    assert sel.deviation_bits == 0
    # base bits come out in selection order, so bit 0 is the base MSB
    assert split(0b00000001, sel) == (0b10000000, 0)


def test_invalid_selection():
    with pytest.raises(ValueError):
        BitSelection((1, 1), 8)
    with pytest.raises(ValueError):
        BitSelection((8,), 8)


def test_zero_deviation_merge_exhaustive():
    for perm in permutations(range(4)):
        sel = BitSelection(perm, 4)
        for c in range(16):
            base, dev = split(c, sel)
            assert dev == 0
            assert merge(base, 0, sel) == c


@given(st.sampled_from([24, 32]).flatmap(lambda n: st.tuples(
    st.permutations(range(n)), st.integers(0, n), st.integers(0, (1 << n) - 1),
    st.just(n))))
def test_merger_matches_merge(args):
    perm, k, chunk, n = args
    sel = BitSelection(tuple(perm[:k]), n)
    base, dev = split(chunk, sel)
    assert merge(base, dev, sel) == chunk
    assert Merger(sel)(base, dev) == chunk


def test_split_array_matches_scalar(rng):
    sel = BitSelection((23, 0, 11, 5), 24)
    chunks = rng.integers(0, 1 << 24, size=64, dtype=np.uint64)
    bases, devs = split_array(chunks, sel)
    assert [split(c, sel) for c in chunks] == list(zip(bases.tolist(), devs.tolist()))
