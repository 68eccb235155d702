"""Exact compressed-size model: dictionary + RLE values + pairs + row offsets.

All sizes are in bits and exclude the fixed container header.
"""

from dataclasses import dataclass

from .rle import RleSequence, packet_size


@dataclass(frozen=True)
class SizeBreakdown:
    dict_bits: int
    rle_bits: int
    pair_bits: int
    offset_bits: int

    @property
    def total_bits(self):
        return self.dict_bits + self.rle_bits + self.pair_bits + self.offset_bits

    def as_dict(self):
        return {"dict_bits": self.dict_bits, "rle_bits": self.rle_bits,
                "pair_bits": self.pair_bits, "offset_bits": self.offset_bits,
                "total_bits": self.total_bits}


def _values(seq):
    values = seq.values if isinstance(seq, RleSequence) else tuple(seq)
    if len(values) % 2:
        raise ValueError(f"RLE value sequence of odd length {len(values)}")
    return values


def rle_value_size(v):
    return packet_size(v)


def s_rle(sequences):
    return sum(packet_size(v) for seq in sequences for v in _values(seq))


def n_pairs(sequences):
    total = 0
    for seq in sequences:
        values = _values(seq)
        total += sum(1 for r in values[0::2] if r) + sum(values[1::2])
    return total


def s_pairs(pair_count, l_id, l_d):
    return pair_count * (l_id + l_d)


def offset_width(stream_bits):
    """Bits per stored row offset into a stream of ``stream_bits`` bits.

    ``ceil(log2(x))`` floored at one bit, so empty and one-bit streams
    still get a self-describing field.
    """
    return (stream_bits - 1).bit_length() if stream_bits > 2 else 1


def s_offset(height, pair_bits, rle_bits):
    if height < 1:
        raise ValueError("image height must be at least 1")
    return height * (offset_width(pair_bits) + offset_width(rle_bits))


def breakdown(n_b, l_b, l_id, l_d, height, rle_bits, pair_count):
    pair_bits = s_pairs(pair_count, l_id, l_d)
    return SizeBreakdown(
        dict_bits=n_b * l_b,
        rle_bits=rle_bits,
        pair_bits=pair_bits,
        offset_bits=s_offset(height, pair_bits, rle_bits),
    )


def total_size(config, tree, sequences):
    """Size of the configuration ``config`` whose rows encode to ``sequences``."""
    sequences = list(sequences)
    if tree is not None and tree.n_b != config.n_b:
        raise ValueError(f"tree has {tree.n_b} bases but config has {config.n_b}")
    sel = config.selection
    return breakdown(config.n_b, sel.base_bits, config.l_id, sel.deviation_bits,
                     len(sequences), s_rle(sequences), n_pairs(sequences))
