"""Bit-packed boolean vectors and matrices on uint64 words.

Bit j of a vector lives in word j // 64 at bit position j % 64. Padding bits of the
trailing word are always zero; every helper here preserves that.
"""

import numpy as np

WORD_BITS = 64
ONE = np.uint64(1)


def words_for(n: int) -> int:
    return (n + WORD_BITS - 1) // WORD_BITS


def zeros(shape: int | tuple[int, ...], n: int) -> np.ndarray:
    """Zeroed packed storage for `shape` vectors of `n` bits each."""
    if isinstance(shape, int):
        shape = (shape,)
    return np.zeros((*shape, words_for(n)), dtype=np.uint64)


def pack(bits, n: int | None = None) -> np.ndarray:
    """Pack a (..., n) boolean array into (..., words_for(n)) uint64 words."""
    bits = np.asarray(bits, dtype=bool)
    n = bits.shape[-1] if n is None else n
    if bits.shape[-1] != n:
        raise ValueError(f"expected {n} bits, got {bits.shape[-1]}")
    nbytes = words_for(n) * 8
    packed = np.packbits(bits, axis=-1, bitorder="little")
    pad = nbytes - packed.shape[-1]
    if pad:
        widths = [(0, 0)] * (packed.ndim - 1) + [(0, pad)]
        packed = np.pad(packed, widths)
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64)


def unpack(words: np.ndarray, n: int) -> np.ndarray:
    """Inverse of `pack`: (..., W) uint64 words to a (..., n) bool array."""
    words = np.ascontiguousarray(words, dtype=np.uint64).astype("<u8")
    raw = words.view(np.uint8)
    return np.unpackbits(raw, axis=-1, bitorder="little")[..., :n].astype(bool)


def locate(q: int) -> tuple[int, np.uint64]:
    """Word index and single-bit mask of bit `q`."""
    return q // WORD_BITS, ONE << np.uint64(q % WORD_BITS)


def column(words: np.ndarray, q: int) -> np.ndarray:
    """Bit `q` of every row of a (rows, W) matrix, as a bool array."""
    w, mask = locate(q)
    return (words[..., w] & mask) != 0


def flip_column(words: np.ndarray, q: int, flips: np.ndarray) -> None:
    """XOR bit `q` of every row with the matching entry of `flips`, in place."""
    w, _ = locate(q)
    words[..., w] ^= flips.astype(np.uint64) << np.uint64(q % WORD_BITS)


def popcount(words: np.ndarray, axis: int = -1) -> np.ndarray:
    return np.bitwise_count(words).sum(axis=axis, dtype=np.int64)


def parity(words: np.ndarray, axis: int = -1) -> np.ndarray:
    return popcount(words, axis=axis) & 1


def tail_mask(n: int) -> np.uint64:
    """Mask of the logical bits in the trailing word."""
    rem = n % WORD_BITS
    if rem == 0:
        return np.uint64(0xFFFFFFFFFFFFFFFF)
    return (ONE << np.uint64(rem)) - ONE


def padding_clear(words: np.ndarray, n: int) -> bool:
    if words.shape[-1] == 0:
        return True
    return not np.any(words[..., -1] & ~tail_mask(n))


def gf2_rank(rows: np.ndarray, nbits: int) -> int:
    """Rank over GF(2) of a (m, W) packed matrix by Gaussian elimination."""
    m = np.array(rows, dtype=np.uint64, copy=True)
    rank = 0
    for q in range(nbits):
        if rank == len(m):
            break
        col = column(m[rank:], q)
        hits = np.flatnonzero(col)
        if hits.size == 0:
            continue
        pivot = rank + hits[0]
        if pivot != rank:
            m[[rank, pivot]] = m[[pivot, rank]]
        others = np.flatnonzero(column(m, q))
        others = others[others != rank]
        m[others] ^= m[rank]
        rank += 1
    return rank
