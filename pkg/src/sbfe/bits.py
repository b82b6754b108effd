"""Bit-level helpers for truth tables packed into Python integers.

A table over k variables is a single int whose bit at position ``idx``
holds f(idx), where bit j of ``idx`` is the value of the j-th variable
(LSB = variable at position 0). All helpers below treat tables in this
packed form.
"""

from functools import lru_cache


@lru_cache(maxsize=None)
def repeating_mask(total_bits: int, block: int) -> int:
    """Mask of width ``total_bits`` with the pattern: ``block`` ones, ``block`` zeros, repeating.

    Ones sit at positions whose index has a 0 in the bit selecting the block,
    i.e. positions [2*block*t, 2*block*t + block).
    """
    ones = (1 << block) - 1
    period = 2 * block
    reps = total_bits // period
    if reps == 0:
        return ones & ((1 << total_bits) - 1)
    repunit = ((1 << (period * reps)) - 1) // ((1 << period) - 1)
    return ones * repunit


def table_fix(bits: int, nvars: int, pos: int, value: int) -> int:
    """Restrict a 2^nvars table by fixing the variable at ``pos`` to ``value``.

    Returns a 2^(nvars-1) table over the remaining positions (positions
    above ``pos`` shift down by one). Works in O(nvars) big-int operations.
    """
    size = 1 << nvars
    s = 1 << pos
    mask = repeating_mask(size, s)
    sel = (bits >> (s if value else 0)) & mask
    # Compact blocks of s bits at spacing 2s into a contiguous prefix.
    b = s
    while b < size // 2:
        sel = (sel | (sel >> b)) & repeating_mask(size, 2 * b)
        b *= 2
    return sel


def table_fix_naive(bits: int, nvars: int, pos: int, value: int) -> int:
    """Reference implementation of :func:`table_fix` by index arithmetic."""
    out = 0
    low_mask = (1 << pos) - 1
    for idx in range(1 << (nvars - 1)):
        src = ((idx >> pos) << (pos + 1)) | (value << pos) | (idx & low_mask)
        if (bits >> src) & 1:
            out |= 1 << idx
    return out


def table_unfix(half: int, nvars: int, pos: int) -> int:
    """Insert an ignored variable at ``pos`` into a 2^(nvars-1) table.

    The result is a 2^nvars table whose value does not depend on the
    inserted variable. Inverse of :func:`table_fix` for either value.
    """
    size = 1 << nvars
    s = 1 << pos
    # Spread the contiguous prefix back out to blocks of s at spacing 2s.
    b = size // 2
    x = half
    while b > s:
        half_b = b // 2
        low = repeating_mask(size, half_b) & repeating_mask(size, b)
        high = (repeating_mask(size, half_b) << half_b) & repeating_mask(size, b)
        x = (x & low) | ((x & high) << half_b)
        b = half_b
    return x | (x << s)


def table_is_constant(bits: int, nvars: int) -> bool:
    size = 1 << nvars
    return bits == 0 or bits == (1 << size) - 1
