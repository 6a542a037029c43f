"""Exact absorption law of a single-flip cascade inside a stripe gap.

When a site inside the empty gap between two robust stripes is flipped to
plus, the ensuing zero-temperature relaxation is confined to a small window
of gap columns:

* a flip at distance 1 from a stripe (and gap width > 2) can only ever
  activate its own column -- every other gap column keeps at most one plus
  neighbour until some other frozen column flips first, which is circular;
* a flip at distance 2 (gap width > 3) activates at most the two columns
  between itself and the near stripe;
* for the two narrow gaps (width 2, flip distance 1; width 3, flip distance
  2) the window spans the whole gap and both stripe boundaries.

Within the window, relaxation is the uniform-over-susceptible absorption
chain of the full lattice restricted to the window cells, with the stripe
boundary columns held at plus and any frozen gap columns held at minus.
Every terminal (robust) window configuration consists of full columns
contiguous to a plus boundary, so the absorption law projects onto "how many
gap columns filled".

The computation is exact (:class:`fractions.Fraction`) and exploits the
symmetries of the window dynamics -- row translation, row reflection and,
for windows with plus boundaries on both sides and a centred seed, column
reversal -- to collapse the memoised state space.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from .errors import EnumerationBudgetError

__all__ = ["window_cascade", "gap_flip_distribution"]


def _reflect_table(n_rows: int) -> tuple[int, ...]:
    """Bit-reversal table for ``n_rows``-bit column masks."""
    table = []
    for value in range(1 << n_rows):
        rev = 0
        for r in range(n_rows):
            if value >> r & 1:
                rev |= 1 << (n_rows - 1 - r)
        table.append(rev)
    return tuple(table)


@lru_cache(maxsize=None)
def _tables(n_rows: int) -> tuple[int, tuple[int, ...]]:
    return (1 << n_rows) - 1, _reflect_table(n_rows)


def window_cascade(
    n_rows: int,
    width: int,
    left_plus: bool,
    right_plus: bool,
    seed_col: int,
    budget: int = 5_000_000,
) -> dict[int, Fraction]:
    """Exact law of the number of window columns filled at absorption.

    The window is ``width`` gap columns by ``n_rows`` rows (rows wrap).  The
    column left of the window is all plus if ``left_plus`` else permanently
    minus, and likewise on the right.  The cascade starts from a single plus
    at row 0 of ``seed_col``.  Returns ``{filled_column_count: probability}``
    with exact rational probabilities summing to one.
    """
    mask, refl = _tables(n_rows)
    top = n_rows - 1

    # States are packed into one integer, column-major: bit (c * n_rows + r)
    # is the spin at row r of window column c.  Row rotation then shifts each
    # n_rows-bit field by one with wrap-around, which is three int ops.
    low_bits = 0
    bottom_bits = 0
    col_mask = []
    for c in range(width):
        low_bits |= (mask >> 1) << (c * n_rows)
        bottom_bits |= 1 << (c * n_rows)
        col_mask.append(mask << (c * n_rows))
    top_bits = bottom_bits << top

    def rot1_packed(x: int) -> int:
        return ((x & low_bits) << 1) | ((x & top_bits) >> top)

    def reflect_packed(x: int) -> int:
        out = 0
        for c in range(width):
            out |= refl[(x >> (c * n_rows)) & mask] << (c * n_rows)
        return out

    def reverse_cols(x: int) -> int:
        out = 0
        for c in range(width):
            out |= ((x >> (c * n_rows)) & mask) << ((width - 1 - c) * n_rows)
        return out

    col_flip = left_plus == right_plus and (
        width % 2 == 1 and seed_col == width // 2 or width == 2
    )

    spins = range(n_rows - 1)

    def canonical(x: int) -> int:
        variants = [x, reflect_packed(x)]
        if col_flip:
            variants.append(reverse_cols(variants[0]))
            variants.append(reverse_cols(variants[1]))
        best = x
        lb, tb, t = low_bits, top_bits, top
        for y in variants:
            if y < best:
                best = y
            for _ in spins:
                y = ((y & lb) << 1) | ((y & tb) >> t)
                if y < best:
                    best = y
        return best

    full_packed = sum(col_mask)

    def children_of(x: int) -> list[int]:
        out = []
        for c in range(width):
            shift = c * n_rows
            col = (x >> shift) & mask
            up = ((col << 1) | (col >> top)) & mask
            down = (col >> 1) | ((col & 1) << top)
            left = (mask if left_plus else 0) if c == 0 else (x >> (shift - n_rows)) & mask
            right = (
                (mask if right_plus else 0)
                if c == width - 1
                else (x >> (shift + n_rows)) & mask
            )
            ge2 = (up & down) | (left & right) | ((up ^ down) & (left ^ right))
            bits = ((col & ~ge2) | (~col & ge2)) & mask
            while bits:
                low = bits & -bits
                bits ^= low
                out.append(canonical(x ^ (low << shift)))
        return out

    # Distributions are stored as (num_0, ..., num_width, den): exact integer
    # numerators over a common denominator, gcd-reduced per node.  This is
    # several times cheaper than per-entry Fraction arithmetic in the DAG
    # traversal below.
    start = canonical(1 << (seed_col * n_rows))
    memo: dict[int, tuple[int, ...]] = {}
    kids: dict[int, list[int]] = {}
    stack: list[int] = [start]
    outcomes = width + 1
    while stack:
        state = stack[-1]
        if state in memo:
            stack.pop()
            continue
        children = kids.get(state)
        if children is None:
            children = children_of(state)
            if not children:
                filled = 0
                leftover = state
                for cm in col_mask:
                    if state & cm == cm:
                        filled += 1
                        leftover ^= state & cm
                if leftover:
                    raise EnumerationBudgetError(
                        "terminal window state contains a partial column"
                    )
                point = [0] * (outcomes + 1)
                point[filled] = 1
                point[outcomes] = 1
                memo[state] = tuple(point)
                stack.pop()
                continue
            kids[state] = children
            pending = [c for c in children if c not in memo]
            if pending:
                stack.extend(pending)
                continue
        dists = [memo[c] for c in children]
        common = lcm(*[d[outcomes] for d in dists])
        nums = [0] * outcomes
        for d in dists:
            scale = common // d[outcomes]
            for i in range(outcomes):
                if d[i]:
                    nums[i] += d[i] * scale
        den = common * len(children)
        g = gcd(den, *nums)
        memo[state] = tuple(n // g for n in nums) + (den // g,)
        del kids[state]
        stack.pop()
        if len(memo) > budget:
            raise EnumerationBudgetError(
                f"window cascade exceeded {budget} memoised states"
            )
    result = memo[start]
    den = result[outcomes]
    return {
        filled: Fraction(result[filled], den)
        for filled in range(outcomes)
        if result[filled]
    }


@lru_cache(maxsize=None)
def gap_flip_distribution(n_rows: int, gap: int, distance: int) -> dict[int, Fraction]:
    """Exact law of the remaining gap width after flipping one gap site.

    The flipped site sits at torus distance ``distance`` (1 or 2) from the
    nearer stripe inside a gap of width ``gap``.  Returns
    ``{new_gap_width: probability}`` computed from the window absorption
    chain, with the window geometry chosen per the confinement analysis in
    the module docstring.
    """
    if distance == 1 and gap == 2:
        dist = window_cascade(n_rows, 2, True, True, 0)
    elif distance == 1:
        dist = window_cascade(n_rows, 1, True, False, 0)
    elif distance == 2 and gap == 3:
        dist = window_cascade(n_rows, 3, True, True, 1)
    elif distance == 2 and gap > 3:
        dist = window_cascade(n_rows, 2, True, False, 1)
    else:
        raise ValueError(f"no cascade window for gap={gap}, distance={distance}")
    return {gap - filled: p for filled, p in dist.items()}
