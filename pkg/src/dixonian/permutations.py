"""Permutation families whose counting series are sm and cm.

Everything here grows out of one classification: each value of a
permutation is a valley, peak, double fall, or double rise relative to
its position neighbours, with a virtual minus-infinity on the left and
either border sign on the right.  The classification drives increasing
binary trees and their level parities, the Francon-Viennot path
encoding, block-repeated value patterns, and the polarized weights, and
each family is counted twice: by direct enumeration and by a closed
form (weighted Motzkin paths, a continued fraction, or a polynomial
recurrence).
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from dixonian.contfrac import jfraction_to_series
from dixonian.core import PowerSeries, series_mul
from dixonian.urn import brute_cap

__all__ = [
    "VALLEY",
    "PEAK",
    "DOUBLE_FALL",
    "DOUBLE_RISE",
    "classify",
    "code_by_value",
    "TreeNode",
    "increasing_tree",
    "tree_levels",
    "in_parity_classes",
    "parity_class_counts",
    "parity_class_counts_dp",
    "parity_class_members",
    "tree_shape",
    "y_shape_counts",
    "fv_encode",
    "fv_decode",
    "sweepline_altitudes",
    "motzkin_path_total",
    "permutation_path_total",
    "valley_peak_only",
    "is_r_repeated",
    "repeated_count_brute",
    "repeated_jfraction_tables",
    "repeated_series",
    "markable_windows",
    "polarized_total",
    "polarized_c",
    "andre_weights",
    "andre_polynomials",
]

VALLEY = "V"
PEAK = "P"
DOUBLE_FALL = "F"
DOUBLE_RISE = "R"


def _check_perm(perm: Sequence[int]) -> int:
    n = len(perm)
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError("expected a permutation of 1..n")
    return n


def classify(perm: Sequence[int], open_right: bool = False) -> tuple[str, ...]:
    """Local type of each position: valley, peak, double fall, or rise.

    The left border is always minus infinity (smaller than everything);
    ``open_right`` switches the right border from minus to plus infinity.
    """
    n = _check_perm(perm)
    out = []
    for i, v in enumerate(perm):
        left = perm[i - 1] if i else 0
        right = perm[i + 1] if i + 1 < n else (n + 1 if open_right else 0)
        if left > v and right > v:
            out.append(VALLEY)
        elif left < v and right < v:
            out.append(PEAK)
        elif left > v > right:
            out.append(DOUBLE_FALL)
        else:
            out.append(DOUBLE_RISE)
    return tuple(out)


def code_by_value(perm: Sequence[int], open_right: bool = False) -> tuple[str, ...]:
    """The same types as :func:`classify`, reindexed by value v = 1..n."""
    codes = classify(perm, open_right)
    out = [""] * len(perm)
    for i, v in enumerate(perm):
        out[v - 1] = codes[i]
    return tuple(out)


# -- increasing binary trees ---------------------------------------------


@dataclass(frozen=True)
class TreeNode:
    value: int
    left: "TreeNode | None"
    right: "TreeNode | None"


def increasing_tree(perm: Sequence[int]) -> TreeNode | None:
    """The increasing binary tree: the minimum is the root and the two
    sides of its position recurse.  Values grow along every branch."""
    _check_perm(perm)

    def build(lo: int, hi: int) -> TreeNode | None:
        if lo > hi:
            return None
        m = lo
        for i in range(lo + 1, hi + 1):
            if perm[i] < perm[m]:
                m = i
        return TreeNode(perm[m], build(lo, m - 1), build(m + 1, hi))

    return build(0, len(perm) - 1)


def _nearest_smaller(perm: Sequence[int]) -> tuple[list[int], list[int]]:
    """Nearest smaller value to the left / right of each position, 0 when
    there is none."""
    n = len(perm)
    lsv = [0] * n
    rsv = [0] * n
    stack: list[int] = []
    for i, v in enumerate(perm):
        while stack and stack[-1] > v:
            stack.pop()
        lsv[i] = stack[-1] if stack else 0
        stack.append(v)
    stack.clear()
    for i in range(n - 1, -1, -1):
        v = perm[i]
        while stack and stack[-1] > v:
            stack.pop()
        rsv[i] = stack[-1] if stack else 0
        stack.append(v)
    return lsv, rsv


def tree_levels(perm: Sequence[int]) -> list[int]:
    """Depth of each value in the increasing tree, indexed by v - 1.

    The parent of v is the larger of its two nearest smaller values, so
    levels fill in increasing-value order without building the tree.
    """
    n = _check_perm(perm)
    lsv, rsv = _nearest_smaller(perm)
    pos = [0] * (n + 1)
    for i, v in enumerate(perm):
        pos[v] = i
    level = [0] * (n + 1)
    for v in range(1, n + 1):
        i = pos[v]
        parent = lsv[i] if lsv[i] > rsv[i] else rsv[i]
        level[v] = level[parent] + 1 if parent else 0
    return level[1:]


# -- the two parity classes ----------------------------------------------


def in_parity_classes(perm: Sequence[int]) -> tuple[bool, bool]:
    """Whether every odd-level (X) or every even-level (Y) tree node is
    a doubled node, read through the valley dictionary."""
    codes = classify(perm)
    levels = tree_levels(perm)
    in_x = True
    in_y = True
    for i, v in enumerate(perm):
        if codes[i] == VALLEY:
            continue
        if levels[v - 1] % 2:
            in_x = False
        else:
            in_y = False
    return in_x, in_y


def parity_class_counts(n: int) -> tuple[int, int]:
    """(|X_n|, |Y_n|) by one exhaustive sweep of S_n.

    Both memberships fall out of a shared pass per permutation: nearest
    smaller values give each node its parent and hence its level, the
    interior-valley test marks the doubled nodes, and the first
    non-doubled node at an odd (even) level kills X (Y).  Reversal
    preserves both classes and pairs every permutation with a distinct
    partner once n >= 2, so only half of S_n is walked.
    """
    if n < 1:
        raise ValueError("the sweep needs at least one value")
    x_total = 0
    y_total = 0
    last = n - 1
    weight = 2 if n > 1 else 1
    level = [0] * (n + 1)
    lsv = [0] * n
    rsv = [0] * n
    pos = [0] * (n + 1)
    for perm in itertools.permutations(range(1, n + 1)):
        if perm[0] > perm[last]:
            continue
        stack: list[int] = []
        for i in range(n):
            v = perm[i]
            while stack and stack[-1] > v:
                stack.pop()
            lsv[i] = stack[-1] if stack else 0
            stack.append(v)
            pos[v] = i
        stack = []
        for i in range(last, -1, -1):
            v = perm[i]
            while stack and stack[-1] > v:
                stack.pop()
            rsv[i] = stack[-1] if stack else 0
            stack.append(v)
        in_x = True
        in_y = True
        for v in range(1, n + 1):
            i = pos[v]
            a = lsv[i]
            b = rsv[i]
            parent = a if a > b else b
            lv = level[parent] + 1 if parent else 0
            level[v] = lv
            if 0 < i < last and perm[i - 1] > v and perm[i + 1] > v:
                continue
            if lv & 1:
                in_x = False
                if not in_y:
                    break
            else:
                in_y = False
                if not in_x:
                    break
        if in_x:
            x_total += weight
        if in_y:
            y_total += weight
    return x_total, y_total


def parity_class_counts_dp(n: int) -> tuple[int, int]:
    """The same pair through the free-slot parity walk.

    Values 1..n drop into the free slots of a growing binary tree; a
    slot at even or odd depth spawns two slots of the other parity.
    X needs every leftover slot at odd depth, Y at even depth.  The walk
    is the sacrificial-urn walk again, so this route is independent of
    any permutation scan.
    """
    if n < 0:
        raise ValueError("negative sizes make no sense")
    state = {(1, 0): 1}
    for _ in range(n):
        nxt: dict[tuple[int, int], int] = {}
        for (e, o), c in state.items():
            if e:
                key = (e - 1, o + 2)
                nxt[key] = nxt.get(key, 0) + c * e
            if o:
                key = (e + 2, o - 1)
                nxt[key] = nxt.get(key, 0) + c * o
        state = nxt
    return state.get((0, n + 1), 0), state.get((n + 1, 0), 0)


def parity_class_members(
    which: str, n: int, cap: int | None = None
) -> list[tuple[int, ...]]:
    """All members of class X or Y in lexicographic order.  The brute
    enumeration cap applies unless an explicit ``cap`` is given."""
    slot = {"X": 0, "Y": 1}.get(which.upper())
    if slot is None:
        raise ValueError("the class is X or Y")
    limit = brute_cap() if cap is None else cap
    if n > limit:
        raise ValueError(
            f"listing a class at n = {n} exceeds the enumeration cap {limit}"
        )
    return [
        perm
        for perm in itertools.permutations(range(1, n + 1))
        if in_parity_classes(perm)[slot]
    ]


# -- unlabeled Y shapes ---------------------------------------------------


def tree_shape(perm: Sequence[int]) -> str:
    """Canonical string of the increasing-tree shape, labels dropped."""

    def walk(node: TreeNode | None) -> str:
        if node is None:
            return "."
        return "(" + walk(node.left) + walk(node.right) + ")"

    return walk(increasing_tree(perm))


def y_shape_counts(nu_max: int) -> list[int]:
    """Shapes available to Y-class trees on 3 nu nodes, nu = 0 .. nu_max.

    The shape grammar doubles every even-level node, which reads as
    Y = 1 + u Y^4 with u marking three nodes; the coefficients are the
    quartic analogues of the Catalan numbers, binom(4 nu, nu)/(3 nu + 1).
    """
    if nu_max < 0:
        raise ValueError("negative sizes make no sense")
    if nu_max == 0:
        return [1]
    one = PowerSeries.one(nu_max)
    u = PowerSeries.monomial(1, 1, nu_max)
    y = one
    for _ in range(nu_max + 1):
        y = one + series_mul(u, y**4)
    return [int(c) for c in y.coeffs]


# -- Francon-Viennot paths ------------------------------------------------


class _Hole:
    __slots__ = ()


def fv_encode(
    perm: Sequence[int], open_right: bool = False
) -> list[tuple[str, int]]:
    """History of a permutation as (letter, slot index) steps.

    Values are placed in increasing order; at each moment the unplaced
    positions form maximal runs, and the letter records what the new
    value does to its run: V splits it, P closes it, F chops its right
    end, R its left end.  With the closed right border the last value is
    forced and omitted (n - 1 steps); with the open border a virtual
    always-unplaced position n + 1 rides along and all n values step.
    """
    n = _check_perm(perm)
    pos = [0] * (n + 1)
    for i, v in enumerate(perm):
        pos[v] = i + 1
    intervals: list[list[int]] = [[1, n + 1 if open_right else n]]
    steps: list[tuple[str, int]] = []
    upto = n if open_right else n - 1
    for v in range(1, upto + 1):
        p = pos[v]
        idx = next(i for i, (lo, hi) in enumerate(intervals) if lo <= p <= hi)
        lo, hi = intervals[idx]
        left_open = p > lo
        right_open = p < hi
        if left_open and right_open:
            intervals[idx : idx + 1] = [[lo, p - 1], [p + 1, hi]]
            steps.append((VALLEY, idx))
        elif not left_open and not right_open:
            del intervals[idx]
            steps.append((PEAK, idx))
        elif left_open:
            intervals[idx] = [lo, p - 1]
            steps.append((DOUBLE_FALL, idx))
        else:
            intervals[idx] = [p + 1, hi]
            steps.append((DOUBLE_RISE, idx))
    if open_right:
        assert intervals == [[n + 1, n + 1]]
    else:
        assert intervals == [[pos[n], pos[n]]]
    return steps


def fv_decode(
    steps: Sequence[tuple[str, int]], n: int, open_right: bool = False
) -> tuple[int, ...]:
    """Inverse of :func:`fv_encode`: rebuild the permutation from its
    history.  Slots are symbolic holes whose extents emerge as later
    values land in them; an ill-formed history raises ValueError."""
    expected = n if open_right else n - 1
    if len(steps) != expected:
        raise ValueError(f"a history of {n} needs {expected} steps")
    first = _Hole()
    layout: list[object] = [first]
    holes: list[_Hole] = [first]
    for v, (letter, idx) in enumerate(steps, start=1):
        if not 0 <= idx < len(holes):
            raise ValueError(f"step {v} points at a missing slot")
        ghost = open_right and idx == len(holes) - 1
        hole = holes[idx]
        at = layout.index(hole)
        if letter == VALLEY:
            a, b = _Hole(), _Hole()
            layout[at : at + 1] = [a, v, b]
            holes[idx : idx + 1] = [a, b]
        elif letter == PEAK:
            if ghost:
                raise ValueError("the border slot cannot be closed")
            layout[at : at + 1] = [v]
            del holes[idx]
        elif letter == DOUBLE_FALL:
            if ghost:
                raise ValueError("the border slot has no placed right edge")
            layout[at : at + 1] = [hole, v]
        elif letter == DOUBLE_RISE:
            layout[at : at + 1] = [v, hole]
        else:
            raise ValueError(f"unknown step letter {letter!r}")
    if len(holes) != 1:
        raise ValueError("the history does not return to altitude zero")
    at = layout.index(holes[0])
    if open_right:
        del layout[at]
    else:
        layout[at] = n
    return tuple(layout)  # type: ignore[arg-type]


def sweepline_altitudes(perm: Sequence[int]) -> list[int]:
    """Altitude profile by a value sweep, closed borders: one less than
    the number of maximal runs of positions holding values above t, for
    t = 0 .. n - 1.  Matches the running altitude of :func:`fv_encode`.
    """
    n = _check_perm(perm)
    out = []
    for t in range(n):
        comps = 0
        prev = False
        for v in perm:
            cur = v > t
            if cur and not prev:
                comps += 1
            prev = cur
        out.append(comps - 1)
    return out


# -- weighted Motzkin paths ----------------------------------------------


def motzkin_path_total(
    length: int,
    alpha: Callable[[int], int],
    beta: Callable[[int], int],
    gamma: Callable[[int], int],
) -> int:
    """Total weight of nonnegative lattice paths of the given length
    from altitude 0 back to 0.  Each step is weighted by its starting
    altitude: alpha up, beta down, gamma level."""
    if length < 0:
        raise ValueError("paths have nonnegative length")
    state = {0: 1}
    for _ in range(length):
        nxt: dict[int, int] = {}
        for lvl, c in state.items():
            up = c * alpha(lvl)
            if up:
                nxt[lvl + 1] = nxt.get(lvl + 1, 0) + up
            if lvl:
                down = c * beta(lvl)
                if down:
                    nxt[lvl - 1] = nxt.get(lvl - 1, 0) + down
            flat = c * gamma(lvl)
            if flat:
                nxt[lvl] = nxt.get(lvl, 0) + flat
        state = nxt
    return state.get(0, 0)


def permutation_path_total(
    n: int, open_right: bool = False, alternating: bool = False
) -> int:
    """Path count matching the slot weights of :func:`fv_encode`.

    Closed border: length n - 1, alpha = beta = l + 1, gamma = 2l + 2.
    Open border: length n, alpha = l + 1, beta = l, gamma = 2l + 1.
    ``alternating`` bars the level steps, leaving the valley-peak-only
    permutations: tangent counts on the closed side, secant on the open.
    """
    if n < 0:
        raise ValueError("negative sizes make no sense")
    zero = lambda lvl: 0  # noqa: E731
    if open_right:
        gamma = zero if alternating else (lambda lvl: 2 * lvl + 1)
        return motzkin_path_total(n, lambda lvl: lvl + 1, lambda lvl: lvl, gamma)
    if n == 0:
        return 1
    gamma = zero if alternating else (lambda lvl: 2 * lvl + 2)
    return motzkin_path_total(
        n - 1, lambda lvl: lvl + 1, lambda lvl: lvl + 1, gamma
    )


def valley_peak_only(perm: Sequence[int], open_right: bool = False) -> bool:
    """True when no value is a double fall or double rise: the zig-zag
    permutations of the chosen border convention."""
    return all(c in (VALLEY, PEAK) for c in classify(perm, open_right))


# -- block-repeated values ------------------------------------------------


def is_r_repeated(perm: Sequence[int], r: int, open_right: bool = False) -> bool:
    """True when each value block {jr + 1, ..., (j+1)r} (the last one
    possibly partial) carries a single local type."""
    if r < 1:
        raise ValueError("the block width is at least one")
    codes = code_by_value(perm, open_right)
    for base in range(0, len(codes), r):
        block = codes[base : base + r]
        if any(c != block[0] for c in block):
            return False
    return True


def repeated_count_brute(n: int, r: int, open_right: bool = False) -> int:
    """Number of r-repeated permutations of n by direct scan."""
    return sum(
        1
        for perm in itertools.permutations(range(1, n + 1))
        if is_r_repeated(perm, r, open_right)
    )


def repeated_jfraction_tables(
    r: int, depth: int, open_right: bool = False
) -> tuple[list[int], list[int]]:
    """Closed-form partial quotients of the r-repeated counting series
    in w = z^r.

    Closed border (counts R at n = r nu + 1):
        c_j = 2 (jr + 1)^r,
        a_{j+1} = (jr+1) (jr+2)^2 ... (jr+r)^2 (jr+r+1).
    Open border (counts R* at n = r nu):
        c_j = (jr)^r + (jr+1)^r,
        a_{j+1} = ((jr+1) (jr+2) ... (jr+r))^2.
    """
    if r < 1 or depth < 1:
        raise ValueError("need a positive block width and depth")
    cs = []
    as_ = []
    for j in range(depth):
        base = j * r
        if open_right:
            cs.append(base**r + (base + 1) ** r)
        else:
            cs.append(2 * (base + 1) ** r)
    for j in range(depth - 1):
        base = j * r
        if open_right:
            prod = math.prod(base + i for i in range(1, r + 1))
            as_.append(prod * prod)
        else:
            inner = math.prod((base + i) ** 2 for i in range(2, r + 1))
            as_.append((base + 1) * inner * (base + r + 1))
    return cs, as_


def repeated_series(r: int, depth: int, open_right: bool = False) -> PowerSeries:
    """Expansion of the closed-form fraction, exact to order depth - 1
    in w."""
    cs, as_ = repeated_jfraction_tables(r, depth, open_right)
    order = depth - 1
    # the expander needs room for its w^2 blocks at shallow depths
    return jfraction_to_series(cs, as_, max(order, 2)).truncate(order)


# -- polarized three-blocks ----------------------------------------------


def markable_windows(perm: Sequence[int]) -> int:
    """Number of value windows {3j+1, 3j+2, 3j+3} sitting on consecutive
    positions in ascending or descending order."""
    n = _check_perm(perm)
    pos = [0] * (n + 1)
    for i, v in enumerate(perm):
        pos[v] = i
    count = 0
    for j in range(n // 3):
        p1, p2, p3 = pos[3 * j + 1], pos[3 * j + 2], pos[3 * j + 3]
        if (p2 == p1 + 1 and p3 == p2 + 1) or (p2 == p1 - 1 and p3 == p2 - 1):
            count += 1
    return count


def polarized_total(
    n: int, open_right: bool = False, experimental: bool = False
) -> int:
    """Sum of 2^(markable windows) over the 3-repeated permutations.

    With the closed border this reproduces the smh coefficients at
    n = 1, 4, 7, ...  The open-border variant is exploratory and must be
    requested with ``experimental=True``.
    """
    if open_right and not experimental:
        raise ValueError(
            "the open-border polarized model is exploratory; "
            "pass experimental=True to evaluate it anyway"
        )
    total = 0
    for perm in itertools.permutations(range(1, n + 1)):
        if is_r_repeated(perm, 3, open_right):
            total += 1 << markable_windows(perm)
    return total


def polarized_c(ell: int) -> int:
    """Level weight of the polarized fraction: 2(3l+1)^3 + 2(3l+1)."""
    m = 3 * ell + 1
    return 2 * m**3 + 2 * m


# -- the derivative polynomials -------------------------------------------


def andre_weights(ell: int) -> tuple[int, int, int]:
    """Path weights induced by the derivative recurrence at level l:
    alpha up, beta down, gamma level.  They refactor the polarized
    fraction as c_l = gamma_l and a_{l+1} = alpha_l beta_{l+1}."""
    m = 3 * ell + 1
    alpha = m * (m + 1) * (m + 2)
    beta = (m - 2) * (m - 1) * m
    gamma = 2 * m * (m * m + 1)
    return alpha, beta, gamma


def andre_polynomials(k_max: int) -> list[dict[int, int]]:
    """P_k with d^(3k)/dz^(3k) smh = P_k(smh), as sparse coefficient
    maps.  P_0 = w and

        p_{k+1, m} = (m+1)(m+2)(m+3) p_{k, m+3}
                   + 2m(m^2+1) p_{k, m}
                   + (m-1)(m-2)(m-3) p_{k, m-3}.

    The support stays on m = 1 mod 3 and the degree grows by three per
    step, so P_k ends at w^(3k+1).
    """
    if k_max < 0:
        raise ValueError("negative orders make no sense")
    polys = [{1: 1}]
    for _ in range(k_max):
        cur = polys[-1]
        nxt: dict[int, int] = {}
        for m, c in cur.items():
            down = m - 3
            if down >= 0:
                w = (down + 1) * (down + 2) * (down + 3) * c
                if w:
                    nxt[down] = nxt.get(down, 0) + w
            w = 2 * m * (m * m + 1) * c
            if w:
                nxt[m] = nxt.get(m, 0) + w
            up = m + 3
            w = (up - 1) * (up - 2) * (up - 3) * c
            if w:
                nxt[up] = nxt.get(up, 0) + w
        polys.append(nxt)
    return polys
