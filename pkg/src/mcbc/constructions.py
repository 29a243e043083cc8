"""Explicit layouts, each built through its item view (one block per item).

Every builder checks its preconditions and raises :class:`ParameterError`
naming the failing condition.  Subsets are always enumerated in
lexicographic order, so outputs are deterministic.
"""

from __future__ import annotations

from itertools import combinations
from math import comb, gcd

from .cwc import ConstantWeightCode, graham_sloane_cwc
from .designs import SteinerSystem
from .errors import ParameterError
from .hall import union_size_table  # noqa: F401  re-exported
from .setsystem import Block, McbcCode


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ParameterError(message)


def replication_threshold(k: int, m: int, r: int) -> int:
    """``floor((k-1)/r) * C(m, k-1)``: copies of every (k-1)-subset the layout tolerates."""
    return (k - 1) // r * comb(m, k - 1)


def _subsets(m: int, size: int) -> list[Block]:
    return list(combinations(range(1, m + 1), size))


def construct_trivial(n: int, k: int, m: int) -> McbcCode:
    """Every item on servers ``1..k``; serves anything with ``N = k n``."""
    _require(1 <= k <= m, f"need 1 <= k <= m, got k={k}, m={m}")
    return McbcCode.from_item_blocks(m, [range(1, k + 1)] * n)


def construct_private(n: int, m: int, r: int) -> McbcCode:
    """Each item on ``r`` servers of its own (needs ``m >= n r``); ``N = r n``."""
    _require(m >= n * r, f"need m >= n*r, got m={m}, n*r={n * r}")
    return McbcCode.from_item_blocks(m, [range(i * r + 1, i * r + r + 1) for i in range(n)])


def construct_replication(n: int, k: int, m: int, r: int) -> McbcCode:
    """Repeated (k-1)-subsets, then copies of ``{1..k}`` for the remaining items.

    Storage is ``k n - floor((k-1)/r) C(m, k-1)``.
    """
    _require(1 <= r < k <= m, f"need r < k <= m, got r={r}, k={k}, m={m}")
    copies = (k - 1) // r
    threshold = copies * comb(m, k - 1)
    _require(n >= threshold, f"need n >= floor((k-1)/r)*C(m,k-1) = {threshold}, got n={n}")
    blocks = [s for s in _subsets(m, k - 1) for _ in range(copies)]
    blocks += [tuple(range(1, k + 1))] * (n - threshold)
    return McbcCode.from_item_blocks(m, blocks)


def construct_small_n_distinct(n: int, k: int, m: int) -> McbcCode:
    """The first ``n`` distinct (k-1)-subsets; meant for ``r = k - 1``, ``N = (k-1) n``."""
    _require(2 <= k <= m + 1, f"need 2 <= k <= m+1, got k={k}, m={m}")
    available = comb(m, k - 1)
    _require(n < available, f"need n < C(m,k-1) = {available}, got n={n}")
    return McbcCode.from_item_blocks(m, _subsets(m, k - 1)[:n])


def construct_from_cwc(cwc: ConstantWeightCode, k: int, r: int) -> McbcCode:
    """Codeword supports as item blocks: any two of them cover ``k`` servers.

    Needs weight ``w`` in ``[r, k-1]`` and distance at least ``2 (k - w)``.
    """
    w = cwc.weight
    _require(r <= w <= k - 1, f"need r <= weight <= k-1, got r={r}, weight={w}, k={k}")
    _require(
        cwc.min_distance >= 2 * (k - w),
        f"need min_distance >= 2(k-w) = {2 * (k - w)}, got {cwc.min_distance}",
    )
    return McbcCode.from_item_blocks(cwc.length, cwc.supports)


def distance4_alpha(n: int, k: int, m: int, r: int) -> int:
    return (replication_threshold(k, m, r) - n) // (m - k + 1)


def construct_distance4(n: int, k: int, m: int, r: int) -> McbcCode:
    """Trade (k-1)-subsets for (k-2)-subsets from a distance-4 code.

    Each of the first ``alpha`` Graham-Sloane supports replaces one copy of
    each of its ``m - k + 2`` supersets of size ``k - 1``; surplus blocks
    are then dropped from the lexicographic end.  ``N = n (k-1) - alpha``.
    """
    _require(1 <= r <= k - 2 < m, f"need r <= k-2 < m, got r={r}, k={k}, m={m}")
    threshold = replication_threshold(k, m, r)
    _require(n <= threshold, f"need n <= floor((k-1)/r)*C(m,k-1) = {threshold}, got n={n}")
    alpha = distance4_alpha(n, k, m, r)
    code = graham_sloane_cwc(m, k - 2)
    _require(
        alpha <= len(code),
        f"alpha = {alpha} exceeds the {len(code)} available distance-4 codewords",
    )
    copies = (k - 1) // r
    count = {s: copies for s in _subsets(m, k - 1)}
    added = code.supports[:alpha]
    for support in added:
        for p in range(1, m + 1):
            if p not in support:
                superset = tuple(sorted(support + (p,)))
                assert count[superset] > 0
                count[superset] -= 1
    surplus = threshold - alpha * (m - k + 1) - n
    for s in reversed(list(count)):
        if surplus == 0:
            break
        drop = min(surplus, count[s])
        count[s] -= drop
        surplus -= drop
    blocks = [s for s, c in count.items() for _ in range(c)] + list(added)
    return McbcCode.from_item_blocks(m, blocks)


def diagonal_min_n(k: int, r: int) -> int:
    alpha, beta = divmod(k, r)
    return alpha if beta == 0 else alpha + r


def construct_diagonal(n: int, k: int, r: int) -> McbcCode:
    """Layout on ``m = k`` servers with ``N = k n - floor((k-1)/r) k``.

    Writing ``k = alpha r + beta``: ``alpha`` disjoint runs of ``r``
    servers, then (when ``beta > 0``) ``r`` blocks each missing one server
    from every run, then full blocks.
    """
    _require(1 <= r <= k, f"need 1 <= r <= k, got r={r}, k={k}")
    alpha, beta = divmod(k, r)
    need = diagonal_min_n(k, r)
    _require(n >= need, f"need n >= {need} for k={k}, r={r}, got n={n}")
    full = tuple(range(1, k + 1))
    blocks: list[Block] = [tuple(range(i * r + 1, i * r + r + 1)) for i in range(alpha)]
    if beta:
        for i in range(alpha + 1, alpha + r + 1):
            missing = {i - alpha + s * r for s in range(alpha)}
            blocks.append(tuple(p for p in full if p not in missing))
    blocks += [full] * (n - len(blocks))
    return McbcCode.from_item_blocks(k, blocks)


def steiner_window(ell: int, m: int, k: int, r: int) -> bool:
    """Whether (k, r) is covered for an S(2, ell, m) with m > ell."""
    if r > k:
        return False
    if ell // 2 + 1 <= r <= ell and k <= (ell - r + 1) * (2 * r - 1):
        return True
    # an S(2, q, q^2) is an affine plane, which serves any k <= q^2 sets
    return r == 1 and m == ell * ell and k <= m


def steiner_to_mcbc(s: SteinerSystem, k: int, r: int) -> McbcCode:
    """Steiner blocks as item blocks; ``N = l * |blocks|``."""
    ell, m = s.block_size, s.point_count
    _require(m > ell, f"need m > l, got m={m}, l={ell}")
    _require(
        steiner_window(ell, m, k, r),
        f"(k={k}, r={r}) outside floor(l/2)+1 <= r <= l, k <= (l-r+1)(2r-1) for l={ell}",
    )
    return McbcCode.from_item_blocks(m, s.blocks)


def regular_base_size(k: int, m: int) -> int:
    return m // gcd(m, k)


def construct_regular(n: int, k: int, m: int) -> McbcCode:
    """``c`` copies of ``m/gcd(m,k)`` cyclic windows of ``k`` consecutive servers.

    Every server stores exactly ``k n / m`` items and each item sits on
    ``k`` distinct servers, so all multiplicities up to ``k`` are served.
    """
    _require(1 <= k <= m, f"need 1 <= k <= m, got k={k}, m={m}")
    base = regular_base_size(k, m)
    _require(n >= 1 and n % base == 0, f"n={n} is not a positive multiple of m/gcd(m,k) = {base}")
    windows = [
        tuple(sorted(j % m + 1 for j in range(i * k, (i + 1) * k))) for i in range(base)
    ]
    return McbcCode.from_item_blocks(m, windows * (n // base))
