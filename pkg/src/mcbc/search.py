"""Branch and bound for the exact minimum storage at desk scale (t = 1).

The search builds item views directly.  Candidate blocks are all server
subsets of size ``r..k`` sorted by (size, lexicographic), and an item view
is explored only as a nondecreasing sequence in that order, since item
order does not matter.  The first block is also fixed to ``{1..s}``
because servers can be relabelled.  Partial views are kept valid with
the multiset Hall condition applied incrementally to each new block.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import CapExceededError, ParameterError
from .retrieval import verify_exhaustive
from .setsystem import CodeParams, McbcCode, mask_of


@dataclass(frozen=True)
class SearchCaps:
    max_n: int = 5
    max_m: int = 5
    max_k: int = 5


@dataclass(frozen=True)
class SearchResult:
    value: int
    code: McbcCode


def exhaustive_optimal_N(
    n: int, k: int, m: int, r: int, caps: SearchCaps = SearchCaps()
) -> SearchResult:
    if min(n, k, m, r) < 1 or not r <= k <= m:
        raise ParameterError(f"need r <= k <= m, all positive; got n={n} k={k} m={m} r={r}")
    for what, value, cap in (("n", n, caps.max_n), ("m", m, caps.max_m), ("k", k, caps.max_k)):
        if value > cap:
            raise CapExceededError(f"search parameter {what}", value, cap)

    cands: list[tuple[int, int]] = []  # (size, mask)
    firsts: list[int] = []
    for size in range(r, k + 1):
        firsts.append(len(cands))
        cands.extend((size, mask_of(s)) for s in combinations(range(1, m + 1), size))
    h_max = min(-(-k // r), n)

    best = k * n + 1
    best_seq: list[int] = []
    seq: list[int] = []

    def extend(open_sets: list[tuple[int, int]], mask: int) -> list[tuple[int, int]] | None:
        grown = []
        for union, h in open_sets:
            u = union | mask
            size = u.bit_count()
            if size < min((h + 1) * r, k):
                return None
            if h + 1 < h_max and size < k:
                grown.append((u, h + 1))
        return open_sets + grown

    def walk(start: int, total: int, open_sets: list[tuple[int, int]]) -> None:
        nonlocal best, best_seq
        left = n - len(seq)
        if left == 0:
            best = total
            best_seq = list(seq)
            return
        indices = firsts if not seq else range(start, len(cands))
        for idx in indices:
            size, mask = cands[idx]
            if total + size * left >= best:
                break
            nxt = extend(open_sets, mask)
            if nxt is None:
                continue
            seq.append(idx)
            walk(idx, total + size, nxt)
            seq.pop()

    walk(0, 0, [(0, 0)])
    assert best_seq, "storing every item on k servers is always feasible"
    blocks = [[p + 1 for p in range(m) if cands[i][1] >> p & 1] for i in best_seq]
    code = McbcCode.from_item_blocks(m, blocks)
    assert code.N == best
    check = verify_exhaustive(code, CodeParams(n, k, m, 1, r))
    assert check.valid, f"search produced an invalid layout: {check.witness}"
    return SearchResult(best, code)
