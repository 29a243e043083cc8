"""Hall-type conditions on the item view (dual set system) of a code.

Both verifiers walk the subsets of blocks depth-first in lexicographic
order of their index tuples, carrying the union as a bitmask.  A subset
whose union already reaches the largest possible requirement is not
extended, since every superset then satisfies the condition too.
"""

from __future__ import annotations

from math import comb
from typing import Callable

from .errors import CapExceededError, ParameterError
from .setsystem import SetSystem, VerificationResult

DEFAULT_UNION_CAP = 10**7


def _least_violation(
    masks: tuple[int, ...],
    h_max: int,
    required: Callable[[int], int],
    saturation: int,
) -> tuple[int, ...] | None:
    """Return the lexicographically least violating index tuple of least size.

    ``required(h)`` is the union size demanded of ``h`` blocks; a union of
    size ``saturation`` or more meets every demand up to ``h_max``.
    """
    n = len(masks)
    h_max = min(h_max, n)
    best: list[int] | None = None
    chosen: list[int] = []

    def walk(start: int, union: int) -> None:
        nonlocal best
        depth = len(chosen) + 1
        if best is not None and depth >= len(best):
            return
        need = required(depth)
        for i in range(start, n):
            u = union | masks[i]
            size = u.bit_count()
            if size < need:
                best = chosen + [i]
                return
            if depth < h_max and size < saturation:
                chosen.append(i)
                walk(i + 1, u)
                chosen.pop()

    walk(0, 0)
    return None if best is None else tuple(i + 1 for i in best)


def verify_multiset_hall(item_view: SetSystem, k: int, r: int) -> VerificationResult:
    """Check that any ``h <= ceil(k/r)`` blocks cover at least ``min(h*r, k)`` points.

    Valid exactly when the code is servable for every multiset request of
    size ``k`` with multiplicities at most ``r`` reading one item per server.
    The witness is the least violating index set at the smallest failing
    ``h``.
    """
    if k < 1 or r < 1:
        raise ParameterError(f"k and r must be positive, got k={k}, r={r}")
    if r > k:
        raise ParameterError(f"r={r} exceeds k={k}")
    h_max = -(-k // r)
    witness = _least_violation(item_view.masks, h_max, lambda h: min(h * r, k), k)
    return VerificationResult(witness is None, witness)


def verify_kt_hall_cbc(item_view: SetSystem, k: int, t: int) -> VerificationResult:
    """Check that any ``h <= k`` blocks cover at least ``h / t`` points.

    With ``t == 1`` this is the plain Hall condition for set requests.
    """
    if k < 1 or t < 1:
        raise ParameterError(f"k and t must be positive, got k={k}, t={t}")
    witness = _least_violation(item_view.masks, k, lambda h: -(-h // t), -(-k // t))
    return VerificationResult(witness is None, witness)


def union_size_table(
    item_view: SetSystem, h_max: int, cap: int = DEFAULT_UNION_CAP
) -> list[int]:
    """Minimum union size over all ``h``-subsets of blocks, for ``h = 1..h_max``."""
    n = len(item_view)
    if h_max < 1 or h_max > n:
        raise ParameterError(f"h_max must lie in [1..{n}], got {h_max}")
    total = sum(comb(n, h) for h in range(1, h_max + 1))
    if total > cap:
        raise CapExceededError("block subsets", total, cap)
    masks = item_view.masks
    best = [item_view.ground_size + 1] * (h_max + 1)

    def walk(start: int, depth: int, union: int) -> None:
        for i in range(start, n):
            u = union | masks[i]
            size = u.bit_count()
            if size < best[depth]:
                best[depth] = size
            if depth < h_max:
                walk(i + 1, depth + 1, u)

    walk(0, 1, 0)
    return best[1:]
