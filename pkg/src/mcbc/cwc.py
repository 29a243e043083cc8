"""Binary constant weight codes, stored as the supports of their codewords."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Mapping

from .errors import ParameterError
from .setsystem import Block, mask_of


@dataclass(frozen=True)
class ConstantWeightCode:
    length: int
    weight: int
    min_distance: int
    supports: tuple[Block, ...]

    def __post_init__(self) -> None:
        if self.min_distance % 2:
            raise ParameterError("constant weight codes have even distances")
        if len(set(self.supports)) != len(self.supports):
            raise ParameterError("supports must be distinct")
        for s in self.supports:
            if len(s) != self.weight or (s and (s[0] < 1 or s[-1] > self.length)):
                raise ParameterError(f"support {s} is not a {self.weight}-subset of [1..{self.length}]")
        if actual_min_distance(self.supports) < self.min_distance:
            raise ParameterError(f"supports do not reach distance {self.min_distance}")

    def __len__(self) -> int:
        return len(self.supports)

    def to_dict(self) -> dict:
        return {
            "length": self.length,
            "weight": self.weight,
            "min_distance": self.min_distance,
            "blocks": [list(s) for s in self.supports],
        }


def actual_min_distance(supports) -> int:
    """Smallest pairwise Hamming distance (a large sentinel for < 2 words)."""
    masks = [mask_of(s) for s in supports]
    best = 1 << 30
    for a, b in combinations(masks, 2):
        best = min(best, (a ^ b).bit_count())
    return best


@lru_cache(maxsize=None)
def graham_sloane_cwc(m: int, w: int) -> ConstantWeightCode:
    """The largest residue class of w-subsets of ``[1..m]`` by element sum mod m.

    Two w-subsets in one class cannot differ in a single element, so the
    class has distance at least 4; by pigeonhole it holds at least
    ``C(m, w) / m`` subsets.  Ties go to the smallest residue.
    """
    if not 1 <= w <= m:
        raise ParameterError(f"need 1 <= w <= m, got m={m}, w={w}")
    classes: list[list[Block]] = [[] for _ in range(m)]
    for s in combinations(range(1, m + 1), w):
        classes[sum(s) % m].append(s)
    best = max(range(m), key=lambda c: (len(classes[c]), -c))
    supports = tuple(classes[best])
    assert len(supports) * m >= comb(m, w)
    return ConstantWeightCode(m, w, 4, supports)


@lru_cache(maxsize=None)
def lexicode(m: int, d: int, w: int) -> ConstantWeightCode:
    """Greedy code: scan w-subsets in lex order, keep those far from all kept."""
    if not 0 <= w <= m:
        raise ParameterError(f"need 0 <= w <= m, got m={m}, w={w}")
    max_common = w - d // 2
    kept: list[Block] = []
    kept_masks: list[int] = []
    for s in combinations(range(1, m + 1), w):
        mask = mask_of(s)
        if all((mask & o).bit_count() <= max_common for o in kept_masks):
            kept.append(s)
            kept_masks.append(mask)
    return ConstantWeightCode(m, w, d, tuple(kept))


def best_known_cwc(m: int, d: int, w: int) -> ConstantWeightCode:
    """The larger of the codes we can build for length m, distance >= d, weight w."""
    if d <= 2:
        # distinct w-subsets are always at distance >= 2
        return ConstantWeightCode(m, w, d + d % 2, tuple(combinations(range(1, m + 1), w)))
    candidates = [lexicode(m, d, w)]
    if d <= 4 and w >= 1:
        candidates.append(graham_sloane_cwc(m, w))
    return max(candidates, key=len)


def a_lower(m: int, d: int, w: int, overrides: Mapping[tuple[int, int, int], int] | None = None) -> int:
    """A constructive lower bound on A(m, d, w), or a caller-supplied value."""
    if overrides and (m, d, w) in overrides:
        return overrides[(m, d, w)]
    if w < 0 or w > m:
        return 0
    if w == 0:
        return 1
    if d > 2 * w:
        return 1
    return len(best_known_cwc(m, max(d, 2), w))
