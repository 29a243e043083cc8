"""Steiner systems S(2, l, m), with affine planes as the built-in source."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations

from .errors import ParameterError
from .gf import finite_field
from .setsystem import Block, SetSystem


@dataclass(frozen=True)
class SteinerSystem:
    """Blocks of size ``block_size`` on ``[1..point_count]`` covering each pair once."""

    block_size: int
    point_count: int
    blocks: tuple[Block, ...]

    def __post_init__(self) -> None:
        ell, m = self.block_size, self.point_count
        for b in self.blocks:
            if len(b) != ell or len(set(b)) != ell or b[0] < 1 or b[-1] > m:
                raise ParameterError(f"block {b} is not a {ell}-subset of [1..{m}]")
        cover = Counter(pair for b in self.blocks for pair in combinations(b, 2))
        if len(cover) != m * (m - 1) // 2 or any(c != 1 for c in cover.values()):
            raise ParameterError("some pair of points is not covered exactly once")

    def as_set_system(self) -> SetSystem:
        return SetSystem(self.point_count, self.blocks)

    def replication(self) -> int:
        """Blocks through each point, (m - 1) / (l - 1)."""
        return (self.point_count - 1) // (self.block_size - 1)

    def to_dict(self) -> dict:
        return {
            "block_size": self.block_size,
            "points": self.point_count,
            "blocks": [list(b) for b in self.blocks],
        }


def affine_plane(q: int) -> SteinerSystem:
    """Lines of AG(2, q): ``y = a x + b`` for all a, b, then ``x = c``.

    Point ``(x, y)`` gets index ``q * x + y + 1`` using field labels.
    """
    f = finite_field(q)
    add, mul = f.add, f.mul
    blocks: list[Block] = []
    for a in range(q):
        for b in range(q):
            blocks.append(tuple(sorted(q * x + add[mul[a][x]][b] + 1 for x in range(q))))
    for c in range(q):
        blocks.append(tuple(q * c + y + 1 for y in range(q)))
    return SteinerSystem(q, q * q, tuple(blocks))
