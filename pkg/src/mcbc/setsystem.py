"""Set systems, codes and the small value types passed between modules.

All public indices are 1-based: items are ``1..n``, servers are ``1..m``
and block indices of a set system are ``1..len(blocks)``.  Internally the
verifiers work on bitmasks where point ``p`` is bit ``p - 1``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .errors import ParameterError

Block = tuple[int, ...]


def _canonical_block(block: Iterable[int]) -> Block:
    return tuple(sorted(set(int(p) for p in block)))


def mask_of(block: Iterable[int]) -> int:
    mask = 0
    for p in block:
        mask |= 1 << (p - 1)
    return mask


def points_of(mask: int) -> Block:
    out = []
    p = 1
    while mask:
        if mask & 1:
            out.append(p)
        mask >>= 1
        p += 1
    return tuple(out)


@dataclass(frozen=True)
class SetSystem:
    """A ground set ``[1..ground_size]`` with an ordered multiset of blocks.

    Blocks are stored sorted and deduplicated internally; their order is
    significant because the block index is the identity of an item or
    server.  Empty blocks are allowed.
    """

    ground_size: int
    blocks: tuple[Block, ...]

    def __init__(self, ground_size: int, blocks: Iterable[Iterable[int]]):
        if ground_size < 0:
            raise ParameterError(f"ground_size must be nonnegative, got {ground_size}")
        canon = tuple(_canonical_block(b) for b in blocks)
        for idx, b in enumerate(canon, start=1):
            if b and (b[0] < 1 or b[-1] > ground_size):
                raise ParameterError(
                    f"block {idx} = {list(b)} leaves ground set [1..{ground_size}]"
                )
        object.__setattr__(self, "ground_size", ground_size)
        object.__setattr__(self, "blocks", canon)

    def __len__(self) -> int:
        return len(self.blocks)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(mask_of(b) for b in self.blocks)

    @property
    def total_size(self) -> int:
        return sum(len(b) for b in self.blocks)

    def incidence_matrix(self) -> list[list[int]]:
        """Rows are blocks, columns are points."""
        return [
            [1 if (mask >> p) & 1 else 0 for p in range(self.ground_size)]
            for mask in self.masks
        ]


def dual(s: SetSystem, point_count: int | None = None) -> SetSystem:
    """Transpose the incidence matrix of ``s``.

    Block ``i`` of the result lists the indices of the blocks of ``s`` that
    contain point ``i``.  ``point_count``, when given, must equal
    ``s.ground_size``; it exists so callers can assert the dimension they
    expect.
    """
    if point_count is not None and point_count != s.ground_size:
        raise ParameterError(
            f"point_count {point_count} does not match ground_size {s.ground_size}"
        )
    columns: list[list[int]] = [[] for _ in range(s.ground_size)]
    for j, block in enumerate(s.blocks, start=1):
        for p in block:
            columns[p - 1].append(j)
    return SetSystem(len(s.blocks), columns)


@dataclass(frozen=True)
class McbcCode:
    """A replication layout viewed both ways.

    ``server_view`` has ground ``[n]`` and one block ``C_j`` per server;
    ``item_view`` has ground ``[m]`` and one block ``B_i`` per item listing
    the servers that store it.
    """

    server_view: SetSystem
    item_view: SetSystem

    def __post_init__(self) -> None:
        if dual(self.server_view) != self.item_view:
            raise ParameterError("item_view is not the dual of server_view")

    @classmethod
    def from_servers(cls, n: int, servers: Iterable[Iterable[int]]) -> "McbcCode":
        sv = SetSystem(n, servers)
        return cls(sv, dual(sv))

    @classmethod
    def from_item_blocks(cls, m: int, blocks: Iterable[Iterable[int]]) -> "McbcCode":
        iv = SetSystem(m, blocks)
        return cls(dual(iv), iv)

    @property
    def n(self) -> int:
        return self.server_view.ground_size

    @property
    def m(self) -> int:
        return len(self.server_view.blocks)

    @property
    def N(self) -> int:
        return self.server_view.total_size

    @property
    def servers(self) -> tuple[Block, ...]:
        return self.server_view.blocks


@dataclass(frozen=True)
class CodeParams:
    n: int
    k: int
    m: int
    t: int = 1
    r: int = 1

    def __post_init__(self) -> None:
        for name in ("n", "k", "m", "t", "r"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ParameterError(f"{name} must be a positive integer, got {value!r}")
        if not self.r <= self.k <= self.t * self.m:
            raise ParameterError(
                f"need r <= k <= t*m, got r={self.r}, k={self.k}, t*m={self.t * self.m}"
            )


@dataclass(frozen=True)
class MultisetRequest:
    """A request as a map item -> positive multiplicity (keys kept sorted)."""

    multiplicities: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {}
        for item, count in sorted(self.multiplicities.items()):
            if count < 0:
                raise ParameterError(f"negative multiplicity for item {item}")
            if count:
                clean[int(item)] = int(count)
        object.__setattr__(self, "multiplicities", clean)

    @classmethod
    def from_items(cls, items: Iterable[int]) -> "MultisetRequest":
        return cls(dict(Counter(items)))

    def items(self) -> tuple[int, ...]:
        """The request as a nondecreasing item sequence."""
        return tuple(i for i, c in self.multiplicities.items() for _ in range(c))

    @property
    def size(self) -> int:
        return sum(self.multiplicities.values())

    def validate(self, n: int, params: CodeParams | None = None) -> None:
        for item in self.multiplicities:
            if not 1 <= item <= n:
                raise ParameterError(f"item {item} outside [1..{n}]")
        if params is not None:
            for item, count in self.multiplicities.items():
                if count > params.r:
                    raise ParameterError(
                        f"item {item} requested {count} times, more than r={params.r}"
                    )
            if self.size > params.k:
                raise ParameterError(f"request size {self.size} exceeds k={params.k}")

    def __str__(self) -> str:
        return ",".join(str(i) for i in self.items())


@dataclass(frozen=True)
class Assignment:
    """Per-server read sets ``D_1..D_m`` (``reads[j - 1]`` is ``D_j``)."""

    reads: tuple[Block, ...]

    def coverage(self) -> Counter:
        return Counter(i for d in self.reads for i in d)

    def check(self, code: McbcCode, request: MultisetRequest, t: int) -> None:
        """Raise ``AssertionError`` unless this assignment serves ``request``."""
        assert len(self.reads) == code.m
        for j, (d, c) in enumerate(zip(self.reads, code.servers), start=1):
            assert len(d) <= t, f"server {j} reads {len(d)} > t={t}"
            assert set(d) <= set(c), f"server {j} reads items it does not store"
        cov = self.coverage()
        for item, count in request.multiplicities.items():
            assert cov[item] >= count, f"item {item} covered {cov[item]} < {count}"


@dataclass(frozen=True)
class VerificationResult:
    """Outcome of a verifier.

    ``witness`` is a tuple of 1-based block indices for the Hall-type
    verifiers and a :class:`MultisetRequest` for the exhaustive one.
    """

    valid: bool
    witness: tuple[int, ...] | MultisetRequest | None = None

    def __post_init__(self) -> None:
        if self.valid != (self.witness is None):
            raise ValueError("valid results carry no witness; invalid ones must")

    def __bool__(self) -> bool:
        return self.valid


@dataclass(frozen=True)
class BlockProfile:
    """``counts[i]`` is the number of blocks of size exactly ``i`` (i <= k)."""

    counts: tuple[int, ...]
    overflow: int = 0

    @property
    def k(self) -> int:
        return len(self.counts) - 1

    @property
    def n(self) -> int:
        return sum(self.counts) + self.overflow

    def __getitem__(self, i: int) -> int:
        return self.counts[i] if 0 <= i < len(self.counts) else 0


def block_profile(item_view: SetSystem, k: int) -> BlockProfile:
    """Count blocks by size; blocks larger than ``k`` land in ``overflow``."""
    counts = [0] * (k + 1)
    overflow = 0
    for b in item_view.blocks:
        if len(b) > k:
            overflow += 1
        else:
            counts[len(b)] += 1
    return BlockProfile(tuple(counts), overflow)


def truncate_blocks(item_view: SetSystem, k: int) -> SetSystem:
    """Keep only the ``k`` smallest points of every block larger than ``k``."""
    return SetSystem(item_view.ground_size, (b[:k] for b in item_view.blocks))


def expand_to_cbc(code: McbcCode, r: int) -> McbcCode:
    """Replace every item by ``r`` distinct copies.

    Item ``c`` on a server becomes items ``c, c + n, ..., c + (r-1) n``.
    The result serves every size-k set request iff ``code`` serves every
    size-k multiset request with multiplicities at most ``r``.
    """
    if r < 1:
        raise ParameterError(f"r must be positive, got {r}")
    n = code.n
    servers = [[c + j * n for j in range(r) for c in server] for server in code.servers]
    return McbcCode.from_servers(r * n, servers)
