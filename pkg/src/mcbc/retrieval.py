"""Serving multiset requests and the exhaustive request oracle.

A request is served by an integral flow: each requested copy of item ``i``
must be read from a distinct server storing ``i``, and server ``j`` hands
out at most ``t`` items.  :class:`Retriever` grows such a flow one copy at
a time with augmenting paths, and can roll back to an earlier state, which
lets the exhaustive verifier share work between requests with a common
prefix.
"""

from __future__ import annotations

from typing import Iterator

from .errors import CapExceededError, ParameterError
from .setsystem import (
    Assignment,
    CodeParams,
    McbcCode,
    MultisetRequest,
    VerificationResult,
)

DEFAULT_REQUEST_CAP = 10**7


class Retriever:
    """Incremental retrieval state for one code and read limit ``t``.

    Items are 0-based internally.  Servers are probed in ascending index
    order, so results are deterministic.
    """

    def __init__(self, code: McbcCode, t: int = 1):
        if t < 1:
            raise ParameterError(f"t must be positive, got {t}")
        self.t = t
        self.m = code.m
        self.item_masks = list(code.item_view.masks)
        self.holders: list[list[int]] = [[] for _ in range(code.m)]
        self.used_by = [0] * code.n
        self.full = 0
        self._log: list[tuple[bool, int, int]] = []

    def _place(self, i: int, j: int) -> None:
        h = self.holders[j]
        h.append(i)
        self.used_by[i] |= 1 << j
        if len(h) == self.t:
            self.full |= 1 << j
        self._log.append((True, i, j))

    def _unplace(self, i: int, j: int) -> None:
        self.holders[j].remove(i)
        self.used_by[i] &= ~(1 << j)
        self.full &= ~(1 << j)
        self._log.append((False, i, j))

    def checkpoint(self) -> int:
        return len(self._log)

    def rollback(self, mark: int) -> None:
        log = self._log
        while len(log) > mark:
            placed, i, j = log.pop()
            bit = 1 << j
            if placed:
                self.holders[j].remove(i)
                self.used_by[i] &= ~bit
                self.full &= ~bit
            else:
                h = self.holders[j]
                h.append(i)
                self.used_by[i] |= bit
                if len(h) == self.t:
                    self.full |= bit

    def add(self, i: int) -> bool:
        """Read one more copy of item ``i``; False (state unchanged) if impossible."""
        free = self.item_masks[i] & ~self.used_by[i] & ~self.full
        if free:
            self._place(i, (free & -free).bit_length() - 1)
            return True
        return self._augment(i, [0])

    def _augment(self, i: int, visited: list[int]) -> bool:
        cand = self.item_masks[i] & ~self.used_by[i] & ~visited[0]
        while cand:
            bit = cand & -cand
            cand ^= bit
            if visited[0] & bit:
                continue
            visited[0] |= bit
            j = bit.bit_length() - 1
            if not self.full & bit:
                self._place(i, j)
                return True
            for other in sorted(self.holders[j]):
                if self._augment(other, visited):
                    self._unplace(other, j)
                    self._place(i, j)
                    return True
        return False

    def reaching_spare(self) -> int:
        """Mask of servers with a residual path to a server below capacity.

        Item ``i`` can take one more copy iff some server storing ``i``
        that ``i`` does not already use lies in this mask.
        """
        reach = ((1 << self.m) - 1) & ~self.full
        pending = self.full
        changed = True
        while changed and pending:
            changed = False
            rest = pending
            while rest:
                bit = rest & -rest
                rest ^= bit
                j = bit.bit_length() - 1
                for h in self.holders[j]:
                    if self.item_masks[h] & ~self.used_by[h] & reach:
                        reach |= bit
                        pending ^= bit
                        changed = True
                        break
        return reach

    def assignment(self) -> Assignment:
        return Assignment(tuple(tuple(sorted(i + 1 for i in h)) for h in self.holders))


def serve_request(
    code: McbcCode, req: MultisetRequest, t: int = 1
) -> Assignment | None:
    """Return read sets serving ``req`` with at most ``t`` reads per server, or None.

    Copies are placed in nondecreasing item order; each placement searches
    an augmenting path probing servers in ascending order.
    """
    req.validate(code.n)
    retriever = Retriever(code, t)
    for item in req.items():
        if not retriever.add(item - 1):
            return None
    return retriever.assignment()


def count_requests(n: int, k: int, r: int) -> int:
    """Number of multisets of size ``k`` over ``n`` items, multiplicities <= r."""
    ways = [1] + [0] * k
    for _ in range(n):
        nxt = [0] * (k + 1)
        for s, w in enumerate(ways):
            if w:
                for c in range(min(r, k - s) + 1):
                    nxt[s + c] += w
        ways = nxt
    return ways[k]


def iter_requests(n: int, k: int, r: int) -> Iterator[tuple[int, ...]]:
    """Yield size-``k`` requests as nondecreasing 1-based tuples, in lex order."""
    seq: list[int] = []

    def walk(start: int, mult: int) -> Iterator[tuple[int, ...]]:
        if len(seq) == k:
            yield tuple(seq)
            return
        left = k - len(seq)
        for i in range(start, n + 1):
            c = mult + 1 if seq and seq[-1] == i else 1
            if c > r:
                continue
            if (r - c) + r * (n - i) < left - 1:
                break
            seq.append(i)
            yield from walk(i, c)
            seq.pop()

    yield from walk(1, 0)


def _completion(prefix: list[int], mult: int, n: int, k: int, r: int) -> tuple[int, ...]:
    out = list(prefix)
    item = out[-1]
    while len(out) < k:
        if mult < r:
            mult += 1
        else:
            item += 1
            mult = 1
        out.append(item)
    assert item <= n
    return tuple(out)


def verify_exhaustive(
    code: McbcCode, params: CodeParams, cap: int = DEFAULT_REQUEST_CAP
) -> VerificationResult:
    """Try every maximal request against ``code`` (reading ``params.t`` per server).

    Maximal means size ``k``, or every item ``r`` times when ``n*r < k``;
    every smaller request is a sub-multiset of a maximal one.  Requests are
    visited as nondecreasing item sequences in lexicographic order, and the
    witness is the first one that cannot be served.
    """
    n, r = code.n, params.r
    if params.n != n or params.m != code.m:
        raise ParameterError(
            f"params (n={params.n}, m={params.m}) do not match code (n={n}, m={code.m})"
        )
    size = min(params.k, n * r)
    total = count_requests(n, size, r)
    if total > cap:
        raise CapExceededError("multiset requests", total, cap)

    retriever = Retriever(code, params.t)
    masks, used_by, holders, t = (
        retriever.item_masks, retriever.used_by, retriever.holders, params.t
    )
    seq: list[int] = []
    failure: list[tuple[int, ...]] = []

    def last_slot(start: int, mult: int) -> bool:
        # the final copy only needs a yes/no answer, so nothing is placed
        reach = None
        for i in range(start, n + 1):
            if seq and seq[-1] == i and mult >= r:
                continue
            avail = masks[i - 1] & ~used_by[i - 1]
            if avail & ~retriever.full:
                continue
            if reach is None:
                reach = retriever.reaching_spare()
            if not avail & reach:
                failure.append(tuple(seq) + (i,))
                return False
        return True

    def walk(start: int, mult: int) -> bool:
        left = size - len(seq)
        if left == 0:
            return True
        if left == 1:
            return last_slot(start, mult)
        for i in range(start, n + 1):
            c = mult + 1 if seq and seq[-1] == i else 1
            if c > r:
                continue
            if (r - c) + r * (n - i) < left - 1:
                break
            free = masks[i - 1] & ~used_by[i - 1] & ~retriever.full
            if free:
                # direct placement, undone by hand without touching the log
                bit = free & -free
                held = holders[bit.bit_length() - 1]
                held.append(i - 1)
                used_by[i - 1] |= bit
                full_before = retriever.full
                if len(held) == t:
                    retriever.full |= bit
                seq.append(i)
                ok = walk(i, c)
                seq.pop()
                held.remove(i - 1)
                used_by[i - 1] ^= bit
                retriever.full = full_before
                if not ok:
                    return False
                continue
            mark = retriever.checkpoint()
            if not retriever.add(i - 1):
                seq.append(i)
                failure.append(_completion(seq, c, n, size, r))
                return False
            seq.append(i)
            ok = walk(i, c)
            seq.pop()
            retriever.rollback(mark)
            if not ok:
                return False
        return True

    if walk(1, 0):
        return VerificationResult(True)
    return VerificationResult(False, MultisetRequest.from_items(failure[0]))
