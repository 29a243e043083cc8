"""Addition and multiplication tables for small finite fields.

An element of GF(p^e) is labelled by the integer whose base-``p`` digits
are its polynomial coefficients (lowest degree first), so labels 0 and 1
are the additive and multiplicative identities.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import UnsupportedOrderError

# order -> (p, e, coefficients of the monic modulus, lowest degree first)
_MODULI: dict[int, tuple[int, int, tuple[int, ...]]] = {
    2: (2, 1, (0, 1)),
    3: (3, 1, (0, 1)),
    4: (2, 2, (1, 1, 1)),
    5: (5, 1, (0, 1)),
    7: (7, 1, (0, 1)),
    8: (2, 3, (1, 1, 0, 1)),
    9: (3, 2, (1, 0, 1)),
    11: (11, 1, (0, 1)),
    13: (13, 1, (0, 1)),
    16: (2, 4, (1, 1, 0, 0, 1)),
    25: (5, 2, (2, 1, 1)),
    27: (3, 3, (1, 2, 0, 1)),
    32: (2, 5, (1, 0, 1, 0, 0, 1)),
}

SUPPORTED_ORDERS = tuple(sorted(_MODULI))


@dataclass(frozen=True)
class FiniteFieldTable:
    order: int
    characteristic: int
    add: tuple[tuple[int, ...], ...]
    mul: tuple[tuple[int, ...], ...]

    def neg(self, a: int) -> int:
        return self.add[a].index(0)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.mul[a].index(1)


def _digits(x: int, p: int, e: int) -> list[int]:
    out = []
    for _ in range(e):
        out.append(x % p)
        x //= p
    return out


def _label(digits: list[int], p: int) -> int:
    x = 0
    for d in reversed(digits):
        x = x * p + d
    return x


def _poly_mul(a: list[int], b: list[int], p: int, modulus: tuple[int, ...]) -> list[int]:
    e = len(modulus) - 1
    prod = [0] * (2 * e - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for deg in range(len(prod) - 1, e - 1, -1):
        c = prod[deg]
        if c:
            for i, mi in enumerate(modulus):
                prod[deg - e + i] = (prod[deg - e + i] - c * mi) % p
    return prod[:e]


def check_field_axioms(f: FiniteFieldTable) -> None:
    q = f.order
    add, mul = f.add, f.mul
    elems = range(q)
    for a in elems:
        assert add[0][a] == a and mul[1][a] == a and mul[0][a] == 0
        assert 0 in add[a]
        if a:
            assert 1 in mul[a], f"{a} has no inverse in GF({q})"
        for b in elems:
            assert add[a][b] == add[b][a] and mul[a][b] == mul[b][a]
            for c in elems:
                assert add[add[a][b]][c] == add[a][add[b][c]]
                assert mul[mul[a][b]][c] == mul[a][mul[b][c]]
                assert mul[a][add[b][c]] == add[mul[a][b]][mul[a][c]]


@lru_cache(maxsize=None)
def finite_field(q: int) -> FiniteFieldTable:
    """Build and axiom-check the tables of GF(q) for a supported order."""
    if q not in _MODULI:
        raise UnsupportedOrderError(
            f"GF({q}) not available; supported orders: {list(SUPPORTED_ORDERS)}"
        )
    p, e, modulus = _MODULI[q]
    digits = [_digits(x, p, e) for x in range(q)]
    add = tuple(
        tuple(_label([(u + v) % p for u, v in zip(digits[a], digits[b])], p) for b in range(q))
        for a in range(q)
    )
    mul = tuple(
        tuple(_label(_poly_mul(digits[a], digits[b], p, modulus), p) for b in range(q))
        for a in range(q)
    )
    f = FiniteFieldTable(q, p, add, mul)
    check_field_axioms(f)
    return f
