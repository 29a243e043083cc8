"""Lower bounds, known exact values and construction upper bounds on storage.

``N(n, k, m; r)`` is the least total storage of a layout of ``n`` items on
``m`` servers serving every multiset request of size at most ``k`` with
multiplicities at most ``r``, reading one item per server.  ``r = 1`` is
the set-request case.

Rules are identified by short descriptive names; every rule that applies
is evaluated and overlapping rules must agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, comb, floor, gcd, isqrt
from typing import Callable, Mapping, NamedTuple

from . import constructions as cons
from .cwc import ConstantWeightCode, a_lower, best_known_cwc, graham_sloane_cwc
from .designs import affine_plane
from .errors import ParameterError
from .gf import SUPPORTED_ORDERS
from .setsystem import BlockProfile, McbcCode

AOverrides = Mapping[tuple[int, int, int], int]


def _check_params(n: int, k: int, m: int, r: int) -> None:
    for name, v in (("n", n), ("k", k), ("m", m), ("r", r)):
        if v < 1:
            raise ParameterError(f"{name} must be positive, got {v}")
    if not r <= k <= m:
        raise ParameterError(f"need r <= k <= m, got r={r}, k={k}, m={m}")


def profile_bound(n: int, k: int, m: int, r: int, c: int) -> int:
    """Counting bound from block sizes, for one choice of ``c`` in ``[r, k-1]``.

    The bracket is evaluated in exact rationals before the single floor.
    """
    t = cons.replication_threshold(k, m, r)
    inner = Fraction(k - c, m - k + 1) * (Fraction(t, comb(m - c, k - 1 - c)) - n)
    return n * c - floor(inner)


def lower_bounds(n: int, k: int, m: int, r: int) -> dict[str, int]:
    """Labelled lower bounds on ``N(n, k, m; r)``.

    Outside the regime ``m < n r`` only ``r n`` is reported; it is then
    exact (see :func:`known_exact_N`).
    """
    _check_params(n, k, m, r)
    out = {"storage-per-item": r * n}
    if m < n * r and r <= k - 1:
        out["block-profile"] = max(profile_bound(n, k, m, r, c) for c in range(r, k))
    return out


def profile_inequality_check(profile: BlockProfile, k: int, m: int, r: int) -> bool:
    """Necessary condition on the block sizes of a valid item view (needs r < k)."""
    if r >= k:
        raise ParameterError(f"need r <= k-1, got r={r}, k={k}")
    lhs = sum(comb(m - i, k - 1 - i) * profile[i] for i in range(r, k))
    return lhs <= cons.replication_threshold(k, m, r)


# ---------------------------------------------------------------- exact values


def _ceil_half_sqrt(a: int, b: int) -> int:
    """``ceil((a + sqrt(b)) / 2)`` in integers."""
    x = (a + isqrt(b)) // 2
    while 2 * x - a < 0 or (2 * x - a) ** 2 < b:
        x += 1
    return x


def _ceil_sqrt(b: int) -> int:
    s = isqrt(b)
    return s if s * s == b else s + 1


def _prime_power_base(q: int) -> bool:
    if q < 2:
        return False
    p = next(d for d in range(2, q + 1) if q % d == 0)
    while q % p == 0:
        q //= p
    return q == 1


def _cbc_m_plus_2(k: int, m: int) -> int:
    s = _ceil_sqrt(k + 1)
    if m + 1 - k >= s:
        return m + k - 2 + _ceil_sqrt(4 * (k + 1))
    return 2 * m - 2 + 1 + -(-(k + 1) // (m + 1 - k))


def _cbc_k3(n: int, m: int) -> int:
    if n <= m * m - m:
        return 2 * n - m + (n - 3) // (m - 2)
    return 3 * n - m * m + m


def _cbc_k4(n: int, m: int) -> int | None:
    c2, c3 = comb(m, 2), comb(m, 3)
    if n == m:
        return n
    if 3 * c3 <= n:
        return 4 * n - 3 * c3
    if c2 <= n:
        return 3 * n - floor(Fraction(m * m, 2) - Fraction(n - m, m - 3))
    if m % 2 == 0:
        if 8 * n <= m * m + 6 * m:
            return 2 * n - m + _ceil_half_sqrt(1, 8 * n - 8 * m + 1)
        if 8 * n >= m * m + 6 * m + 8:
            return 2 * n - m + _ceil_half_sqrt(5, 8 * n - 16 * m + 25)
        return None
    if 8 * n <= m * m + 4 * m + 3:
        return 2 * n - m + _ceil_half_sqrt(1, 8 * n - 8 * m + 1)
    if 8 * n == m * m + 4 * m + 11:
        return 2 * n - (m - 1) // 2
    if 8 * n > m * m + 4 * m + 11:
        return 2 * n - m + _ceil_half_sqrt(5, 8 * n - 16 * m + 25)
    return None


def exact_rules(
    n: int, k: int, m: int, r: int, a_overrides: AOverrides | None = None
) -> list[tuple[str, int]]:
    """Every rule that determines ``N(n, k, m; r)``, with its value."""
    if min(n, k, m, r) < 1 or not r <= k <= m:
        return []
    if m >= n * r:
        return [("private-servers", r * n)]
    out: list[tuple[str, int]] = []
    t = cons.replication_threshold(k, m, r)
    if r == k:
        out.append(("full-multiplicity", k * n))
    if r < k and n >= t:
        out.append(("replication-threshold", k * n - t))
    if r == k - 1:
        c = comb(m, k - 1)
        out.append(("one-below-full", k * n - c if n >= c else (k - 1) * n))
    if r <= k - 2:
        a = a_lower(m, 4, k - 2, a_overrides)
        if t - (m - k + 1) * a <= n <= t:
            out.append(("distance4-range", (k - 1) * n - (t - n) // (m - k + 1)))
    if m == k:
        alpha, beta = divmod(k, r)
        if (beta == 0 and n >= alpha) or (beta > 0 and n >= alpha + r):
            out.append(("square", k * n - (k - 1) // r * k))
    if r < k and n <= a_lower(m, 2 * (k - r), r, a_overrides):
        out.append(("cwc-weight-r", r * n))
    if r == 1:
        out.extend(_cbc_rules(n, k, m, a_overrides))
    return out


def _cbc_rules(n: int, k: int, m: int, a_overrides: AOverrides | None) -> list[tuple[str, int]]:
    out: list[tuple[str, int]] = []
    if m == k and n >= k:
        out.append(("cbc-square", k * n - k * (k - 1)))
    big = (k - 1) * comb(m, k - 1)
    if n >= big:
        out.append(("cbc-large", k * n - big))
    if k >= 2 and comb(m, k - 2) <= n <= big:
        out.append(("cbc-mid", (k - 1) * n - (big - n) // (m - k + 1)))
    # for k = 4 the formula undershoots at the low end of its range (e.g. it
    # gives 14 for N(8,4,5), search finds 15); the k = 4 rule covers that case.
    # For k = 3 the range only holds n <= m, already private.
    if k >= 5:
        c = comb(m, k - 2)
        span = m - k + 1
        a = a_lower(m, 4, k - 3, a_overrides)
        if c - span * a <= n <= c and 2 * ((c - n) % span) < span:
            out.append(("cbc-cwc-range", (k - 2) * n - 2 * (c - n) // span))
    if n == m + 1:
        out.append(("cbc-m-plus-1", m + k))
    if n == m + 2 and 2 <= k <= m:
        out.append(("cbc-m-plus-2", _cbc_m_plus_2(k, m)))
    if k == 3 and n >= m >= 3:
        out.append(("cbc-k3", _cbc_k3(n, m)))
    if k == 4 and n >= m >= 4:
        v = _cbc_k4(n, m)
        if v is not None:
            out.append(("cbc-k4", v))
    q = (1 + isqrt(1 + 4 * m)) // 2
    if q >= 3 and q * q - q == m and _prime_power_base(q):
        if n == q * q + q - 1 and k == q * q - q - 1:
            out.append(("cbc-affine-point", q**3 - q))
    return out


class ExactValue(NamedTuple):
    value: int
    rules: tuple[str, ...]


class RuleConflict(AssertionError):
    """Two applicable rules gave different values."""


def known_exact_N(
    n: int, k: int, m: int, r: int, a_overrides: AOverrides | None = None
) -> ExactValue | None:
    rules = exact_rules(n, k, m, r, a_overrides)
    if not rules:
        return None
    values = {v for _, v in rules}
    if len(values) != 1:
        raise RuleConflict(f"rules disagree for (n={n}, k={k}, m={m}, r={r}): {rules}")
    return ExactValue(rules[0][1], tuple(name for name, _ in rules))


# ------------------------------------------------------------ constructions


@dataclass(frozen=True)
class ConstructionRule:
    name: str
    applies: Callable[[int, int, int, int], bool]
    storage: Callable[[int, int, int, int], int]
    build: Callable[[int, int, int, int], McbcCode]


def _affine_q(m: int) -> int | None:
    q = isqrt(m)
    return q if q * q == m and q in SUPPORTED_ORDERS else None


def _cwc_r_code(n: int, k: int, m: int, r: int) -> ConstantWeightCode:
    code = best_known_cwc(m, 2 * (k - r), r)
    return ConstantWeightCode(m, r, code.min_distance, code.supports[:n])


def _distance4_ok(n: int, k: int, m: int, r: int) -> bool:
    if not 1 <= r <= k - 2 < m:
        return False
    t = cons.replication_threshold(k, m, r)
    return n <= t and cons.distance4_alpha(n, k, m, r) <= len(graham_sloane_cwc(m, k - 2))


def _steiner_ok(n: int, k: int, m: int, r: int) -> bool:
    q = _affine_q(m)
    return q is not None and n == q * q + q and cons.steiner_window(q, m, k, r)


CONSTRUCTIONS: tuple[ConstructionRule, ...] = (
    ConstructionRule(
        "private",
        lambda n, k, m, r: m >= n * r,
        lambda n, k, m, r: r * n,
        lambda n, k, m, r: cons.construct_private(n, m, r),
    ),
    ConstructionRule(
        "replication",
        lambda n, k, m, r: r < k and n >= cons.replication_threshold(k, m, r),
        lambda n, k, m, r: k * n - cons.replication_threshold(k, m, r),
        lambda n, k, m, r: cons.construct_replication(n, k, m, r),
    ),
    ConstructionRule(
        "small-n",
        lambda n, k, m, r: r == k - 1 and n < comb(m, k - 1),
        lambda n, k, m, r: (k - 1) * n,
        lambda n, k, m, r: cons.construct_small_n_distinct(n, k, m),
    ),
    ConstructionRule(
        "cwc-weight-r",
        lambda n, k, m, r: r < k and n <= len(best_known_cwc(m, 2 * (k - r), r)),
        lambda n, k, m, r: r * n,
        lambda n, k, m, r: cons.construct_from_cwc(_cwc_r_code(n, k, m, r), k, r),
    ),
    ConstructionRule(
        "distance4",
        _distance4_ok,
        lambda n, k, m, r: (k - 1) * n - cons.distance4_alpha(n, k, m, r),
        lambda n, k, m, r: cons.construct_distance4(n, k, m, r),
    ),
    ConstructionRule(
        "diagonal",
        lambda n, k, m, r: m == k and n >= cons.diagonal_min_n(k, r),
        lambda n, k, m, r: k * n - (k - 1) // r * k,
        lambda n, k, m, r: cons.construct_diagonal(n, k, r),
    ),
    ConstructionRule(
        "steiner-affine",
        _steiner_ok,
        lambda n, k, m, r: isqrt(m) * n,
        lambda n, k, m, r: cons.steiner_to_mcbc(affine_plane(isqrt(m)), k, r),
    ),
    ConstructionRule(
        "regular",
        lambda n, k, m, r: r == k and n % cons.regular_base_size(k, m) == 0,
        lambda n, k, m, r: k * n,
        lambda n, k, m, r: cons.construct_regular(n, k, m),
    ),
    ConstructionRule(
        "trivial",
        lambda n, k, m, r: True,
        lambda n, k, m, r: k * n,
        lambda n, k, m, r: cons.construct_trivial(n, k, m),
    ),
)


def construction_upper(n: int, k: int, m: int, r: int) -> tuple[int, str]:
    """Least storage among the applicable constructions (first listed wins ties)."""
    _check_params(n, k, m, r)
    best: tuple[int, str] | None = None
    for rule in CONSTRUCTIONS:
        if rule.applies(n, k, m, r):
            value = rule.storage(n, k, m, r)
            if best is None or value < best[0]:
                best = (value, rule.name)
    assert best is not None
    return best


def build_best_construction(n: int, k: int, m: int, r: int) -> tuple[McbcCode, str]:
    _, name = construction_upper(n, k, m, r)
    rule = next(c for c in CONSTRUCTIONS if c.name == name)
    return rule.build(n, k, m, r), name


# ------------------------------------------------------------------ reports


@dataclass
class BoundsReport:
    n: int
    k: int
    m: int
    r: int
    lower_bounds: dict[str, int]
    known_exact: int | None = None
    exact_rules: tuple[str, ...] = ()
    construction_upper: int | None = None
    construction: str | None = None
    search_exact: int | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def best_lower(self) -> int:
        return max(self.lower_bounds.values())

    def inconsistencies(self) -> list[str]:
        """Order violations among the reported values (expected empty)."""
        out = []
        lo = self.best_lower
        ups = [(name, v) for name, v in (
            ("construction_upper", self.construction_upper),
        ) if v is not None]
        exacts = [(name, v) for name, v in (
            ("known_exact", self.known_exact),
            ("search_exact", self.search_exact),
        ) if v is not None]
        for name, v in exacts + ups:
            if v < lo:
                out.append(f"{name}={v} below lower bound {lo}")
        for name, v in exacts:
            for uname, u in ups:
                if v > u:
                    out.append(f"{name}={v} above {uname}={u}")
        if len({v for _, v in exacts}) > 1:
            out.append(f"exact values disagree: {exacts}")
        return out

    def to_dict(self) -> dict:
        return {
            "params": {"n": self.n, "k": self.k, "m": self.m, "r": self.r},
            "lower_bounds": dict(self.lower_bounds),
            "known_exact": None if self.known_exact is None else {
                "value": self.known_exact, "rules": list(self.exact_rules)},
            "construction_upper": None if self.construction_upper is None else {
                "value": self.construction_upper, "construction": self.construction},
            "search_exact": self.search_exact,
        }


def bounds_report(
    n: int, k: int, m: int, r: int, a_overrides: AOverrides | None = None
) -> BoundsReport:
    lows = lower_bounds(n, k, m, r)
    exact = known_exact_N(n, k, m, r, a_overrides)
    upper, name = construction_upper(n, k, m, r)
    return BoundsReport(
        n, k, m, r, lows,
        known_exact=None if exact is None else exact.value,
        exact_rules=() if exact is None else exact.rules,
        construction_upper=upper,
        construction=name,
    )


# -------------------------------------------------------------- audits


@dataclass
class AuditResult:
    checked: list[str] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)
    violations: list[str] = field(default_factory=list)


def recursive_bound_audit(
    n: int, k: int, m: int, r: int, values: Mapping[tuple[int, int, int, int], int]
) -> AuditResult:
    """Check the expansion, folding and monotonicity inequalities on known values.

    ``values`` maps ``(n, k, m, r)`` to ``N(n, k, m; r)``; ``r = 1`` entries
    are the set-request values.  Inequalities needing an unknown value are
    reported as skipped.
    """
    res = AuditResult()
    here = values.get((n, k, m, r))

    def check(label: str, ok: bool | None) -> None:
        if ok is None:
            res.skipped.append(label)
        elif ok:
            res.checked.append(label)
        else:
            res.violations.append(label)

    expanded = values.get((r * n, k, m, 1))
    if here is None or expanded is None:
        check(f"N({r * n},{k},{m}) <= {r}*N({n},{k},{m};{r})", None)
        check(f"N({n},{k},{m};{r}) <= N({r * n},{k},{m})", None)
    else:
        check(f"N({r * n},{k},{m}) <= {r}*N({n},{k},{m};{r})", expanded <= r * here)
        check(f"N({n},{k},{m};{r}) <= N({r * n},{k},{m})", here <= expanded)

    kk, mm = -(-k // r), m // r
    if mm < kk:
        res.skipped.append(f"N({n},{kk},{mm}) undefined (k > m)")
    else:
        folded = values.get((n, kk, mm, 1))
        ok = None if here is None or folded is None else here <= r * folded
        check(f"N({n},{k},{m};{r}) <= {r}*N({n},{kk},{mm})", ok)

    for i in range(1, r):
        lower = values.get((n, k, m, i))
        ok = None if here is None or lower is None else here >= lower
        check(f"N({n},{k},{m};{r}) >= N({n},{k},{m};{i})", ok)
    return res


# ---------------------------------------------------------------- regular


class MuValue(NamedTuple):
    value: int
    exact: bool


def mu_regular(n: int, k: int, m: int) -> MuValue:
    """Least per-server load of a regular layout with ``r = k``.

    Exact ``k n / m`` when ``n`` is a multiple of ``m / gcd(m, k)``;
    otherwise only the bound ``ceil(k n / m)``.
    """
    if min(n, k, m) < 1 or k > m:
        raise ParameterError(f"need 1 <= k <= m and n >= 1, got n={n}, k={k}, m={m}")
    if n % (m // gcd(m, k)) == 0:
        return MuValue(k * n // m, True)
    return MuValue(ceil(Fraction(k * n, m)), False)
