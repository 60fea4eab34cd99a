"""The integer sequences p, q, d driving the construction of ``B_f``.

Every value is an exact Python integer.  Growth functions are always read
through the monotone wrapper ``F(n) = max(n, f(1), ..., f(n))``.
"""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass, field
from functools import reduce
from pathlib import Path

import gmpy2

# integers wider than this are refused instead of exhausting memory
MAX_VALUE_BITS = 1 << 27

BASE_ARGUMENT = 16
CANDIDATE_COUNT = 5


class GrowthOverflow(OverflowError):
    """A growth-function value would not fit in memory."""


def to_decimal(n: int) -> str:
    return gmpy2.mpz(n).digits(10)


def from_decimal(s: str) -> int:
    return int(gmpy2.mpz(s.strip()))


def short(n: int) -> str:
    """Decimal text for moderate integers, a bit count for huge ones."""
    if n.bit_length() > 256:
        return f"<{n.bit_length()}-bit integer>"
    return str(n)


class GrowthFunction:
    """A growth function ``f`` and its monotone normalization ``F``.

    ``spec`` is one of ``identity``, ``poly:c``, ``exp2``, ``exp:b`` or
    ``table:path``.  Calling the object evaluates ``F``; ``raw`` evaluates
    ``f`` itself.
    """

    def __init__(self, spec: str):
        self.spec = spec
        kind, _, arg = spec.partition(":")
        self._table_keys: list[int] = []
        self._table_prefix_max: list[int] = []
        if kind == "identity" and not arg:
            self.kind, self.param = "identity", None
        elif kind == "poly":
            self.kind, self.param = "poly", _positive_int(arg, spec)
        elif kind == "exp2" and not arg:
            self.kind, self.param = "exp", 2
        elif kind == "exp":
            base = _positive_int(arg, spec)
            if base < 2:
                raise ValueError(f"exponential base must be >= 2: {spec!r}")
            self.kind, self.param = "exp", base
        elif kind == "table" and arg:
            self.kind, self.param = "table", arg
            self._load_table(Path(arg))
        else:
            raise ValueError(f"unknown growth function {spec!r}")

    def _load_table(self, path: Path) -> None:
        if not path.is_file():
            raise FileNotFoundError(f"growth table not found: {path}")
        points: dict[int, int] = {}
        for lineno, line in enumerate(path.read_text().splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'n f(n)'")
            n, v = from_decimal(parts[0]), from_decimal(parts[1])
            if n < 1 or v < 0:
                raise ValueError(f"{path}:{lineno}: values must be natural numbers")
            points[n] = v
        running = 0
        for n in sorted(points):
            running = max(running, points[n])
            self._table_keys.append(n)
            self._table_prefix_max.append(running)
        self._table_raw = points

    def raw(self, n: int) -> int:
        if n < 1:
            raise ValueError("growth functions are defined on n >= 1")
        if self.kind == "identity":
            return n
        if self.kind == "poly":
            if n.bit_length() * self.param > MAX_VALUE_BITS:
                raise GrowthOverflow(f"{self.spec} value exceeds the {MAX_VALUE_BITS}-bit limit")
            return n ** self.param
        if self.kind == "exp":
            if n.bit_length() > 64 or n * math.log2(self.param) > MAX_VALUE_BITS:
                raise GrowthOverflow(
                    f"{self.spec} at an argument of {n.bit_length()} bits exceeds the {MAX_VALUE_BITS}-bit limit"
                )
            return self.param ** n
        i = bisect.bisect_right(self._table_keys, n) - 1
        return self._table_raw[self._table_keys[i]] if i >= 0 else 0

    def __call__(self, n: int) -> int:
        """``F(n) = max(n, f(1), ..., f(n))``."""
        if n < 1:
            raise ValueError("growth functions are defined on n >= 1")
        if self.kind == "table":
            i = bisect.bisect_right(self._table_keys, n) - 1
            best = self._table_prefix_max[i] if i >= 0 else 0
            return max(n, best)
        # the builtin kinds are already nondecreasing
        return max(n, self.raw(n))

    def __repr__(self) -> str:
        return f"GrowthFunction({self.spec!r})"


def _positive_int(text: str, spec: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise ValueError(f"bad parameter in growth function {spec!r}") from None
    if value < 1:
        raise ValueError(f"parameter must be positive in {spec!r}")
    return value


def lcm_accumulate(values) -> int:
    values = list(values)
    if not values:
        raise ValueError("lcm of an empty list")
    if any(v < 1 for v in values):
        raise ValueError("lcm_accumulate takes positive integers")
    return reduce(math.lcm, values)


def bad_residue(value: int, modulus: int) -> bool:
    """True when ``value`` is congruent to one of +-1, +-2 modulo ``modulus``."""
    r = value % modulus
    return r in (1, 2, modulus - 1, modulus - 2)


@dataclass
class SequenceTable:
    """Values ``p(1..K+1)``, ``q(1..K)``, ``d(1..K)`` and ``ell(2..K)``.

    Lists are stored 0-based: ``p[k - 1]`` is ``p(k)`` and ``ell[k - 2]`` is
    the lcm of ``d(1), ..., d(k-1)``.
    """

    K: int
    p: list[int]
    q: list[int]
    d: list[int]
    ell: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "K": self.K,
            "p": [to_decimal(v) for v in self.p],
            "q": [to_decimal(v) for v in self.q],
            "d": [to_decimal(v) for v in self.d],
            "ell": [to_decimal(v) for v in self.ell],
        }

    @classmethod
    def from_dict(cls, data: dict) -> SequenceTable:
        expected = {"K", "p", "q", "d", "ell"}
        if set(data) != expected:
            raise ValueError(f"sequence table keys must be {sorted(expected)}, got {sorted(data)}")
        table = cls(
            K=int(data["K"]),
            p=[from_decimal(v) for v in data["p"]],
            q=[from_decimal(v) for v in data["q"]],
            d=[from_decimal(v) for v in data["d"]],
            ell=[from_decimal(v) for v in data["ell"]],
        )
        K = table.K
        if K < 1 or len(table.p) != K + 1 or len(table.q) != K or len(table.d) != K or len(table.ell) != K - 1:
            raise ValueError("sequence table lengths do not match K")
        return table

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> SequenceTable:
        return cls.from_dict(json.loads(text))


def build(f: GrowthFunction, K: int) -> SequenceTable:
    """Run the recurrence up to level ``K``.

    Base: ``p(1)=1, p(2)=3, d(1)=2F(16)+1, q(1)=2F(16)-1``.  Step ``k >= 2``:
    ``ell = lcm(d(1..k-1))``, ``q(k) = 2F(4p(k) + 40 ell + 4) + 1``,
    ``d(k) = p(k) q(k) + 2`` and ``p(k+1)`` is the least of
    ``p(k) + 2j ell`` (j = 1..5) with ``p(k+1) q(k)`` not in +-1, +-2 mod d(k).
    """
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    base = f(BASE_ARGUMENT)
    p = [1, 3]
    q = [2 * base - 1]
    d = [2 * base + 1]
    ell: list[int] = []
    if bad_residue(p[1] * q[0], d[0]):
        raise AssertionError("base case violates the congruence condition")
    running_lcm = d[0]
    for k in range(2, K + 1):
        pk = p[k - 1]
        l = running_lcm
        qk = 2 * f(4 * pk + 40 * l + 4) + 1
        dk = pk * qk + 2
        if not pk + 2 * CANDIDATE_COUNT * l < dk:
            raise AssertionError(f"candidates for p({k + 1}) are not distinct mod d({k})")
        for j in range(1, CANDIDATE_COUNT + 1):
            candidate = pk + 2 * j * l
            if not bad_residue(candidate * qk, dk):
                break
        else:
            raise AssertionError(f"no valid candidate for p({k + 1}); recurrence is broken")
        ell.append(l)
        q.append(qk)
        d.append(dk)
        p.append(candidate)
        running_lcm = math.lcm(running_lcm, dk)
    return SequenceTable(K=K, p=p, q=q, d=d, ell=ell)


@dataclass
class ClauseCheck:
    clause: str
    index: int
    passed: bool
    detail: str = ""


@dataclass
class ClauseReport:
    checks: list[ClauseCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[ClauseCheck]:
        return [c for c in self.checks if not c.passed]

    def clause_passed(self, clause: str) -> bool:
        return all(c.passed for c in self.checks if c.clause == clause)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [
                {"clause": c.clause, "index": c.index, "passed": c.passed, "detail": c.detail}
                for c in self.checks
            ],
        }


def verify_clauses(t: SequenceTable, f: GrowthFunction) -> ClauseReport:
    """Check clauses (i)-(v) at every index up to ``t.K``; failures carry the
    offending value."""
    checks: list[ClauseCheck] = []
    K = t.K

    for k in range(1, K + 2):
        pk = t.p[k - 1]
        problems = []
        if pk % 2 == 0:
            problems.append(f"p({k})={short(pk)} is even")
        if k == 1 and pk != 1:
            problems.append(f"p(1)={short(pk)} != 1")
        if k > 1 and pk <= t.p[k - 2]:
            problems.append(f"p({k}) <= p({k - 1})")
        checks.append(ClauseCheck("i", k, not problems, "; ".join(problems)))

    for k in range(1, K + 1):
        qk, dk, pk = t.q[k - 1], t.d[k - 1], t.p[k - 1]
        ok = qk % 2 == 1 and qk > 2
        checks.append(ClauseCheck("ii", k, ok, "" if ok else f"q({k})={short(qk)} must be odd and > 2"))

        ok = dk == pk * qk + 2
        checks.append(ClauseCheck("iii", k, ok, "" if ok else f"d({k}) != p({k}) q({k}) + 2"))

        problems = []
        if dk % 2 == 0:
            problems.append(f"d({k}) is even")
        try:
            bound = 2 * f(4 * t.p[k] + 4)
        except GrowthOverflow as exc:
            problems.append(f"bound not computable: {exc}")
        else:
            if not dk > bound:
                problems.append(f"d({k}) <= 2F(4p({k + 1})+4) = {short(bound)}")
        checks.append(ClauseCheck("iv", k, not problems, "; ".join(problems)))

        nxt = t.p[k]
        bad = []
        for i in range(1, k + 1):
            r = (nxt * t.q[i - 1]) % t.d[i - 1]
            if bad_residue(r, t.d[i - 1]):
                bad.append(f"p({k + 1}) q({i}) = {short(r)} mod d({i})")
        checks.append(ClauseCheck("v", k, not bad, "; ".join(bad)))
    return ClauseReport(checks)
