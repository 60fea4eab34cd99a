"""Dense permutations of {1..n} and words over the generators of Alt(n).

Points are 1-based at every public boundary; internally a permutation is the
tuple of 0-based images.  Composition is functional: ``p1 * p2`` applies
``p2`` first.
"""

from __future__ import annotations

import math
import re
from functools import reduce
from typing import Iterable, Sequence

DENSE_DEGREE_CAP = 10_000

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class Perm:
    """A permutation of {1..degree}."""

    __slots__ = ("_img", "_hash")

    def __init__(self, images: Sequence[int], *, check: bool = True):
        img = tuple(x - 1 for x in images)
        if check:
            if len(img) < 1:
                raise ValueError("degree must be at least 1")
            if sorted(img) != list(range(len(img))):
                raise ValueError(f"not a bijection of 1..{len(img)}: {list(images)}")
        self._img = img
        self._hash = None

    @classmethod
    def _raw(cls, img: tuple[int, ...]) -> Perm:
        p = cls.__new__(cls)
        p._img = img
        p._hash = None
        return p

    @classmethod
    def identity(cls, n: int) -> Perm:
        if n < 1:
            raise ValueError("degree must be at least 1")
        return cls._raw(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> Perm:
        img = list(range(n))
        seen: set[int] = set()
        for cyc in cycles:
            for x in cyc:
                if not 1 <= x <= n:
                    raise ValueError(f"point {x} outside 1..{n}")
                if x in seen:
                    raise ValueError(f"point {x} repeated in cycle notation")
                seen.add(x)
            for a, b in zip(cyc, list(cyc[1:]) + list(cyc[:1])):
                img[a - 1] = b - 1
        return cls._raw(tuple(img))

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> Perm:
        """Parse cycle notation such as ``(1,2,3)(5,6)``; ``()`` is the identity.

        Without ``n`` the degree is the largest point mentioned.
        """
        stripped = re.sub(r"\s+", "", text)
        if _CYCLE_RE.sub("", stripped):
            raise ValueError(f"malformed cycle notation: {text!r}")
        cycles = []
        for body in _CYCLE_RE.findall(stripped):
            if body:
                cycles.append([int(tok) for tok in body.split(",")])
        top = max((x for c in cycles for x in c), default=1)
        return cls.from_cycles(n if n is not None else top, cycles)

    @property
    def degree(self) -> int:
        return len(self._img)

    @property
    def images(self) -> tuple[int, ...]:
        return tuple(x + 1 for x in self._img)

    def __call__(self, x: int) -> int:
        if not 1 <= x <= len(self._img):
            raise ValueError(f"point {x} outside 1..{len(self._img)}")
        return self._img[x - 1] + 1

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Perm) and self._img == other._img

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._img)
        return self._hash

    def __mul__(self, other: Perm) -> Perm:
        return compose(self, other)

    def __pow__(self, m: int) -> Perm:
        base = self if m >= 0 else inverse(self)
        m = abs(m) % order(self)
        result = Perm.identity(self.degree)
        while m:
            if m & 1:
                result = compose(result, base)
            base = compose(base, base)
            m >>= 1
        return result

    def __repr__(self) -> str:
        return f"Perm({self.degree}, {self.cycle_notation()})"

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self._img))

    def cycles(self, *, include_fixed: bool = False) -> list[tuple[int, ...]]:
        """Disjoint cycles, each starting at its least point, 1-based."""
        seen = [False] * len(self._img)
        out = []
        for start in range(len(self._img)):
            if seen[start]:
                continue
            cyc = []
            x = start
            while not seen[x]:
                seen[x] = True
                cyc.append(x + 1)
                x = self._img[x]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def cycle_notation(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + ",".join(map(str, c)) + ")" for c in cycles)

    def support(self) -> list[int]:
        return [i + 1 for i, x in enumerate(self._img) if i != x]


def compose(p1: Perm, p2: Perm) -> Perm:
    """Return ``p1 o p2``, so that ``compose(p1, p2)(x) == p1(p2(x))``."""
    if p1.degree != p2.degree:
        raise ValueError(f"degree mismatch: {p1.degree} vs {p2.degree}")
    a = p1._img
    return Perm._raw(tuple(a[x] for x in p2._img))


def inverse(p: Perm) -> Perm:
    inv = [0] * p.degree
    for i, x in enumerate(p._img):
        inv[x] = i
    return Perm._raw(tuple(inv))


def commutator(a: Perm, b: Perm) -> Perm:
    """``[a, b] = a b a^-1 b^-1``; the identity exactly when a and b commute."""
    return compose(compose(a, b), compose(inverse(a), inverse(b)))


def parity(p: Perm) -> str:
    """``"even"`` or ``"odd"``, read off the cycle type."""
    transpositions = sum(len(c) - 1 for c in p.cycles())
    return "even" if transpositions % 2 == 0 else "odd"


def is_even(p: Perm) -> bool:
    return parity(p) == "even"


def order(p: Perm) -> int:
    return reduce(math.lcm, (len(c) for c in p.cycles()), 1)


def cycle_alpha(n: int) -> Perm:
    """The n-cycle ``(1, 2, ..., n)`` for odd ``n >= 5``."""
    if n < 5 or n % 2 == 0:
        raise ValueError(f"alpha_n needs odd n >= 5, got {n}")
    return Perm._raw(tuple((i + 1) % n for i in range(n)))


def three_cycle_beta(n: int) -> Perm:
    """``(1, 2, 3)`` acting on {1..n}."""
    if n < 3:
        raise ValueError(f"beta needs n >= 3, got {n}")
    return Perm._raw((1, 2, 0) + tuple(range(3, n)))


class GenWord:
    """Freely reduced word over ``A`` (= alpha_n^q), ``B`` (= beta) and their
    inverses ``a``, ``b``."""

    __slots__ = ("letters",)

    _INV = {"A": "a", "a": "A", "B": "b", "b": "B"}

    def __init__(self, letters: str = ""):
        bad = set(letters) - set("AaBb")
        if bad:
            raise ValueError(f"unknown letters in generator word: {sorted(bad)}")
        stack: list[str] = []
        for ch in letters:
            if stack and stack[-1] == self._INV[ch]:
                stack.pop()
            else:
                stack.append(ch)
        self.letters = "".join(stack)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return self.letters

    def __repr__(self) -> str:
        return f"GenWord({self.letters!r})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GenWord) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def runs(self) -> list[tuple[str, int]]:
        """Run-length form: ``[("A", 3), ("B", -1), ...]``."""
        out: list[tuple[str, int]] = []
        for ch in self.letters:
            gen, e = ch.upper(), (1 if ch.isupper() else -1)
            if out and out[-1][0] == gen:
                out[-1] = (gen, out[-1][1] + e)
            else:
                out.append((gen, e))
        return out

    def evaluate(self, n: int, q: int) -> Perm:
        """Evaluate with ``A = alpha_n^q`` and ``B = beta``.

        The running product is kept as ``x -> stored[x] + offset (mod n)`` so a
        left factor ``A^e`` only moves the offset and ``B^e`` touches three
        entries.
        """
        stored = list(range(n))
        where = list(range(n))
        offset = 0
        for gen, e in reversed(self.runs()):
            if gen == "A":
                offset = (offset + e * q) % n
                continue
            shift = e % 3
            if shift == 0:
                continue
            # beta^e moves value v in {0,1,2} to (v + e) mod 3
            slots = [where[(v - offset) % n] for v in range(3)]
            for v, slot in enumerate(slots):
                new = ((v + shift) % 3 - offset) % n
                stored[slot] = new
                where[new] = slot
        return Perm._raw(tuple((s + offset) % n for s in stored))


def _signed(r: int, n: int) -> int:
    r %= n
    return r - n if r > n // 2 else r


def factor_in_alt(target: Perm, q: int) -> GenWord:
    """Write an even permutation of odd degree n >= 5 as a word in
    ``A = alpha_n^q`` and ``B = beta``.

    The conjugate ``A^m B A^-m`` is the consecutive 3-cycle
    ``(mq+1, mq+2, mq+3)``, so every consecutive triple ``(x, x+1, x+2)`` is
    reachable by choosing ``m = (x-1) q^-1 mod n``.  The target is reduced to
    the identity by carrying each value to its place with consecutive
    3-cycles, two positions per step; consecutive conjugates share their
    ``A``-powers so the word stays quadratic in n.
    """
    n = target.degree
    if n < 5 or n % 2 == 0:
        raise ValueError(f"degree must be odd and >= 5, got {n}")
    if n > DENSE_DEGREE_CAP:
        raise ValueError(f"degree {n} exceeds dense cap {DENSE_DEGREE_CAP}")
    if math.gcd(q, n) != 1:
        raise ValueError(f"gcd(q, n) = gcd({q}, {n}) != 1")
    if not is_even(target):
        raise ValueError("target is an odd permutation")
    u = pow(q, -1, n)

    r = target._img[0]
    if all(y == (i + r) % n for i, y in enumerate(target._img)):
        # a rotation is a power of A already
        j = _signed(r * u, n)
        return GenWord("A" * j if j > 0 else "a" * (-j))

    img = list(target._img)
    pos = [0] * n
    for i, v in enumerate(img):
        pos[v] = i
    # each entry (x, e) records a left factor T_x^e with T_x = (x, x+1, x+2)
    ops: list[tuple[int, int]] = []

    def apply_left(x: int, e: int) -> None:
        a, b, c = x, x + 1, x + 2
        if e == 1:
            mapping = {a: b, b: c, c: a}
        else:
            mapping = {a: c, b: a, c: b}
        moved = [(pos[v], mapping[v]) for v in (a, b, c)]
        for where, new in moved:
            img[where] = new
            pos[new] = where
        ops.append((x, e))

    for x in range(n - 2):
        v = img[x]
        while v - x >= 2:
            apply_left(v - 2, 1)
            v -= 2
        if v == x + 1:
            apply_left(x, -1)
    if img[n - 2] != n - 2:
        raise AssertionError("parity bookkeeping failed in factor_in_alt")

    # target = T_{x1}^{-e1} T_{x2}^{-e2} ... ; emit with a running A-cursor
    parts: list[str] = []
    cursor = 0
    for x, e in ops:
        step = _signed(x * u - cursor, n)
        cursor += step
        parts.append("A" * step if step > 0 else "a" * (-step))
        parts.append("b" if e == 1 else "B")
    back = _signed(-cursor, n)
    parts.append("A" * back if back > 0 else "a" * (-back))
    return GenWord("".join(parts))


def random_even(n: int, rng) -> Perm:
    """Uniform random element of Alt(n) drawn with ``rng`` (a ``random.Random``)."""
    img = list(range(n))
    rng.shuffle(img)
    p = Perm._raw(tuple(img))
    if not is_even(p):
        img[0], img[1] = img[1], img[0]
        p = Perm._raw(tuple(img))
    return p
