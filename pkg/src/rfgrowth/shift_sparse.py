"""Permutations of Z/dZ stored as a global shift after a finite-support part.

An element is ``x -> (shift + sparse(x)) mod d`` where ``sparse`` moves only
finitely many residues.  Products of shifts and 3-cycles stay in this form,
so words can be evaluated exactly in Alt(d) for moduli far too large to
store densely.  Residues are 0-based internally; ``__call__``, ``from_sparse``
and the text form use the points 1..d.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping, Sequence

from rfgrowth.perm import DENSE_DEGREE_CAP, Perm

MIN_MODULUS = 5

_TEXT_RE = re.compile(r"^\s*d=(\d+);\s*shift=(\d+);\s*sparse=\((.*)\)\s*$")


class ShiftSparsePerm:
    __slots__ = ("modulus", "shift", "sparse", "_map")

    def __init__(self, modulus: int, shift: int, sparse: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        if modulus < MIN_MODULUS:
            raise ValueError(f"modulus must be >= {MIN_MODULUS}, got {modulus}")
        pairs = dict(sparse)
        mapping = {x % modulus: y % modulus for x, y in pairs.items()}
        if len(mapping) != len(pairs):
            raise ValueError("sparse part has colliding residues")
        if set(mapping) != set(mapping.values()):
            raise ValueError("sparse part is not a permutation of its support")
        mapping = {x: y for x, y in mapping.items() if x != y}
        shift %= modulus
        if 2 * len(mapping) >= modulus:
            shift, mapping = _renormalize(modulus, shift, mapping)
        self.modulus = modulus
        self.shift = shift % modulus
        self.sparse = tuple(sorted(mapping.items()))
        self._map = mapping

    @classmethod
    def _make(cls, modulus: int, shift: int, mapping: dict[int, int]) -> ShiftSparsePerm:
        # trusted constructor: mapping is already reduced and fixed-point free
        if 2 * len(mapping) >= modulus:
            shift, mapping = _renormalize(modulus, shift, mapping)
        e = cls.__new__(cls)
        e.modulus = modulus
        e.shift = shift % modulus
        e._map = mapping
        e.sparse = tuple(sorted(mapping.items()))
        return e

    @classmethod
    def identity(cls, d: int) -> ShiftSparsePerm:
        return cls(d, 0)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ShiftSparsePerm)
            and self.modulus == other.modulus
            and self.shift == other.shift
            and self.sparse == other.sparse
        )

    def __hash__(self) -> int:
        return hash((self.modulus, self.shift, self.sparse))

    def __mul__(self, other: ShiftSparsePerm) -> ShiftSparsePerm:
        return compose(self, other)

    def __pow__(self, m: int) -> ShiftSparsePerm:
        base = self if m >= 0 else inverse(self)
        m = abs(m)
        result = ShiftSparsePerm.identity(self.modulus)
        while m:
            if m & 1:
                result = compose(result, base)
            base = compose(base, base)
            m >>= 1
        return result

    def __call__(self, x: int) -> int:
        """Image of the 1-based point ``x``."""
        if not 1 <= x <= self.modulus:
            raise ValueError(f"point {x} outside 1..{self.modulus}")
        return self.image0(x - 1) + 1

    def image0(self, r: int) -> int:
        return (self.shift + self._map.get(r, r)) % self.modulus

    def support_size(self) -> int:
        return len(self._map)

    def __repr__(self) -> str:
        return f"ShiftSparsePerm({self.to_text()})"

    def to_text(self) -> str:
        body = ", ".join(f"{x + 1}>{y + 1}" for x, y in self.sparse)
        return f"d={self.modulus}; shift={self.shift}; sparse=({body})"

    @classmethod
    def parse(cls, text: str) -> ShiftSparsePerm:
        m = _TEXT_RE.match(text)
        if not m:
            raise ValueError(f"malformed shift-sparse text: {text!r}")
        d, shift, body = int(m.group(1)), int(m.group(2)), m.group(3).strip()
        pairs = []
        if body:
            for item in body.split(","):
                x, y = item.split(">")
                pairs.append((int(x) - 1, int(y) - 1))
        return cls(d, shift, pairs)


def _renormalize(d: int, shift: int, mapping: dict[int, int]) -> tuple[int, dict[int, int]]:
    """Pick the shift carried by the most points (least such shift on ties).

    A wide sparse part can hide a shift, e.g. a dense d-cycle stored with
    shift 0.  Choosing the plurality displacement makes the pair a function
    of the permutation alone, so structural equality stays exact.
    """
    counts: dict[int, int] = {}
    for x in range(d):
        disp = (shift + mapping.get(x, x) - x) % d
        counts[disp] = counts.get(disp, 0) + 1
    best = max(counts.values())
    new_shift = min(m for m, c in counts.items() if c == best)
    out = {}
    for x in range(d):
        y = (shift + mapping.get(x, x) - new_shift) % d
        if y != x:
            out[x] = y
    return new_shift, out


def from_shift(d: int, m: int) -> ShiftSparsePerm:
    """The pure shift ``x -> x + m (mod d)``."""
    return ShiftSparsePerm(d, m)


def from_sparse(d: int, cycles: Sequence[Sequence[int]] | Sequence[int]) -> ShiftSparsePerm:
    """Finite-support permutation from 1-based cycles, e.g. ``[(1, 2, 3)]``.

    A flat sequence of ints is read as a single cycle.
    """
    if d < MIN_MODULUS:
        raise ValueError(f"modulus must be >= {MIN_MODULUS}, got {d}")
    if cycles and isinstance(cycles[0], int):
        cycles = [cycles]
    mapping: dict[int, int] = {}
    seen: set[int] = set()
    for cyc in cycles:
        res = [(x - 1) % d for x in cyc]
        for r in res:
            if r in seen:
                raise ValueError(f"point {r + 1} repeated in cycles mod {d}")
            seen.add(r)
        if len(res) > 1:
            for a, b in zip(res, res[1:] + res[:1]):
                mapping[a] = b
    return ShiftSparsePerm._make(d, 0, mapping)


def apply(e: ShiftSparsePerm, x: int) -> int:
    return e(x)


def compose(e1: ShiftSparsePerm, e2: ShiftSparsePerm) -> ShiftSparsePerm:
    """``e1 o e2`` (``e2`` first).

    With ``e_i(x) = M_i + t_i(x)`` the product is ``M1 + M2 + s(t2(x))`` where
    ``s(y) = t1(y + M2) - M2`` is ``t1`` conjugated by the shift ``-M2``.
    """
    d = e1.modulus
    if d != e2.modulus:
        raise ValueError(f"modulus mismatch: {d} vs {e2.modulus}")
    m2 = e2.shift
    t1 = e1._map
    t2 = e2._map
    if m2:
        s = {(x - m2) % d: (y - m2) % d for x, y in t1.items()}
    else:
        s = t1
    out: dict[int, int] = {}
    for x in s.keys() | t2.keys():
        y = t2.get(x, x)
        z = s.get(y, y)
        if z != x:
            out[x] = z
    return ShiftSparsePerm._make(d, e1.shift + m2, out)


def inverse(e: ShiftSparsePerm) -> ShiftSparsePerm:
    """Inverse of ``x -> M + t(x)``: ``y -> -M + t'(y)`` with ``t'(y) = t^-1(y - M) + M``."""
    d, m = e.modulus, e.shift
    out = {(y + m) % d: (x + m) % d for x, y in e._map.items()}
    return ShiftSparsePerm._make(d, -m, out)


def is_identity(e: ShiftSparsePerm) -> bool:
    return e.shift == 0 and not e._map


def to_dense(e: ShiftSparsePerm) -> Perm:
    d = e.modulus
    if d > DENSE_DEGREE_CAP:
        raise ValueError(f"modulus {d} exceeds dense cap {DENSE_DEGREE_CAP}")
    return Perm([e.image0(r) + 1 for r in range(d)])


def from_dense(p: Perm) -> ShiftSparsePerm:
    """Sparse form of a dense permutation, with zero shift."""
    return ShiftSparsePerm(p.degree, 0, {i: y - 1 for i, y in enumerate(p.images)})
