"""Word-problem and membership oracles for reference groups.

An oracle describes a group Gamma together with a surjection from the free
group on its alphabet.  It answers whether a word is trivial in Gamma and
whether a word lies in the subgroup of Gamma generated by given words; the
subgroup is assumed normal of finite index, as in the quotient-extension
test, but the reference oracles below answer correctly for any subgroup.
"""

from __future__ import annotations

import math
from typing import Protocol, Sequence

from rfgrowth.words import Alphabet, Word, free_reduce


class OracleUnavailable(RuntimeError):
    """The oracle cannot decide the requested question."""


class GroupOracle(Protocol):
    alphabet: Alphabet

    def is_trivial(self, word: Word) -> bool: ...

    def subgroup(self, gens: Sequence[Word]): ...


class _OracleBase:
    alphabet: Alphabet

    def normal_form(self, word: Word):
        """Hashable value equal for words equal in the group."""
        raise OracleUnavailable(f"{type(self).__name__} has no normal form")

    def word_problem(self, word: Word) -> bool:
        return self.is_trivial(word)

    def membership(self, word: Word, gens: Sequence[Word]) -> bool:
        return word in self.subgroup(gens)

    def equal(self, w1: Word, w2: Word) -> bool:
        return self.is_trivial(free_reduce(tuple(w1) + tuple(-x for x in reversed(w2))))


class FreeAbelianOracle(_OracleBase):
    """Z^r with the i-th letter mapped to the i-th basis vector.

    Subgroup membership is decided by integer row reduction of the generating
    vectors to Hermite form.
    """

    def __init__(self, alphabet: Alphabet):
        if alphabet.rank > 3:
            raise ValueError("free abelian oracle supports rank <= 3")
        self.alphabet = alphabet

    def vector(self, word: Word) -> tuple[int, ...]:
        v = [0] * self.alphabet.rank
        for x in word:
            v[abs(x) - 1] += 1 if x > 0 else -1
        return tuple(v)

    def normal_form(self, word: Word):
        return self.vector(word)

    def is_trivial(self, word: Word) -> bool:
        return not any(self.vector(word))

    def subgroup(self, gens: Sequence[Word]) -> Lattice:
        return Lattice([self.vector(g) for g in gens], self.alphabet.rank, key=self.vector)


class IntegersOracle(FreeAbelianOracle):
    """Z = <a | >; ``g in <m_1, ...>`` iff gcd(m_i) divides g."""

    def __init__(self, alphabet: Alphabet | None = None):
        alphabet = alphabet or Alphabet(["a"])
        if alphabet.rank != 1:
            raise ValueError("the integers oracle has one generator")
        super().__init__(alphabet)

    def subgroup(self, gens: Sequence[Word]) -> Lattice:
        g = 0
        for w in gens:
            g = math.gcd(g, self.vector(w)[0])
        return Lattice([(g,)] if g else [], 1, key=self.vector)


class Lattice:
    """Subgroup of Z^r given by generators, kept in row-echelon form."""

    def __init__(self, vectors, rank: int, key=None):
        self.rank = rank
        self.basis = _echelon([list(v) for v in vectors], rank)
        self._key = key

    def __contains__(self, item) -> bool:
        v = list(self._key(item) if self._key else item)
        for row in self.basis:
            pivot = next(i for i, x in enumerate(row) if x)
            if v[pivot] % row[pivot]:
                return False
            c = v[pivot] // row[pivot]
            v = [a - c * b for a, b in zip(v, row)]
        return not any(v)


def _echelon(rows: list[list[int]], rank: int) -> list[list[int]]:
    rows = [r for r in rows if any(r)]
    basis: list[list[int]] = []
    for col in range(rank):
        live = [r for r in rows if r[col]]
        rest = [r for r in rows if not r[col]]
        # Euclid on the column until one row carries the gcd
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            top = live[0]
            nxt = [top]
            for r in live[1:]:
                c = r[col] // top[col]
                r = [a - c * b for a, b in zip(r, top)]
                if r[col]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            live = nxt
        if live:
            pivot = live[0]
            if pivot[col] < 0:
                pivot = [-x for x in pivot]
            basis.append(pivot)
        rows = rest
    return basis


class FinitePermGroupOracle(_OracleBase):
    """A finite group given by permutation images of its generators.

    Words are evaluated directly; subgroup membership uses a breadth-first
    closure of the generating images.
    """

    def __init__(self, alphabet: Alphabet, images: Sequence):
        if len(images) != alphabet.rank:
            raise ValueError("need one image per generator")
        self.alphabet = alphabet
        imgs = [tuple(x - 1 for x in getattr(p, "images", p)) for p in images]
        degrees = {len(p) for p in imgs}
        if len(degrees) != 1:
            raise ValueError("generator images must share a degree")
        self.degree = degrees.pop()
        self._gens = {}
        for i, p in enumerate(imgs, 1):
            inv = [0] * self.degree
            for x, y in enumerate(p):
                inv[y] = x
            self._gens[i] = p
            self._gens[-i] = tuple(inv)

    def evaluate(self, word: Word) -> tuple[int, ...]:
        result = tuple(range(self.degree))
        for x in word:
            g = self._gens[x]
            result = tuple(result[y] for y in g)
        return result

    def normal_form(self, word: Word):
        return self.evaluate(word)

    def is_trivial(self, word: Word) -> bool:
        return self.evaluate(word) == tuple(range(self.degree))

    def subgroup(self, gens: Sequence[Word]) -> _Closure:
        return _Closure([self.evaluate(w) for w in gens], self.degree, key=self.evaluate)


class _Closure:
    def __init__(self, gens, degree: int, key=None):
        ident = tuple(range(degree))
        seen = {ident}
        frontier = [ident]
        gens = [g for g in gens if g != ident]
        while frontier:
            nxt = []
            for h in frontier:
                for g in gens:
                    hg = tuple(h[y] for y in g)
                    if hg not in seen:
                        seen.add(hg)
                        nxt.append(hg)
            frontier = nxt
        self.elements = seen
        self._key = key

    def __contains__(self, item) -> bool:
        return (self._key(item) if self._key else item) in self.elements

    def __len__(self) -> int:
        return len(self.elements)


def cyclic_oracle(n: int, alphabet: Alphabet | None = None) -> FinitePermGroupOracle:
    """Z/n on one generator, realized by the n-cycle."""
    alphabet = alphabet or Alphabet(["a"])
    if n < 1:
        raise ValueError("cyclic order must be positive")
    cycle = tuple(((i + 1) % n) + 1 for i in range(n))
    return FinitePermGroupOracle(alphabet, [cycle])


class FreeGroupOracle(_OracleBase):
    """The free group on the alphabet; the word problem is free reduction."""

    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet

    def normal_form(self, word: Word):
        return free_reduce(word)

    def is_trivial(self, word: Word) -> bool:
        return not free_reduce(word)

    def subgroup(self, gens: Sequence[Word]):
        raise OracleUnavailable("subgroup membership in free groups is not provided")
