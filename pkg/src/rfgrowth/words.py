"""Words in free groups.

A word is a tuple of nonzero ints: ``i`` stands for the i-th generator
(1-based) and ``-i`` for its inverse.  Text uses one letter per generator,
uppercase for inverses, and ``^`` for powers: ``abAB``, ``a^6``, ``s^-69 t``.
"""

from __future__ import annotations

import re
from typing import Iterator, Sequence

Word = tuple[int, ...]

_TOKEN_RE = re.compile(r"([A-Za-z])(?:\^(-?\d+))?")


def free_reduce(word: Sequence[int]) -> Word:
    stack: list[int] = []
    for x in word:
        if x == 0:
            raise ValueError("0 is not a letter")
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def is_reduced(word: Sequence[int]) -> bool:
    return all(a != -b for a, b in zip(word, word[1:]))


def inverse(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


def multiply(*words: Sequence[int]) -> Word:
    out: list[int] = []
    for w in words:
        out.extend(w)
    return free_reduce(out)


def power(word: Sequence[int], m: int) -> Word:
    base = tuple(word) if m >= 0 else inverse(word)
    return free_reduce(base * abs(m))


def letter_rank(x: int) -> int:
    """Shortlex letter order a < A < b < B < ..."""
    return 2 * (abs(x) - 1) + (0 if x > 0 else 1)


def shortlex_key(word: Sequence[int]) -> tuple:
    return (len(word), tuple(letter_rank(x) for x in word))


def runs(word: Sequence[int]) -> list[tuple[int, int]]:
    """Run-length form ``[(generator, exponent), ...]``."""
    out: list[tuple[int, int]] = []
    for x in word:
        g, e = abs(x), (1 if x > 0 else -1)
        if out and out[-1][0] == g:
            out[-1] = (g, out[-1][1] + e)
        else:
            out.append((g, e))
    return [r for r in out if r[1] != 0]


def reduced_words(rank: int, length: int) -> Iterator[Word]:
    """All freely reduced words of exactly ``length`` letters, in shortlex order."""
    letters = sorted([g for g in range(1, rank + 1)] + [-g for g in range(1, rank + 1)], key=letter_rank)

    def extend(prefix: list[int], remaining: int) -> Iterator[Word]:
        if remaining == 0:
            yield tuple(prefix)
            return
        last = prefix[-1] if prefix else 0
        for x in letters:
            if x == -last:
                continue
            prefix.append(x)
            yield from extend(prefix, remaining - 1)
            prefix.pop()

    yield from extend([], length)


class Alphabet:
    """Generator names for parsing and printing words."""

    def __init__(self, names: Sequence[str]):
        names = list(names)
        if not names:
            raise ValueError("an alphabet needs at least one generator")
        for name in names:
            if len(name) != 1 or not name.islower():
                raise ValueError(f"generator names must be single lowercase letters: {name!r}")
        if len(set(names)) != len(names):
            raise ValueError(f"repeated generator names: {names}")
        self.names = names
        self._index = {name: i + 1 for i, name in enumerate(names)}

    @property
    def rank(self) -> int:
        return len(self.names)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Alphabet) and self.names == other.names

    def __repr__(self) -> str:
        return f"Alphabet({self.names})"

    def parse(self, text: str) -> Word:
        """Parse and freely reduce; ``1`` or an empty string is the empty word."""
        body = re.sub(r"\s+", "", text)
        if body in ("", "1", "e"):
            return ()
        pos = 0
        letters: list[int] = []
        while pos < len(body):
            m = _TOKEN_RE.match(body, pos)
            if not m:
                raise ValueError(f"cannot parse word {text!r} at position {pos}")
            ch, exp = m.group(1), m.group(2)
            gen = self._index.get(ch.lower())
            if gen is None:
                raise ValueError(f"unknown letter {ch!r} in {text!r}; alphabet is {self.names}")
            sign = -1 if ch.isupper() else 1
            count = int(exp) if exp is not None else 1
            letter = sign * gen if count >= 0 else -sign * gen
            letters.extend([letter] * abs(count))
            pos = m.end()
        return free_reduce(letters)

    def format(self, word: Sequence[int]) -> str:
        if not word:
            return "1"
        tokens = []
        for g, e in runs(word):
            name = self.names[g - 1]
            if e == 1:
                tokens.append(name)
            elif e == -1:
                tokens.append(name.upper())
            else:
                tokens.append(f"{name}^{e}")
        if any("^" in t for t in tokens):
            return " ".join(tokens)
        return "".join(tokens)
