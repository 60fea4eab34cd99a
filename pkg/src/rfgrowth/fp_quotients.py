"""Finite quotients of finitely presented groups.

Finite quotients are reached as images of homomorphisms into symmetric
groups: a group of order N embeds in Sym(N), so searching generator images
in degrees up to m sees every quotient of order at most m.  Two tests decide
whether a map on generators extends to the group: relators dying in the
image, or (for groups known only through oracles) comparing indices via
Schreier generators of the kernel.

Permutations in the hot loops are 0-based tuples; ``FiniteHom`` converts to
``Perm`` at the edges.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

from rfgrowth.oracles import GroupOracle
from rfgrowth.perm import Perm
from rfgrowth.words import Alphabet, Word, free_reduce, inverse, is_reduced

DEFAULT_MAX_DEGREE = 7
SCHREIER_ORDER_CAP = 10_000


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class Presentation:
    alphabet: Alphabet
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        for r in self.relators:
            if not r:
                raise PresentationError("trivial relator")
            if not is_reduced(r):
                raise PresentationError(f"relator {r} is not freely reduced")
            if any(abs(x) > self.alphabet.rank for x in r):
                raise PresentationError(f"relator {r} uses letters outside the alphabet")

    @property
    def rank(self) -> int:
        return self.alphabet.rank

    @classmethod
    def from_strings(cls, gens: Sequence[str], relators: Sequence[str] = ()) -> Presentation:
        alphabet = Alphabet(gens)
        rels = []
        for text in relators:
            w = alphabet.parse(text)
            if not w:
                raise PresentationError(f"relator {text!r} reduces to the empty word")
            rels.append(w)
        return cls(alphabet, tuple(rels))

    @classmethod
    def parse(cls, text: str) -> Presentation:
        """Read ``gens: a b`` followed by ``rel: <word>`` lines."""
        gens = None
        rels = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition(":")
            key = key.strip()
            if not sep:
                raise PresentationError(f"line {lineno}: expected 'gens:' or 'rel:'")
            if key == "gens":
                if gens is not None:
                    raise PresentationError(f"line {lineno}: duplicate gens line")
                gens = value.split()
            elif key == "rel":
                if gens is None:
                    raise PresentationError(f"line {lineno}: rel before gens")
                rels.append(value.strip())
            else:
                raise PresentationError(f"line {lineno}: unknown key {key!r}")
        if gens is None:
            raise PresentationError("missing gens line")
        try:
            return cls.from_strings(gens, rels)
        except PresentationError:
            raise
        except ValueError as exc:
            raise PresentationError(str(exc)) from exc

    @classmethod
    def from_file(cls, path: str | Path) -> Presentation:
        return cls.parse(Path(path).read_text())

    def to_text(self) -> str:
        lines = ["gens: " + " ".join(self.alphabet.names)]
        lines += ["rel: " + self.alphabet.format(r) for r in self.relators]
        return "\n".join(lines) + "\n"


# -- raw permutation helpers (0-based tuples) --------------------------------


def _inv(p: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def _letter_table(images: Sequence[tuple[int, ...]]) -> dict[int, tuple[int, ...]]:
    table = {}
    for i, p in enumerate(images, 1):
        table[i] = p
        table[-i] = _inv(p)
    return table


def _kills(table: dict[int, tuple[int, ...]], word: Word, degree: int) -> bool:
    """True when the word evaluates to the identity."""
    rev = word[::-1]
    for x in range(degree):
        y = x
        for letter in rev:
            y = table[letter][y]
        if y != x:
            return False
    return True


def _evaluate(table: dict[int, tuple[int, ...]], word: Word, degree: int) -> tuple[int, ...]:
    result = tuple(range(degree))
    for letter in word:
        g = table[letter]
        result = tuple(result[y] for y in g)
    return result


def _closure_size(gens: Sequence[tuple[int, ...]], degree: int, cap: int) -> int | None:
    """Order of the generated group, or None once it exceeds ``cap``."""
    ident = tuple(range(degree))
    gens = [g for g in set(gens) if g != ident]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                hg = tuple(h[y] for y in g)
                if hg not in seen:
                    seen.add(hg)
                    if len(seen) > cap:
                        return None
                    nxt.append(hg)
        frontier = nxt
    return len(seen)


def _partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for part in range(min(n, largest), 0, -1):
        for rest in _partitions(n - part, part):
            yield (part,) + rest


def cycle_type_representatives(degree: int) -> list[tuple[int, ...]]:
    """One permutation per conjugacy class of Sym(degree), consecutive cycles."""
    reps = []
    for parts in _partitions(degree):
        img = list(range(degree))
        start = 0
        for length in parts:
            for i in range(length):
                img[start + i] = start + (i + 1) % length
            start += length
        reps.append(tuple(img))
    return sorted(reps)


# -- homomorphisms -------------------------------------------------------------


@dataclass(frozen=True)
class FiniteHom:
    """Generator images in Sym(degree); ``images[i]`` is a 0-based tuple."""

    degree: int
    images: tuple[tuple[int, ...], ...]

    @classmethod
    def from_perms(cls, perms: Sequence[Perm]) -> FiniteHom:
        perms = list(perms)
        degree = perms[0].degree
        if any(p.degree != degree for p in perms):
            raise ValueError("images must share a degree")
        return cls(degree, tuple(tuple(x - 1 for x in p.images) for p in perms))

    @classmethod
    def parse(cls, images: Sequence[str], degree: int) -> FiniteHom:
        return cls.from_perms([Perm.parse(text, degree) for text in images])

    def perms(self) -> list[Perm]:
        return [Perm([x + 1 for x in img]) for img in self.images]

    def image_strings(self) -> list[str]:
        return [p.cycle_notation() for p in self.perms()]

    def table(self) -> dict[int, tuple[int, ...]]:
        return _letter_table(self.images)

    def evaluate(self, word: Word) -> tuple[int, ...]:
        return _evaluate(self.table(), word, self.degree)

    def kills(self, word: Word) -> bool:
        return _kills(self.table(), word, self.degree)


def _all_perms(degree: int) -> list[tuple[int, ...]]:
    return list(itertools.permutations(range(degree)))


def enumerate_homs(p: Presentation, m: int) -> Iterator[FiniteHom]:
    """Every generator-image tuple in Sym(m) that kills all relators, in
    lexicographic order."""
    if m < 1:
        raise ValueError("degree must be >= 1")
    perms = _all_perms(m)
    for images in itertools.product(perms, repeat=p.rank):
        table = _letter_table(images)
        if all(_kills(table, r, m) for r in p.relators):
            yield FiniteHom(m, images)


def all_generator_maps(rank: int, m: int) -> Iterator[FiniteHom]:
    """Every map from ``rank`` generators into Sym(m), relators ignored."""
    perms = _all_perms(m)
    for images in itertools.product(perms, repeat=rank):
        yield FiniteHom(m, images)


def image_order(h: FiniteHom, cap: int) -> int | None:
    """Order of the image group, or None if it exceeds ``cap``."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    return _closure_size(h.images, h.degree, cap)


def extends_by_relators(p: Presentation, h: FiniteHom) -> bool:
    table = h.table()
    return all(_kills(table, r, h.degree) for r in p.relators)


# -- minimal detecting quotient ------------------------------------------------


@dataclass
class Detection:
    element: Word
    order: int
    hom: FiniteHom
    searched_degree: int

    @property
    def exact(self) -> bool:
        """True when every group smaller than ``order`` was within reach."""
        return self.order - 1 <= self.searched_degree

    def to_dict(self, alphabet: Alphabet) -> dict:
        return {
            "element": alphabet.format(self.element),
            "min_order": self.order,
            "degree": self.hom.degree,
            "images": self.hom.image_strings(),
        }


def _search_chunk(args):
    """Best (order, index, images) over one slice of first-generator images."""
    relators, gamma, rank, degree, firsts, offset, cap = args
    perms = _all_perms(degree)
    best = None
    best_order = cap
    n_rest = len(perms) ** (rank - 1)
    for i, first in enumerate(firsts):
        base = (offset + i) * n_rest
        for j, rest in enumerate(itertools.product(perms, repeat=rank - 1)):
            images = (first,) + rest
            table = _letter_table(images)
            if _kills(table, gamma, degree):
                continue
            if not all(_kills(table, r, degree) for r in relators):
                continue
            limit = best_order - 1 if best is not None else best_order
            if limit < 1:
                continue
            size = _closure_size(images, degree, limit)
            if size is not None:
                best = (size, base + j, images)
                best_order = size
    return best


def minimal_detecting_quotient(
    p: Presentation,
    gamma: Word,
    max_order: int,
    *,
    max_degree: int = DEFAULT_MAX_DEGREE,
    pruned: bool = True,
    exhaustive: bool = False,
    workers: int = 1,
    pool: ProcessPoolExecutor | None = None,
) -> Detection | None:
    """Least image order of a homomorphism that does not kill ``gamma``.

    Degrees ``1 .. min(max_order, max_degree)`` are searched in turn.  Unless
    ``exhaustive`` is set the search stops once every group smaller than the
    current best has been within reach.  With ``pruned`` the first
    generator runs over cycle-type representatives only; detection and image
    order are invariant under simultaneous conjugation, so the minimum is
    unchanged.  Ties are broken by (degree, enumeration index), so results do
    not depend on ``workers``.
    """
    gamma = free_reduce(gamma)
    top = min(max_order, max_degree)
    best = None  # (order, degree, index, images)
    searched = 0
    own_pool = None
    if pool is None and workers > 1:
        own_pool = pool = ProcessPoolExecutor(max_workers=workers)
    try:
        for degree in range(1, top + 1):
            if best is not None and not exhaustive and best[0] <= degree:
                break
            firsts = cycle_type_representatives(degree) if pruned else _all_perms(degree)
            if p.rank == 0:
                break
            cap = best[0] - 1 if best is not None else max_order
            if cap < 1:
                break
            n_chunks = max(1, min(len(firsts), (workers or 1) * 4))
            size = -(-len(firsts) // n_chunks)
            jobs = []
            for c in range(0, len(firsts), size):
                jobs.append((p.relators, gamma, p.rank, degree, firsts[c:c + size], c, cap))
            # when the first generator is pruned the index still orders ties
            if pool is not None and len(jobs) > 1:
                results = list(pool.map(_search_chunk, jobs))
            else:
                results = [_search_chunk(job) for job in jobs]
            for r in results:
                if r is None:
                    continue
                key = (r[0], degree, r[1])
                if best is None or key < best[:3]:
                    best = key + (r[2],)
            searched = degree
    finally:
        if own_pool is not None:
            own_pool.shutdown()
    if best is None:
        return None
    return Detection(gamma, best[0], FiniteHom(best[1], best[3]), searched)


# -- Schreier generators and the oracle extension test --------------------------


@dataclass
class KernelData:
    hom: FiniteHom
    coset_reps: list[Word]
    schreier_gens: list[Word]
    rep_of: dict[tuple[int, ...], Word]

    @property
    def index(self) -> int:
        return len(self.coset_reps)


def schreier_kernel_generators(h: FiniteHom) -> KernelData:
    """Transversal and Schreier generators for the kernel of F_X -> image.

    Representatives come from a breadth-first walk of the image with the
    positive generator letters in order, so each is the shortlex-least word
    reaching its element and the set is prefix closed.  The generators are
    ``t x rep(t x)^-1`` for t in the transversal and x a generator, freely
    reduced with trivial ones dropped.
    """
    degree = h.degree
    rank = len(h.images)
    ident = tuple(range(degree))
    rep_of: dict[tuple[int, ...], Word] = {ident: ()}
    order = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for i in range(rank):
                x = h.images[i]
                gx = tuple(g[y] for y in x)
                if gx not in rep_of:
                    rep_of[gx] = rep_of[g] + (i + 1,)
                    order.append(gx)
                    nxt.append(gx)
                    if len(rep_of) > SCHREIER_ORDER_CAP:
                        raise ValueError(f"image larger than {SCHREIER_ORDER_CAP}")
        frontier = nxt
    gens: list[Word] = []
    seen: set[Word] = set()
    for g in order:
        t = rep_of[g]
        for i in range(rank):
            gx = tuple(g[y] for y in h.images[i])
            w = free_reduce(t + (i + 1,) + inverse(rep_of[gx]))
            if w and w not in seen:
                seen.add(w)
                gens.append(w)
    return KernelData(h, [rep_of[g] for g in order], gens, rep_of)


def schreier_rewrite(word: Word, kd: KernelData) -> list[tuple[int, int]]:
    """Express a kernel word as a product of Schreier generators.

    Returns ``[(index into kd.schreier_gens, +-1), ...]``; raises ValueError
    when the word is not in the kernel.
    """
    h = kd.hom
    table = h.table()
    degree = h.degree
    index = {w: i for i, w in enumerate(kd.schreier_gens)}
    current = tuple(range(degree))
    out = []
    for x in word:
        if x > 0:
            t = kd.rep_of[current]
            nxt = tuple(current[y] for y in table[x])
            s = free_reduce(t + (x,) + inverse(kd.rep_of[nxt]))
            if s:
                out.append((index[s], 1))
        else:
            nxt = tuple(current[y] for y in table[x])
            # t x^-1 rep(..)^-1 is the inverse of rep(nxt) x t^-1
            t = kd.rep_of[current]
            s = free_reduce(kd.rep_of[nxt] + (-x,) + inverse(t))
            if s:
                out.append((index[s], -1))
        current = nxt
    if current != tuple(range(degree)):
        raise ValueError("word is not in the kernel")
    return out


def extends_by_membership(group: GroupOracle, h: FiniteHom) -> bool:
    """Decide whether the generator map extends to a homomorphism of Gamma.

    With N the kernel of F_X -> image, the map extends iff the kernel K of
    F_X -> Gamma lies in N, iff only the trivial coset representative lands
    in the image of N in Gamma.  The count uses the group's membership
    oracle on the Schreier generators.
    """
    if len(h.images) != group.alphabet.rank:
        raise ValueError("hom and group have different numbers of generators")
    kd = schreier_kernel_generators(h)
    sub = group.subgroup(kd.schreier_gens)
    count = sum(1 for t in kd.coset_reps if t in sub)
    return count == 1
