"""Truncated model of ``B_f = <s, t>`` inside the product of Alt(d(k)), k <= K.

In factor k the generator ``s`` acts as the shift by ``q(k)`` on Z/d(k)Z and
``t`` as the 3-cycle (1, 2, 3).  Every statement made here concerns the first
K factors only; nothing is claimed about factors beyond the table.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from rfgrowth import shift_sparse as ss
from rfgrowth.perm import Perm, factor_in_alt, is_even
from rfgrowth.sequences import GrowthFunction, SequenceTable, build, short, to_decimal
from rfgrowth.shift_sparse import ShiftSparsePerm
from rfgrowth.words import Alphabet

S, T = 1, 2
ST_ALPHABET = Alphabet(["s", "t"])
MIN_CERTIFIED_LENGTH = 8


class TableTooShallow(ValueError):
    """The sequence table does not reach far enough for the requested n."""


class STWord:
    """Freely reduced word in ``s`` and ``t`` kept in run-length form.

    Run-length storage keeps witness words such as ``s^p t s^-p ...`` small
    even when ``p`` has hundreds of digits.
    """

    __slots__ = ("runs",)

    def __init__(self, runs: Iterable[tuple[int, int]] = ()):
        stack: list[list[int]] = []
        for g, e in runs:
            if g not in (S, T):
                raise ValueError(f"unknown generator {g}")
            if e == 0:
                continue
            if stack and stack[-1][0] == g:
                stack[-1][1] += e
                if stack[-1][1] == 0:
                    stack.pop()
            else:
                stack.append([g, e])
        self.runs = tuple((g, e) for g, e in stack)

    @classmethod
    def from_letters(cls, letters: Sequence[int]) -> STWord:
        return cls((abs(x), 1 if x > 0 else -1) for x in letters)

    @classmethod
    def parse(cls, text: str) -> STWord:
        return cls.from_letters(ST_ALPHABET.parse(text))

    def letters(self) -> tuple[int, ...]:
        out: list[int] = []
        for g, e in self.runs:
            out.extend([g if e > 0 else -g] * abs(e))
        return tuple(out)

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.runs)

    def __mul__(self, other: STWord) -> STWord:
        return STWord(self.runs + other.runs)

    def inverse(self) -> STWord:
        return STWord((g, -e) for g, e in reversed(self.runs))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, STWord) and self.runs == other.runs

    def __hash__(self) -> int:
        return hash(self.runs)

    def __str__(self) -> str:
        if not self.runs:
            return "1"
        tokens = []
        for g, e in self.runs:
            name = "s" if g == S else "t"
            if e == 1:
                tokens.append(name)
            elif e == -1:
                tokens.append(name.upper())
            else:
                tokens.append(f"{name}^{e}")
        return " ".join(tokens)

    def __repr__(self) -> str:
        return f"STWord({str(self)!r})"


def _check_level(k: int, t: SequenceTable) -> None:
    if not 1 <= k <= t.K:
        raise ValueError(f"level {k} outside 1..{t.K}")


def witness_word(k: int, t: SequenceTable) -> STWord:
    """``[s^p t s^-p, t]`` with ``p = p(k)``; length ``4 p(k) + 4``."""
    _check_level(k, t)
    p = t.p[k - 1]
    return STWord([(S, p), (T, 1), (S, -p), (T, 1), (S, p), (T, -1), (S, -p), (T, -1)])


def generator_images(k: int, t: SequenceTable) -> tuple[ShiftSparsePerm, ShiftSparsePerm]:
    _check_level(k, t)
    d = t.d[k - 1]
    return ss.from_shift(d, t.q[k - 1]), ss.from_sparse(d, (1, 2, 3))


def project(w: STWord, k: int, t: SequenceTable) -> ShiftSparsePerm:
    """The image of ``w`` under the k-th coordinate projection."""
    _check_level(k, t)
    d, q = t.d[k - 1], t.q[k - 1]
    beta = ss.from_sparse(d, (1, 2, 3))
    powers = {0: ss.ShiftSparsePerm.identity(d), 1: beta, 2: ss.inverse(beta)}
    result = ShiftSparsePerm.identity(d)
    for g, e in w.runs:
        if g == S:
            step = ss.from_shift(d, e * q)
        else:
            step = powers[e % 3]
        result = ss.compose(result, step)
    return result


def detecting_factors(w: STWord, t: SequenceTable) -> set[int]:
    return {k for k in range(1, t.K + 1) if not ss.is_identity(project(w, k, t))}


def detection_matrix(t: SequenceTable) -> list[list[bool]]:
    """``matrix[j-1][k-1]`` is True when witness j projects nontrivially to factor k."""
    rows = []
    for j in range(1, t.K + 1):
        w = witness_word(j, t)
        rows.append([not ss.is_identity(project(w, k, t)) for k in range(1, t.K + 1)])
    return rows


def conjugation_witness(g: Perm, k: int, t: SequenceTable) -> STWord:
    """A word ``lambda`` in s, t whose k-th projection is the even permutation ``g``."""
    _check_level(k, t)
    d, q = t.d[k - 1], t.q[k - 1]
    if g.degree != d:
        raise ValueError(f"permutation has degree {g.degree}, factor {k} has degree {d}")
    if not is_even(g):
        raise ValueError("conjugation witness needs an even permutation")
    word = factor_in_alt(g, q % d)
    return STWord((S if gen == "A" else T, e) for gen, e in word.runs())


def order_log2_estimate(d: int) -> float | int:
    """log2 of ``d!/2`` by Stirling; an integer approximation for huge d."""
    if d.bit_length() < 1000:
        return (math.lgamma(d + 1) / math.log(2)) - 1
    scale = 1 << 64
    bits = d.bit_length()
    log2_d = bits - 1 + math.log2((d >> (bits - 53)) / (1 << 52))
    return (d * int((log2_d - math.log2(math.e)) * scale)) // scale


@dataclass
class GrowthCertificate:
    n: int
    k: int
    witness: STWord
    witness_length: int
    detection_row: list[bool]
    d_k: int
    bound: int
    clause_iv_pass: bool
    order_log2: float | int = 0
    conclusion: str = ""

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "witness": str(self.witness),
            "witness_length": self.witness_length,
            "detection_row": list(self.detection_row),
            "clause_iv": {"d_k": to_decimal(self.d_k), "bound": to_decimal(self.bound), "pass": self.clause_iv_pass},
            "order_log2_estimate": self.order_log2 if isinstance(self.order_log2, float) else to_decimal(self.order_log2),
            "conclusion": self.conclusion,
        }


def select_level(n: int, t: SequenceTable) -> int:
    """The k with ``4p(k)+4 <= n < 4p(k+1)+4``."""
    if n < MIN_CERTIFIED_LENGTH:
        raise ValueError(f"certificates start at n = {MIN_CERTIFIED_LENGTH}, got {n}")
    for k in range(1, t.K + 1):
        if 4 * t.p[k - 1] + 4 <= n < 4 * t.p[k] + 4:
            return k
    raise TableTooShallow(f"n = {n} is beyond 4p(K+1)+4 for K = {t.K}; rebuild with larger K")


def growth_certificate(n: int, f: GrowthFunction, t: SequenceTable) -> GrowthCertificate:
    k = select_level(n, t)
    w = witness_word(k, t)
    row = [ss.is_identity(project(w, i, t)) for i in range(1, t.K + 1)]
    d_k = t.d[k - 1]
    bound = 2 * f(4 * t.p[k] + 4)
    conclusion = (
        f"D(n) >= |Alt(d({k}))| = d({k})!/2 > d({k})/2 > F(4p({k + 1})+4) >= F({n}) >= f({n})"
    )
    return GrowthCertificate(
        n=n,
        k=k,
        witness=w,
        witness_length=len(w),
        detection_row=row,
        d_k=d_k,
        bound=bound,
        clause_iv_pass=d_k > bound,
        order_log2=order_log2_estimate(d_k),
        conclusion=conclusion,
    )


def validate_certificate(cert: GrowthCertificate, f: GrowthFunction, t: SequenceTable) -> list[str]:
    """Recheck every field against the table; returns the problems found."""
    problems = []
    k = cert.k
    if not 1 <= k <= t.K:
        return [f"level {k} outside table"]
    lo, hi = 4 * t.p[k - 1] + 4, 4 * t.p[k] + 4
    if not lo <= cert.n < hi:
        problems.append(f"n = {cert.n} not in [{short(lo)}, {short(hi)})")
    if cert.n < MIN_CERTIFIED_LENGTH:
        problems.append("n below 8")
    expected = witness_word(k, t)
    if cert.witness != expected:
        problems.append("witness is not the level-k commutator word")
    if cert.witness_length != len(cert.witness) or cert.witness_length != lo:
        problems.append("witness length is not 4p(k)+4")
    row = [ss.is_identity(project(cert.witness, i, t)) for i in range(1, t.K + 1)]
    if list(cert.detection_row) != row:
        problems.append("detection row does not match recomputation")
    if [i + 1 for i, trivial in enumerate(row) if not trivial] != [k]:
        problems.append("witness is not detected exactly at factor k")
    if cert.d_k != t.d[k - 1]:
        problems.append("d_k does not match the table")
    bound = 2 * f(4 * t.p[k] + 4)
    if cert.bound != bound:
        problems.append("clause (iv) bound does not match 2F(4p(k+1)+4)")
    if not (cert.clause_iv_pass and cert.d_k > cert.bound):
        problems.append("clause (iv) inequality fails")
    if f(cert.n) > f(hi):
        problems.append("F(n) exceeds F(4p(k+1)+4)")
    return problems


@dataclass
class SweepResult:
    max_length: int
    words: int = 0
    trivial_in_truncation: int = 0
    detected: int = 0
    counterexamples: list[str] = field(default_factory=list)

    def merge(self, other: SweepResult) -> None:
        self.words += other.words
        self.trivial_in_truncation += other.trivial_in_truncation
        self.detected += other.detected
        self.counterexamples.extend(other.counterexamples)


def _sweep_prefix(args) -> SweepResult:
    prefix, max_length, table, check_levels = args
    levels = range(1, table.K + 1)
    gens = {}
    for k in levels:
        s_img, t_img = generator_images(k, table)
        gens[k] = {S: s_img, -S: ss.inverse(s_img), T: t_img, -T: ss.inverse(t_img)}
    result = SweepResult(max_length)

    def visit(letters: list[int], images: dict[int, ShiftSparsePerm]) -> None:
        result.words += 1
        if any(not ss.is_identity(images[k]) for k in check_levels):
            result.detected += 1
        else:
            result.trivial_in_truncation += 1
            extra = [k for k in levels if k not in check_levels and not ss.is_identity(images[k])]
            if extra:
                word = STWord.from_letters(letters)
                result.counterexamples.append(f"{word} (nontrivial in factor {extra[0]})")
        if len(letters) == max_length:
            return
        for x in (S, -S, T, -T):
            if letters and x == -letters[-1]:
                continue
            letters.append(x)
            visit(letters, {k: ss.compose(images[k], gens[k][x]) for k in levels})
            letters.pop()

    start = {k: ShiftSparsePerm.identity(table.d[k - 1]) for k in levels}
    for x in prefix:
        start = {k: ss.compose(start[k], gens[k][x]) for k in levels}
    visit(list(prefix), start)
    return result


def sweep_small_ball(f: GrowthFunction, K: int, max_length: int, workers: int = 1) -> SweepResult:
    """Exhaust nonempty reduced words of length <= ``max_length`` in s, t.

    Each word is evaluated in factors 1..K+1.  A word trivial in factors
    1..K but nontrivial in factor K+1 is a certified nontrivial element of
    ``B_f`` that the truncation misses; such words are collected as
    counterexamples rather than assumed away.
    """
    table = build(f, K + 1)
    check = tuple(range(1, K + 1))
    prefixes = [(a, b) for a in (S, -S, T, -T) for b in (S, -S, T, -T) if b != -a]
    total = SweepResult(max_length)
    # length-1 words sit above the two-letter prefixes
    if max_length >= 1:
        for a in (S, -S, T, -T):
            total.merge(_sweep_prefix(((a,), 1, table, check)))
    if max_length >= 2:
        jobs = [(pre, max_length, table, check) for pre in prefixes]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(_sweep_prefix, jobs))
        else:
            parts = [_sweep_prefix(job) for job in jobs]
        for part in parts:
            total.merge(part)
    return total
