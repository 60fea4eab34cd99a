"""Residual finiteness growth of small finitely presented groups.

``D(n)`` is the largest, over nontrivial elements of word length at most n,
of the least order of a finite quotient in which the element survives.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from rfgrowth.fp_quotients import DEFAULT_MAX_DEGREE, Detection, Presentation, minimal_detecting_quotient
from rfgrowth.oracles import OracleUnavailable
from rfgrowth.words import Word, inverse, reduced_words, shortlex_key


@dataclass
class Ball:
    radius: int
    elements: list[Word]

    def __len__(self) -> int:
        return len(self.elements)


def ball(p: Presentation, oracle, n: int) -> Ball:
    """Shortlex-least representative of each nontrivial element of length <= n.

    Words are generated by length in shortlex order, so the first word seen
    for an element is its least representative.  Equality goes through the
    oracle's normal form when it has one, otherwise through pairwise word
    problem queries ``w1 w2^-1 = 1``.
    """
    if n < 1:
        raise ValueError("radius must be >= 1")
    try:
        oracle.normal_form(())
        use_forms = True
    except (OracleUnavailable, NotImplementedError):
        use_forms = False
    seen_forms = set()
    if use_forms:
        seen_forms.add(oracle.normal_form(()))
    elements: list[Word] = []
    for length in range(1, n + 1):
        for w in reduced_words(p.rank, length):
            if use_forms:
                key = oracle.normal_form(w)
                if key in seen_forms:
                    continue
                seen_forms.add(key)
                elements.append(w)
            else:
                if oracle.is_trivial(w):
                    continue
                if any(oracle.is_trivial(w + inverse(e)) for e in elements):
                    continue
                elements.append(w)
    elements.sort(key=shortlex_key)
    return Ball(n, elements)


@dataclass
class GrowthRow:
    n: int
    value: int | None
    elapsed_ms: float
    witness: Word | None
    witness_order: int | None
    elements: list[Word] = field(default_factory=list)
    undetected: list[Word] = field(default_factory=list)
    details: list[Detection | None] = field(default_factory=list)


def rf_growth(
    p: Presentation,
    oracle,
    n: int,
    max_order: int,
    *,
    max_degree: int = DEFAULT_MAX_DEGREE,
    workers: int = 1,
) -> int | None:
    """``D(n)``, or None when some element has no detecting quotient within
    the search bounds."""
    return rf_growth_table(p, oracle, [n], max_order, max_degree=max_degree, workers=workers)[0].value


def rf_growth_table(
    p: Presentation,
    oracle,
    radii,
    max_order: int,
    *,
    max_degree: int = DEFAULT_MAX_DEGREE,
    workers: int = 1,
) -> list[GrowthRow]:
    """One row per radius; per-element minima are shared across radii."""
    radii = sorted(set(radii))
    cache: dict[Word, Detection | None] = {}
    rows = []
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for n in radii:
            start = time.perf_counter()
            b = ball(p, oracle, n)
            for w in b.elements:
                if w not in cache:
                    cache[w] = minimal_detecting_quotient(
                        p, w, max_order, max_degree=max_degree, workers=workers, pool=pool
                    )
            details = [cache[w] for w in b.elements]
            undetected = [w for w, det in zip(b.elements, details) if det is None]
            witness, witness_order, value = None, None, None
            if not undetected:
                value = 0
                for w, det in zip(b.elements, details):
                    if det.order > value:
                        value, witness, witness_order = det.order, w, det.order
            elapsed = (time.perf_counter() - start) * 1000
            rows.append(GrowthRow(n, value, elapsed, witness, witness_order, b.elements, undetected, details))
    finally:
        if pool is not None:
            pool.shutdown()
    return rows


def z_growth_oracle(n: int) -> int:
    """Closed form for Gamma = Z: max over 1 <= m <= n of the least q >= 2
    not dividing m."""
    if n < 1:
        raise ValueError("radius must be >= 1")
    best = 0
    for m in range(1, n + 1):
        q = 2
        while m % q == 0:
            q += 1
        best = max(best, q)
    return best
