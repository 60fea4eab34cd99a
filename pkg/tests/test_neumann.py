import random
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rfgrowth import shift_sparse as ss
from rfgrowth.neumann import (
    STWord,
    TableTooShallow,
    conjugation_witness,
    detecting_factors,
    detection_matrix,
    growth_certificate,
    project,
    select_level,
    sweep_small_ball,
    validate_certificate,
    witness_word,
)
from rfgrowth.perm import Perm, cycle_alpha, random_even, three_cycle_beta
from rfgrowth.sequences import GrowthFunction, build

F = GrowthFunction("identity")
TABLE = build(F, 3)


def dense_project(w: STWord, k: int) -> Perm:
    d, q = TABLE.d[k - 1], TABLE.q[k - 1]
    s, t = cycle_alpha(d) ** q, three_cycle_beta(d)
    acc = Perm.identity(d)
    for x in w.letters():
        g = s if abs(x) == 1 else t
        acc = acc * (g if x > 0 else g**-1)
    return acc


def test_witness_lengths():
    assert len(witness_word(1, TABLE)) == 8
    assert len(witness_word(2, TABLE)) == 16
    assert len(witness_word(3, TABLE)) == 280
    assert str(witness_word(3, TABLE)) == "s^69 t s^-69 t s^69 T s^-69 T"
    with pytest.raises(ValueError):
        witness_word(4, TABLE)


def test_project_examples():
    assert project(STWord.parse("s"), 1, TABLE) == ss.from_shift(33, 31)
    assert not ss.is_identity(project(witness_word(1, TABLE), 1, TABLE))
    assert ss.is_identity(project(witness_word(1, TABLE), 2, TABLE))
    assert (1 * 2673) % 8021 not in (1, 2, 8019, 8020)


def test_detecting_factors_examples():
    assert detecting_factors(STWord(), TABLE) == set()
    assert detecting_factors(STWord.parse("t"), TABLE) == {1, 2, 3}
    for k in (1, 2, 3):
        assert detecting_factors(witness_word(k, TABLE), TABLE) == {k}


def test_detection_matrix_modular_criterion():
    # w_j is nontrivial at i exactly when p(j) q(i) = +-1, +-2 mod d(i)
    m = detection_matrix(TABLE)
    for j in range(1, 4):
        for i in range(1, 4):
            r = (TABLE.p[j - 1] * TABLE.q[i - 1]) % TABLE.d[i - 1]
            assert m[j - 1][i - 1] == (r in (1, 2, TABLE.d[i - 1] - 1, TABLE.d[i - 1] - 2))


def test_project_matches_dense_in_small_factors():
    rng = random.Random(7)
    for _ in range(200):
        letters = [rng.choice([1, -1, 2, -2]) for _ in range(rng.randint(0, 25))]
        w = STWord.from_letters(letters)
        for k in (1, 2):
            assert ss.to_dense(project(w, k, TABLE)) == dense_project(w, k)


@settings(max_examples=300)
@given(
    st.lists(st.sampled_from([1, -1, 2, -2]), max_size=30),
    st.lists(st.sampled_from([1, -1, 2, -2]), max_size=30),
    st.integers(1, 3),
)
def test_project_homomorphism(u, v, k):
    w1, w2 = STWord.from_letters(u), STWord.from_letters(v)
    assert project(w1 * w2, k, TABLE) == ss.compose(project(w1, k, TABLE), project(w2, k, TABLE))
    assert ss.is_identity(project(w1 * w1.inverse(), k, TABLE))


def test_conjugation_witness_examples():
    assert str(conjugation_witness(three_cycle_beta(33), 1, TABLE)) == "t"
    assert str(conjugation_witness(cycle_alpha(33) ** 31, 1, TABLE)) == "s"
    rng = random.Random(11)
    for _ in range(20):
        g = random_even(33, rng)
        w = conjugation_witness(g, 1, TABLE)
        assert ss.to_dense(project(w, 1, TABLE)) == g
    with pytest.raises(ValueError):
        conjugation_witness(Perm.parse("(1,2)", 33), 1, TABLE)
    with pytest.raises(ValueError):
        conjugation_witness(three_cycle_beta(1461144071 % 10_000 + 1), 3, TABLE)


def test_select_level_bracketing():
    assert [select_level(n, TABLE) for n in (8, 15, 16, 279, 280)] == [1, 1, 2, 2, 3]
    with pytest.raises(ValueError):
        select_level(7, TABLE)
    with pytest.raises(TableTooShallow):
        select_level(300, build(F, 1))


def test_certificate_fields():
    cert = growth_certificate(8, F, TABLE)
    assert cert.k == 1 and cert.d_k == 33 and cert.bound == 32 and cert.clause_iv_pass
    assert cert.detection_row == [False, True, True]
    data = cert.to_dict()
    assert set(data) >= {"n", "k", "witness", "witness_length", "detection_row", "clause_iv"}
    assert data["clause_iv"] == {"d_k": "33", "bound": "32", "pass": True}
    assert validate_certificate(cert, F, TABLE) == []


@pytest.mark.parametrize(
    "change",
    [
        {"k": 2},
        {"n": 16},
        {"witness": STWord.parse("s t S t s T S T t")},
        {"witness_length": 9},
        {"detection_row": [True, True, True]},
        {"d_k": 35},
        {"bound": 30},
        {"clause_iv_pass": False},
    ],
)
def test_tampered_certificate_rejected(change):
    cert = growth_certificate(8, F, TABLE)
    assert validate_certificate(replace(cert, **change), F, TABLE)


def test_certificate_for_other_f():
    f = GrowthFunction("poly:2")
    t = build(f, 3)
    for n in (8, 15, 16, 1000, 4120):
        cert = growth_certificate(n, f, t)
        assert validate_certificate(cert, f, t) == []
        assert cert.d_k > f(n)


def test_sweep_short():
    r = sweep_small_ball(F, 3, 6)
    assert r.words == sum(4 * 3 ** (n - 1) for n in range(1, 7))
    assert r.counterexamples == []
    assert r.detected + r.trivial_in_truncation == r.words


def test_stword_text():
    w = STWord.parse("s^3 t S^3 T")
    assert str(w) == "s^3 t s^-3 T" and len(w) == 8
    assert str(STWord()) == "1"
    assert (w * w.inverse()) == STWord()
