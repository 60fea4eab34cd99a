import pytest

from rfgrowth.fp_quotients import (
    FiniteHom,
    Presentation,
    PresentationError,
    all_generator_maps,
    enumerate_homs,
    extends_by_membership,
    extends_by_relators,
    image_order,
    minimal_detecting_quotient,
    schreier_kernel_generators,
    schreier_rewrite,
)
from rfgrowth.oracles import FreeAbelianOracle, IntegersOracle, cyclic_oracle
from rfgrowth.words import free_reduce, inverse, multiply, reduced_words

Z = Presentation.from_strings(["a"])
F2 = Presentation.from_strings(["a", "b"])


def test_presentation_parse():
    p = Presentation.parse("gens: a b\nrel: abAB  # commutator\n\nrel: a^2\n")
    assert p.rank == 2 and p.relators == ((1, 2, -1, -2), (1, 1))
    assert Presentation.parse(p.to_text()) == p
    for bad in ("rel: a\ngens: a", "gens: a\nrel: aA", "gens: a\nrel: b", "gens: a\nfoo: a", "rel a"):
        with pytest.raises(PresentationError):
            Presentation.parse(bad)


def test_enumerate_homs_examples():
    assert len(list(enumerate_homs(Z, 3))) == 6
    assert len(list(enumerate_homs(Presentation.from_strings(["a"], ["a^2"]), 3))) == 4
    cube = Presentation.from_strings(["a"], ["a^3"])
    assert not extends_by_relators(cube, FiniteHom.parse(["(1,2)"], 3))


def test_enumerate_homs_lexicographic():
    homs = list(enumerate_homs(F2, 3))
    assert len(homs) == 36
    assert [h.images for h in homs] == sorted(h.images for h in homs)


def test_image_order_examples():
    assert image_order(FiniteHom.parse(["()"], 3), 10) == 1
    assert image_order(FiniteHom.parse(["(1,2,3,4,5)"], 5), 10) == 5
    assert image_order(FiniteHom.parse(["(1,2)", "(1,3)"], 3), 10) == 6
    assert image_order(FiniteHom.parse(["(1,2)", "(1,3)"], 3), 5) is None


def test_detection_examples():
    assert minimal_detecting_quotient(Z, (1,), 100).order == 2
    det = minimal_detecting_quotient(Z, (1,) * 6, 100)
    assert det.order == 4 and det.exact
    det = minimal_detecting_quotient(F2, (1, 2, -1, -2), 100)
    assert det.order == 6 and det.hom.degree == 3
    assert not det.hom.kills((1, 2, -1, -2))
    assert minimal_detecting_quotient(Z, (1,) * 12, 4, max_degree=4) is None


def test_pruned_matches_unpruned():
    for p, gamma in [(Z, (1,) * 12), (F2, (1, 1)), (F2, (1, 2, -1, -2)), (F2, (1, 2, 2))]:
        a = minimal_detecting_quotient(p, gamma, 100, max_degree=5, pruned=True)
        b = minimal_detecting_quotient(p, gamma, 100, max_degree=5, pruned=False)
        assert a.order == b.order


def test_degree_monotonicity():
    for gamma in [(1,) * 6, (1,) * 12, (1,) * 60]:
        orders = []
        for m in range(1, 8):
            det = minimal_detecting_quotient(Z, gamma, 1000, max_degree=m, exhaustive=True)
            orders.append(det.order if det else None)
        found = [o for o in orders if o is not None]
        assert found == sorted(found, reverse=True)
        final = found[-1]
        # stable once the degree reaches the order
        assert all(o == final for o in orders[final - 1:])


def test_schreier_examples():
    kd = schreier_kernel_generators(FiniteHom.parse(["()"], 1))
    assert kd.schreier_gens == [(1,)]
    kd = schreier_kernel_generators(FiniteHom.parse(["(1,2,3)"], 3))
    assert kd.schreier_gens == [(1, 1, 1)] and kd.coset_reps == [(), (1,), (1, 1)]
    kd = schreier_kernel_generators(FiniteHom.parse(["(1,2)", "()"], 2))
    assert set(kd.schreier_gens) == {(2,), (1, 1), (1, 2, -1)}


def _small_homs():
    for m in (2, 3, 4):
        for h in all_generator_maps(2, m):
            order = image_order(h, 12)
            if order is not None:
                yield h


def test_schreier_soundness_and_completeness():
    words = [w for n in range(0, 7) for w in reduced_words(2, n)]
    checked = 0
    for h in _small_homs():
        kd = schreier_kernel_generators(h)
        assert len(kd.coset_reps) == image_order(h, 12)
        for g in kd.schreier_gens:
            assert h.kills(g)
        for w in words:
            if not h.kills(w):
                continue
            pieces = schreier_rewrite(w, kd)
            rebuilt = multiply(*[kd.schreier_gens[i] if e == 1 else inverse(kd.schreier_gens[i]) for i, e in pieces])
            assert rebuilt == free_reduce(w)
            checked += 1
        with pytest.raises(ValueError):
            bad = next((w for w in words if not h.kills(w)), None)
            if bad is None:
                raise ValueError("trivial image")
            schreier_rewrite(bad, kd)
    assert checked > 1000


def test_extends_examples():
    sq = Presentation.from_strings(["a"], ["a^2"])
    assert extends_by_relators(sq, FiniteHom.parse(["(1,2)"], 2))
    assert not extends_by_relators(sq, FiniteHom.parse(["(1,2,3)"], 3))
    z2 = Presentation.from_strings(["a", "b"], ["abAB"])
    assert extends_by_relators(z2, FiniteHom.parse(["(1,2)", "(1,2)"], 2))
    assert extends_by_membership(IntegersOracle(), FiniteHom.parse(["(1,2,3)"], 3))
    assert not extends_by_membership(cyclic_oracle(2), FiniteHom.parse(["(1,2,3,4)"], 4))


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_method_agreement_small(m):
    cases = [
        (Z, IntegersOracle()),
        (Presentation.from_strings(["a"], ["a^6"]), cyclic_oracle(6)),
        (Presentation.from_strings(["a", "b"], ["abAB"]), FreeAbelianOracle(F2.alphabet)),
    ]
    for p, oracle in cases:
        for h in all_generator_maps(p.rank, m):
            assert extends_by_relators(p, h) == extends_by_membership(oracle, h)


def test_parallel_search_matches_serial():
    a = minimal_detecting_quotient(F2, (1, 2, -1, -2), 100, max_degree=4, exhaustive=True, workers=1)
    b = minimal_detecting_quotient(F2, (1, 2, -1, -2), 100, max_degree=4, exhaustive=True, workers=2)
    assert (a.order, a.hom) == (b.order, b.hom)
