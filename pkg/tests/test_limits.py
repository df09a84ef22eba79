import itertools

import pytest

import hornmod as hm
from hornmod.families import all_structures, dedup_by_iso


def test_terminal_order_signature(preord):
    one = hm.terminal(preord.signature)
    assert one.sorted_carrier() == ("*",)
    assert one.edges == {hm.edge("le", "*", "*")}


def test_terminal_empty_signature():
    one = hm.terminal(hm.Signature(()))
    assert one.size() == 1 and not one.edges


def test_terminal_boolean_quantale_signature():
    one = hm.terminal(hm.signature_of(hm.boolean_quantale()))
    assert one.edges == {hm.edge("~0", "*", "*"), hm.edge("~1", "*", "*")}


def test_product_with_terminal_is_isomorphic(chain2, preord):
    res = hm.product(chain2, hm.terminal(preord.signature))
    assert hm.are_isomorphic(res.structure, chain2)
    assert hm.validate_morphism(res.left) and hm.validate_morphism(res.right)


def test_product_of_chains_edge_count(chain2):
    # oracle: count componentwise-related pairs directly
    pairs = [(a, b) for a in chain2.carrier for b in chain2.carrier]
    expected = sum(
        1
        for (a, b), (c, d) in itertools.product(pairs, repeat=2)
        if chain2.holds("le", (a, c)) and chain2.holds("le", (b, d))
    )
    assert expected == 9
    res = hm.product(chain2, chain2)
    assert res.structure.size() == 4
    assert len(res.structure.edges) == 9


def test_product_edge_count_formula(preord):
    xs = dedup_by_iso(all_structures(preord.signature, 2))
    for x in xs:
        for y in xs:
            res = hm.product(x, y)
            for s in preord.signature.symbols:
                assert len(res.structure.tuples(s.name)) == len(x.tuples(s.name)) * len(
                    y.tuples(s.name)
                )


def test_pullback_along_identity(chain2, chain3):
    f = hm.Morphism(chain2, chain3, {"c0": "c0", "c1": "c2"})
    res = hm.pullback(f, hm.identity_morphism(chain3))
    assert hm.are_isomorphic(res.structure, chain2)


def test_pullback_over_terminal_is_product(chain2):
    res = hm.pullback(hm.bang(chain2), hm.bang(chain2))
    prod = hm.product(chain2, chain2)
    assert res.structure == prod.structure


def test_pullback_of_point_is_fibre(chain3):
    from conftest import interp_fail_morphism

    f = interp_fail_morphism()
    one = hm.terminal(chain3.signature)
    for z in chain3.carrier:
        zbar = hm.Morphism(one, chain3, {"*": z})
        pb = hm.pullback(zbar, f)
        fib = hm.fibre_structure(f, z)
        assert pb.structure.size() == fib.size()
        assert hm.are_isomorphic(pb.structure, fib)


def test_fibre_of_identity(chain2):
    for a in chain2.carrier:
        fib = hm.fibre_structure(hm.identity_morphism(chain2), a)
        assert fib.sorted_carrier() == (a,)


def test_fibre_empty_preimage():
    from conftest import interp_fail_morphism

    f = interp_fail_morphism()
    fib = hm.fibre_structure(f, "c1")
    assert fib.size() == 0 and not fib.edges


def test_fibre_of_constant(chain2):
    one_pt = hm.Structure(chain2.signature, ["p"], [hm.edge("le", "p", "p")])
    const = hm.Morphism(chain2, one_pt, {"c0": "p", "c1": "p"})
    assert hm.fibre_structure(const, "p") == chain2


def test_fibre_unknown_point_raises(chain2):
    with pytest.raises(hm.StructureError):
        hm.fibre_structure(hm.identity_morphism(chain2), "zz")


def test_hom_chain2_chain2(chain2):
    homs = hm.enumerate_morphisms(chain2, chain2)
    assert len(homs) == 3
    maps = [tuple(sorted(h.mapping.items())) for h in homs]
    assert (("c0", "c0"), ("c1", "c0")) in maps  # constant at bottom
    assert (("c0", "c0"), ("c1", "c1")) in maps  # identity
    assert (("c0", "c1"), ("c1", "c1")) in maps  # constant at top
    assert (("c0", "c1"), ("c1", "c0")) not in maps  # the swap is rejected


def test_hom_from_terminal_counts_reflexive_points(preord):
    one = hm.terminal(preord.signature)
    for x in dedup_by_iso(all_structures(preord.signature, 2)):
        if hm.is_reflexive(x):
            assert hm.hom_count(one, x) == x.size()


def test_hom_to_terminal_is_singleton(preord, chain2):
    assert hm.hom_count(chain2, hm.terminal(preord.signature)) == 1


def test_hom_in_theory_requires_models(preord, chain2):
    broken = hm.Structure(preord.signature, ["a"], [])
    with pytest.raises(hm.StructureError):
        hm.enumerate_morphisms(broken, chain2, in_theory=preord)
    assert len(hm.enumerate_morphisms(chain2, chain2, in_theory=preord)) == 3


def test_equalizer_of_equal_pair(chain2):
    res = hm.equalizer(hm.identity_morphism(chain2), hm.identity_morphism(chain2))
    assert res.structure == chain2


def test_equalizer_into_terminal(chain2):
    res = hm.equalizer(hm.bang(chain2), hm.bang(chain2))
    assert res.structure == chain2


def test_equalizer_identity_vs_constant(chain2):
    const = hm.Morphism(chain2, chain2, {"c0": "c1", "c1": "c1"})
    res = hm.equalizer(hm.identity_morphism(chain2), const)
    assert res.structure.sorted_carrier() == ("c1",)
    assert hm.validate_morphism(res.inclusion)


def test_equalizer_needs_parallel_pair(chain2, chain3):
    f = hm.Morphism(chain2, chain3, {"c0": "c0", "c1": "c1"})
    with pytest.raises(hm.StructureError):
        hm.equalizer(f, hm.identity_morphism(chain2))


def _cones_family(sig):
    return dedup_by_iso(all_structures(sig, 2))


def test_product_universal_property(preord):
    family = _cones_family(preord.signature)
    xs = family[:6]
    for x in xs:
        for y in xs:
            res = hm.product(x, y)
            for q in family:
                for q1 in hm.enumerate_morphisms(q, x):
                    for q2 in hm.enumerate_morphisms(q, y):
                        mediating = [
                            m
                            for m in hm.enumerate_morphisms(q, res.structure)
                            if hm.compose(res.left, m) == q1
                            and hm.compose(res.right, m) == q2
                        ]
                        assert len(mediating) == 1


def test_pullback_universal_property(preord, chain2):
    family = _cones_family(preord.signature)
    z = chain2
    legs = [f for x in family[:5] for f in hm.enumerate_morphisms(x, z)]
    for f in legs[:8]:
        for g in legs[:8]:
            res = hm.pullback(f, g)
            for q in family:
                for q1 in hm.enumerate_morphisms(q, f.source):
                    for q2 in hm.enumerate_morphisms(q, g.source):
                        if hm.compose(f, q1) != hm.compose(g, q2):
                            continue
                        mediating = [
                            m
                            for m in hm.enumerate_morphisms(q, res.structure)
                            if hm.compose(res.left, m) == q1
                            and hm.compose(res.right, m) == q2
                        ]
                        assert len(mediating) == 1


def test_equalizer_universal_property(preord, chain2):
    family = _cones_family(preord.signature)
    parallel = hm.enumerate_morphisms(chain2, chain2)
    for f in parallel:
        for g in parallel:
            res = hm.equalizer(f, g)
            for q in family:
                for t in hm.enumerate_morphisms(q, chain2):
                    if hm.compose(f, t) != hm.compose(g, t):
                        continue
                    mediating = [
                        m
                        for m in hm.enumerate_morphisms(q, res.structure)
                        if hm.compose(res.inclusion, m) == t
                    ]
                    assert len(mediating) == 1


def test_limits_of_models_are_models(preord, pos):
    for theory in (preord, pos):
        models = [
            s
            for s in dedup_by_iso(all_structures(theory.signature, 2))
            if hm.is_model(s, theory)
        ]
        assert hm.is_model(hm.terminal(theory.signature), theory)
        for x in models:
            for y in models:
                assert hm.is_model(hm.product(x, y).structure, theory)
                for f in hm.enumerate_morphisms(x, y):
                    for g in hm.enumerate_morphisms(x, y):
                        assert hm.is_model(hm.pullback(f, g).structure, theory)


def test_carrier_sizes_match_set_limits(chain2, chain3):
    assert hm.product(chain2, chain3).structure.size() == 6
    f = hm.Morphism(chain2, chain2, {"c0": "c0", "c1": "c1"})
    g = hm.Morphism(chain2, chain2, {"c0": "c0", "c1": "c0"})
    pb = hm.pullback(f, g)
    assert pb.structure.size() == len(
        [(a, b) for a in chain2.carrier for b in chain2.carrier if f(a) == g(b)]
    )
