"""Decomposition, admissibility witnesses, and point maps between frames."""

import json
import random

import pytest

from medlog.alpha import alpha_formulas, u_valuation, universal_subst
from medlog.errors import SelfCheckError
from medlog.formula import (
    Atom,
    Substitution,
    apply_subst,
    parse,
    render,
)
from medlog.ipc import ipc_provable
from medlog.medvedev import (
    Valuation,
    frame,
    iter_valuations,
    sample_valuation,
    truth_set,
    valid_on,
    valuation,
    world,
)
from medlog.randgen import random_formula
from medlog.structural import (
    PMorphism,
    admissibility_witness,
    alpha_pmorphism,
    check_alpha_transfer,
    check_pmorphism,
    levin_decomposition,
    transfer_check,
)


def pullback_valuation(m, n, point_map):
    """Interpret the family atoms on M_m so that maximal world i behaves
    like the point_map[i]-th member's literal pattern."""
    fam = alpha_formulas(n)
    fr = frame(m)
    mapping = {}
    for j in range(1, fam.m + 1):
        s_mask = 0
        for i in range(1, m + 1):
            pattern = (1 << fam.m) - point_map[i]
            if pattern >> (fam.m - j) & 1:
                s_mask |= 1 << (i - 1)
        mapping[f"p{j}"] = fr.up_bits(s_mask) if s_mask else 0
    return Valuation(fr, mapping)


# --- decomposition ------------------------------------------------------


def test_levin_excluded_middle():
    dec = levin_decomposition(parse("p | ~p"), 2)
    assert dec.n == 2
    assert [render(b) for b in dec.bodies] == ["~p1", "~~p1"]
    assert dec.countermodels == ({"p1": False}, {"p1": True})
    assert render(dec.image) == "~~p1 | ~~~p1"
    assert render(dec.sigma.mapping["p"]) == "~~p1"
    json.dumps(dec.to_obj())  # must be serializable as-is


def test_levin_image_equivalent_to_negated_bodies():
    from medlog.formula import Neg, big_or, iff

    dec = levin_decomposition(parse("p | ~p"), 2)
    rebuilt = big_or([Neg(b) for b in dec.bodies])
    for n in (1, 2, 3):
        res = valid_on(frame(n), iff(dec.image, rebuilt), "exhaustive")
        assert res.valid, n


def test_levin_double_negation_shift():
    dec = levin_decomposition(parse("~~p -> p"), 2)
    assert dec is not None
    assert dec.n == 2
    # every body has a classical model, rechecked by the constructor
    assert len(dec.countermodels) == len(dec.bodies)


def test_levin_none_for_theorems():
    assert levin_decomposition(parse("p -> p"), 3) is None
    assert levin_decomposition(parse("~~(p | ~p)"), 3) is None
    # valid on these frames despite being intuitionistically unprovable
    wkp = parse("(~p -> ~q | ~r) -> (~p -> ~q) | (~p -> ~r)")
    assert levin_decomposition(wkp, 3) is None


def test_levin_deterministic():
    a = levin_decomposition(parse("(p -> q) | (q -> p)"), 3)
    b = levin_decomposition(parse("(p -> q) | (q -> p)"), 3)
    assert a is not None
    assert a.to_obj() == b.to_obj()


# --- admissibility ------------------------------------------------------


def test_admissibility_disjunction_premise():
    wit = admissibility_witness(parse("p | q"), parse("p"), 2)
    assert wit is not None
    assert wit.k == 1
    assert render(wit.sigma.mapping["p"]) == "~T"
    assert render(wit.sigma.mapping["q"]) == "~~T"
    assert wit.refutation.n == 1
    assert wit.refutation.world == world(1)
    assert [e.n for e in wit.validity_evidence] == [1, 2, 3, 4]
    assert all(e.valid for e in wit.validity_evidence)
    json.dumps(wit.to_obj())


def test_admissibility_double_negation():
    # the classic non-derivable admissible-rule shape: ~~p over p
    wit = admissibility_witness(parse("~~p"), parse("p"), 2)
    assert wit is not None
    assert wit.k == 2
    assert render(wit.sigma.mapping["p"]) == "~~p1 | ~~~p1"
    # sigma premise is provable outright, sigma conclusion refuted
    assert ipc_provable(apply_subst(wit.sigma, parse("~~p")))
    assert wit.refutation.world == frame(2).bottom()


def test_admissibility_none_when_conclusion_follows():
    assert admissibility_witness(parse("p"), parse("p"), 2) is None
    assert admissibility_witness(parse("p & (p -> q)"), parse("q"), 2) is None
    kp_premise = parse("~p -> q | r")
    kp_conclusion = parse("(~p -> q) | (~p -> r)")
    assert admissibility_witness(kp_premise, kp_conclusion, 2) is None


def test_admissibility_rejects_bad_strategy():
    with pytest.raises(ValueError):
        admissibility_witness(parse("p"), parse("q"), 2, strategy="guess")


def test_admissibility_sample_strategy_deterministic():
    a = admissibility_witness(parse("p | q"), parse("q"), 2,
                              strategy="sample", count=50, seed=4)
    b = admissibility_witness(parse("p | q"), parse("q"), 2,
                              strategy="sample", count=50, seed=4)
    assert a is not None and b is not None
    assert a.to_obj() == b.to_obj()


# --- point maps ---------------------------------------------------------


def test_from_max_map_meet_extension():
    pm = PMorphism.from_max_map(2, 3, {1: 2, 2: 3})
    assert pm.apply(world(1)) == world(2)
    assert pm.apply(world(2)) == world(3)
    assert pm.apply(world(1, 2)) == world(2, 3)
    assert check_pmorphism(pm).ok


def test_from_max_map_validates_input():
    with pytest.raises(ValueError):
        PMorphism.from_max_map(2, 2, {1: 1})
    with pytest.raises(ValueError):
        PMorphism.from_max_map(2, 2, {1: 1, 2: 3})


def test_check_pmorphism_flags_non_monotone_map():
    pm = PMorphism(2, 2, (1, 2, 1))  # bottom maps above the image of {2}
    report = check_pmorphism(pm)
    assert not report.ok
    assert ("monotone", world(1, 2), world(2)) in report.violations


def test_check_pmorphism_flags_back_condition():
    pm = PMorphism(2, 2, (3, 3, 3))  # constant onto the target bottom
    report = check_pmorphism(pm)
    assert not report.ok
    kinds = {v[0] for v in report.violations}
    assert kinds == {"back"}


def test_identity_map_passes():
    fr = frame(3)
    pm = PMorphism(3, 3, tuple(fr.worlds()))
    assert check_pmorphism(pm).ok


def test_alpha_pmorphism_constant_valuation():
    fr = frame(2)
    w = valuation(fr, {"p1": [world(1), world(2), world(1, 2)]})
    pm = alpha_pmorphism(2, 2, w)
    assert pm.mapping == (1, 1, 1)


def test_alpha_pmorphism_identity_case():
    w = pullback_valuation(2, 2, {1: 1, 2: 2})
    pm = alpha_pmorphism(2, 2, w)
    assert pm.mapping == (1, 2, 3)


def test_alpha_pmorphism_random_point_maps():
    rng = random.Random(71)
    for _ in range(25):
        m = rng.randint(1, 4)
        n = rng.randint(1, 4)
        point_map = {i: rng.randint(1, n) for i in range(1, m + 1)}
        w = pullback_valuation(m, n, point_map)
        pm = alpha_pmorphism(m, n, w)
        for i in range(1, m + 1):
            assert pm.apply(world(i)) == world(point_map[i])
        assert check_pmorphism(pm).ok


def test_alpha_pmorphism_frame_mismatch():
    w = pullback_valuation(2, 2, {1: 1, 2: 2})
    with pytest.raises(ValueError):
        alpha_pmorphism(3, 2, w)


def test_alpha_transfer_law():
    rng = random.Random(73)
    for _ in range(10):
        m = rng.randint(1, 4)
        n = rng.randint(2, 4)
        point_map = {i: rng.randint(1, n) for i in range(1, m + 1)}
        w = pullback_valuation(m, n, point_map)
        pm = alpha_pmorphism(m, n, w)
        report = check_alpha_transfer(pm, u_valuation(n), w)
        assert report.ok, (m, n, point_map, [c for c in report.cases if not c.ok])
        assert len(report.cases) == frame(n).world_count


def test_transfer_check_on_substitution_images():
    rng = random.Random(79)
    m, n = 3, 2
    point_map = {1: 1, 2: 2, 3: 1}
    w = pullback_valuation(m, n, point_map)
    pm = alpha_pmorphism(m, n, w)
    u = u_valuation(n)
    for val in iter_valuations(frame(n), ["p", "q"]):
        sigma = universal_subst(n, val)
        report = transfer_check(pm, sigma, u, w, count=20, seed=5)
        assert report.ok, val.to_obj()
    del rng


def test_composed_valuation_matches_direct_substitution():
    # evaluating chi over per-atom image truth sets must agree with
    # evaluating the substituted formula outright
    rng = random.Random(83)
    fr = frame(3)
    base_names = ["a", "b"]
    for _ in range(40):
        val = sample_valuation(fr, base_names, rng)
        sigma = Substitution({
            "p": random_formula(rng, base_names, 3),
            "q": random_formula(rng, base_names, 3),
        })
        composed = Valuation(fr, {
            name: truth_set(fr, val, sigma.lookup(name)) for name in ("p", "q")
        })
        chi = random_formula(rng, ["p", "q"], 4)
        assert truth_set(fr, composed, chi) == truth_set(
            fr, val, apply_subst(sigma, chi))


def test_transfer_check_explicit_formulas():
    w = pullback_valuation(2, 2, {1: 2, 2: 2})
    pm = alpha_pmorphism(2, 2, w)
    u = u_valuation(2)
    v = valuation(frame(2), {"p": [world(1)]})
    sigma = universal_subst(2, v)
    report = transfer_check(pm, sigma, u, w,
                            test_formulas=[parse("p"), parse("~p"), parse("p -> p")])
    assert report.ok
    assert [render(c.formula) for c in report.cases] == ["p", "~p", "p -> p"]
