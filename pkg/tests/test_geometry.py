import json
from fractions import Fraction

import pytest

from roomrot.errors import MalformedFile, PerturbationBoundViolated, TieDetected
from roomrot.geometry import (
    AttributeInstance,
    Circ,
    EuclideanInstance,
    Pair2,
    Person,
    PerturbationPlan,
    Val,
    atom_scale,
    attribute_prefs,
    dot,
    euclidean_prefs,
    instance_from_json,
    instance_to_json,
    pair2,
    perturb_for_strictness,
    rat_atom,
    squared_distance,
    val,
)
from roomrot.reductions import InputGraph, build_4attr, cycle_structure, double_cover

F = Fraction


def fig1_cs():
    g = InputGraph.from_edges(4, [(0, 1), (1, 2), (1, 3), (2, 3)])
    return cycle_structure(double_cover(g))


def test_axis_ordering():
    # preference vector is zero except one coordinate: order by that axis
    people = [
        Person("w", (val(0), val(1)), (val(0), val(1))),
        Person("x", (val(3), val(0)), (val(1), val(0))),
        Person("y", (val(2), val(5)), (val(0), val(2))),
        Person("z", (val(1), val(9)), (val(0), val(3))),
    ]
    inst = attribute_prefs(AttributeInstance(people))
    assert inst.prefs[1] == (2, 3, 0)  # x ranks by first coordinate: y, z, w


def test_dot_products():
    u = (Circ(F(1, 8)), val(2))
    v = (Circ(F(3, 8)), val(3))
    s = dot(u, v)
    # cos(2*pi/4) = 0, so only the 1-D product remains
    assert s.atoms == {(): 6}
    s = dot((Circ(F(1, 12)), val(0)), (pair2(1, 1), val(5)))
    assert s.sign() > 0


def test_euclidean_line_ordering():
    people = [
        Person("a", (val(1), val(0)), (val(0), val(0))),
        Person("b", (val(2), val(0)), (val(10), val(0))),
        Person("c", (val(3), val(0)), (val(10), val(1))),
        Person("d", (val(4), val(0)), (val(10), val(2))),
    ]
    # strictly increasing distance from the preference point at the origin
    inst = euclidean_prefs(EuclideanInstance(people))
    assert inst.prefs[0] == (1, 2, 3)


def test_tie_detection_attribute():
    people = [
        Person("p", (val(1), val(0)), (val(1), val(0))),
        Person("q", (val(2), val(2)), (val(1), val(0))),
        Person("r", (val(2), val(7)), (val(1), val(0))),
    ]
    with pytest.raises(TieDetected):
        attribute_prefs(AttributeInstance(people))


def test_tie_detection_euclidean():
    people = [
        Person("p", (val(0), val(0)), (val(0), val(0))),
        Person("q", (val(1), val(0)), (val(9), val(9))),
        Person("r", (val(-1), val(0)), (val(9), val(9))),
    ]
    with pytest.raises(TieDetected):
        euclidean_prefs(EuclideanInstance(people))


def test_unperturbed_reduction_instance_has_q_ties():
    ai = build_4attr(fig1_cs(), perturb=False)
    with pytest.raises(TieDetected):
        attribute_prefs(ai)


def test_perturbation_restores_strictness_and_keeps_p_lists():
    cs = fig1_cs()
    raw = build_4attr(cs, perturb=False)
    m2 = 2 * cs.m
    fixed = perturb_for_strictness(raw, PerturbationPlan(tuple(range(m2, 2 * m2))))
    inst = attribute_prefs(fixed)
    assert inst.num_people == 4 * cs.m
    # P people never read the perturbed coordinates: derive their lists from
    # the raw instance by restricting to the slot the preference actually uses
    raw_people = list(raw.people)
    for i in range(m2):
        d = {
            j: dot(raw_people[i].preference, raw_people[j].position)
            for j in range(len(raw_people))
            if j != i
        }
        order = sorted(d, key=lambda j: (-d[j].evaluate(120), j))
        assert list(inst.prefs[i]) == order


def test_perturbation_no_targets_is_identity():
    ai = build_4attr(fig1_cs())
    assert perturb_for_strictness(ai, PerturbationPlan(())) is ai


def test_perturbation_scale_insensitive():
    """Any valid delta0 gives the same lists; try the auto bound and /8."""
    from roomrot.geometry import perturbation_bound

    cs = fig1_cs()
    raw = build_4attr(cs, perturb=False)
    m2 = 2 * cs.m
    targets = tuple(range(m2, 2 * m2))
    d0 = perturbation_bound(raw, targets)
    a = attribute_prefs(perturb_for_strictness(raw, PerturbationPlan(targets, d0)))
    b = attribute_prefs(perturb_for_strictness(raw, PerturbationPlan(targets, d0 / 8)))
    assert a == b


def test_perturbation_bound_requires_circles():
    people = [
        Person("p", (val(1), val(0)), (val(1), val(0))),
        Person("q", (val(2), val(2)), (val(1), val(0))),
    ]
    with pytest.raises(PerturbationBoundViolated):
        from roomrot.geometry import perturbation_bound

        perturbation_bound(AttributeInstance(people), ())


def test_high_precision_float_agreement():
    """512-bit floating sort agrees with the exact comparator on a real build."""
    cs = fig1_cs()
    ai = build_4attr(cs)
    inst = attribute_prefs(ai)
    n = len(ai.people)
    for i in range(n):
        dots = {
            j: dot(ai.people[i].preference, ai.people[j].position).evaluate(512)
            for j in range(n)
            if j != i
        }
        order = sorted(dots, key=lambda j: -dots[j])
        assert list(inst.prefs[i]) == order


def test_preference_scaling_invariance():
    cs = fig1_cs()
    ai = build_4attr(cs)
    inst = attribute_prefs(ai)
    # scale one person's preference vector by a positive rational
    people = list(ai.people)
    p = people[3]
    scaled = tuple(
        Circ(c.turns, atom_scale(c.radius, F(7, 3))) if isinstance(c, Circ)
        else Pair2(atom_scale(c.x, F(7, 3)), atom_scale(c.y, F(7, 3)))
        for c in p.preference
    )
    people[3] = Person(p.name, p.position, scaled)
    inst2 = attribute_prefs(AttributeInstance(people))
    assert inst2 == inst


def test_euclidean_translation_invariance():
    from roomrot.reductions import BisCycles, build_bis_2euclid

    bc = BisCycles(2, (1, 0), (0, 1))
    ei = build_bis_2euclid(bc)
    inst = euclidean_prefs(ei)
    dx, dy = F(13, 7), F(-5, 3)
    people = [
        Person(
            p.name,
            (Val(rat_atom(p.position[0].a[0] + dx)), Val(rat_atom(p.position[1].a[0] + dy))),
            (Val(rat_atom(p.preference[0].a[0] + dx)), Val(rat_atom(p.preference[1].a[0] + dy))),
        )
        for p in ei.people
    ]
    assert euclidean_prefs(EuclideanInstance(people)) == inst


def test_fourattr_comparisons_stay_rational_or_circular():
    certs = set()
    attribute_prefs(build_4attr(fig1_cs()), cert_sink=certs)
    assert "INTERVAL" not in certs
    assert certs <= {"RATIONAL", "SIGNS", "MONOTONE", "PRODUCT", "DOMINANCE", "ZERO"}


def test_json_roundtrip_attribute():
    ai = build_4attr(fig1_cs())
    blob = json.dumps(instance_to_json(ai))
    back = instance_from_json(blob)
    assert back.model == "attribute" and back.k == 4
    assert attribute_prefs(back) == attribute_prefs(ai)


def test_json_roundtrip_euclidean():
    from roomrot.reductions import build_3euclid

    ei = build_3euclid(fig1_cs())
    back = instance_from_json(json.dumps(instance_to_json(ei)))
    assert back.model == "euclidean" and back.k == 3
    assert euclidean_prefs(back) == euclidean_prefs(ei)


def test_json_rejects_floats_without_flag():
    blob = {
        "model": "euclidean",
        "k": 2,
        "people": [
            {"name": "a", "position": [0.5, 1], "preference": [0, 0]},
            {"name": "b", "position": [1, 1], "preference": [0, 0]},
        ],
    }
    with pytest.raises(MalformedFile):
        instance_from_json(json.dumps(blob))
    gi = instance_from_json(json.dumps(blob), allow_float=True)
    assert gi.people[0].position[0].a[0] == F(1, 2)


def test_squared_distance_rational():
    d = squared_distance((val(1), val(2)), (val(4), val(6)))
    assert d.coeffs[0].atoms == {(): 25}
