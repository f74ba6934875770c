"""Acceptance suite: one test per criterion, each printing a PASS line with
its elapsed time against the stated budget.  Run with `pytest -s` to see the
lines as they complete."""

import itertools
import time
from contextlib import contextmanager

import networkx as nx
import pytest
from networkx.generators.atlas import graph_atlas_g

from conftest import random_instance, rng_for
from roomrot.core import Matching, is_stable
from roomrot.counting import (
    _perfect_matchings,
    count_brute_force,
    count_via_downsets,
    count_via_maximal_is,
    enumerate_stable_matchings,
)
from roomrot.geometry import attribute_prefs, dot, euclidean_prefs, squared_distance, val
from roomrot.irving import phase1
from roomrot.oneattr import OneAttrInstance, expand, solve_1attr
from roomrot.reductions import (
    BisCycles,
    InputGraph,
    bis_index,
    build_3euclid,
    build_4attr,
    build_bis_2euclid,
    build_bis_3attr,
    count_independent_sets,
    cycle_structure,
    double_cover,
    expected_rotations,
    verify_reduction,
)
from roomrot.rotations import discover_rotations, rotation_graph
from test_irving import PHASE1_LISTS, R1, R2, R3, R4, lists_1based
from test_rotations import R2D, R3D, R4D, content_index
from test_counting import PUBLISHED_ASSIGNMENTS
from test_reductions import APPENDIX2_PREFIXES, APPENDIX2_SHORT_LISTS


@contextmanager
def budget(name, seconds):
    t0 = time.perf_counter()
    yield
    elapsed = time.perf_counter() - t0
    line = f"ACCEPTANCE {name}: PASS ({elapsed:.2f}s < {seconds}s)"
    print(line)
    assert elapsed < seconds, f"{name} exceeded its {seconds}s budget ({elapsed:.2f}s)"


def test_criterion_1_appendix1_end_to_end(appendix1):
    with budget("1 appendix-1 golden", 1.0):
        table = phase1(appendix1)
        assert lists_1based(table) == PHASE1_LISTS

        poset = discover_rotations(appendix1)
        assert len(poset.rotations) == 7
        idx = content_index(poset)
        assert poset.singletons == {idx[R1.triples]}
        assert poset.dual_of[idx[R2.triples]] == idx[R2D.triples]
        assert poset.dual_of[idx[R3.triples]] == idx[R3D.triples]
        assert poset.dual_of[idx[R4.triples]] == idx[R4D.triples]

        hasse = {(a, b) for a, b in poset.hasse_edges()}
        assert hasse == {
            (idx[R1.triples], idx[R2.triples]),
            (idx[R1.triples], idx[R3.triples]),
            (idx[R1.triples], idx[R4.triples]),
            (idx[R2.triples], idx[R4D.triples]),
            (idx[R3.triples], idx[R4D.triples]),
            (idx[R4.triples], idx[R2D.triples]),
            (idx[R4.triples], idx[R3D.triples]),
        }

        g = rotation_graph(poset)
        assert g.edges == {
            frozenset((idx[R2.triples], idx[R2D.triples])),
            frozenset((idx[R3.triples], idx[R3D.triples])),
            frozenset((idx[R4.triples], idx[R4D.triples])),
            frozenset((idx[R4D.triples], idx[R2D.triples])),
            frozenset((idx[R4D.triples], idx[R3D.triples])),
        }

        assert count_via_downsets(poset).value == 5
        assert count_via_maximal_is(g, poset).value == 5
        assert count_brute_force(appendix1).value == 5
        ms = enumerate_stable_matchings(appendix1, poset)
        assert {tuple(m.pairs()) for m in ms} == PUBLISHED_ASSIGNMENTS


def test_criterion_2_unsolvable_example(knuth4):
    with budget("2 unsolvable golden", 0.01):
        assert phase1(knuth4) is None
        assert count_brute_force(knuth4).value == 0


def test_criterion_3_figure1_reduction():
    with budget("3 figure-1 reduction", 30.0):
        g = InputGraph.from_edges(4, [(0, 1), (1, 2), (1, 3), (2, 3)])
        cs = cycle_structure(double_cover(g))
        ai = build_4attr(cs)
        inst = attribute_prefs(ai)
        assert inst.num_people == 32
        names = [p.name for p in ai.people]

        for name, expected in APPENDIX2_PREFIXES.items():
            idx = names.index(name)
            want = expected.split()
            assert [names[j] for j in inst.prefs[idx][: len(want)]] == want, name

        table = phase1(inst)
        for name, expected in APPENDIX2_SHORT_LISTS.items():
            idx = names.index(name)
            assert [names[j] for j in table.lists[idx]] == expected.split(), name

        poset = discover_rotations(inst)
        base, dual = expected_rotations(cs)
        assert {r.triples for r in poset.rotations} == {
            r.triples for r in base
        } | {r.triples for r in dual}
        assert len(poset.rotations) == 8 and not poset.singletons

        assert count_via_downsets(poset).value == 7
        assert count_independent_sets(g) == 7
        rep = verify_reduction(g, route="attr4")
        assert rep.stable_count == 7


def test_criterion_4_oracle_sweep():
    with budget("4 oracle sweep", 120.0):
        rng = rng_for(20260810)
        done = 0
        while done < 50:
            inst = random_instance(rng.choice([6, 8, 10, 12]), rng)
            bf = count_brute_force(inst).value
            poset = discover_rotations(inst)
            if poset is None:
                assert bf == 0
                continue
            d = count_via_downsets(poset).value
            m = count_via_maximal_is(rotation_graph(poset), poset).value
            assert d == m == bf
            ms = enumerate_stable_matchings(inst, poset)
            assert len(ms) == d == len(set(ms))
            assert all(is_stable(inst, x) for x in ms)
            done += 1


def test_criterion_5_reduction_law_all_small_graphs():
    """Both routes verify on every connected graph on <= 5 vertices, and the
    routes agree on everything the two geometries share: the P-people's full
    lists, the Phase-1 table, the rotation inventory, and the stable
    matchings themselves.  (A Q-person's list tail differs between a
    dot-product and a distance geometry by necessity; see the README note.)
    """
    with budget("5 reduction law", 600.0):
        graphs = [
            G
            for G in graph_atlas_g()
            if 2 <= G.number_of_nodes() <= 5
            and G.number_of_edges() > 0
            and nx.is_connected(G)
        ]
        assert len(graphs) == 30
        for G in graphs:
            nodes = sorted(G.nodes())
            remap = {v: i for i, v in enumerate(nodes)}
            g = InputGraph.from_edges(
                len(nodes), [(remap[u], remap[v]) for u, v in G.edges()]
            )
            rep_a = verify_reduction(g, route="attr4")
            rep_e = verify_reduction(g, route="euclid3")
            assert rep_a.stable_count == rep_e.stable_count == count_independent_sets(g)

            cs = cycle_structure(double_cover(g))
            ia = attribute_prefs(build_4attr(cs))
            ie = euclidean_prefs(build_3euclid(cs))
            m2 = 2 * cs.m
            for i in range(m2):
                assert ia.prefs[i] == ie.prefs[i]
            assert phase1(ia).lists == phase1(ie).lists
            pa, pe = discover_rotations(ia), discover_rotations(ie)
            assert {r.triples for r in pa.rotations} == {r.triples for r in pe.rotations}
            assert {tuple(m.pairs()) for m in enumerate_stable_matchings(ia, pa)} == {
                tuple(m.pairs()) for m in enumerate_stable_matchings(ie, pe)
            }


def test_criterion_6_one_attribute_theorem():
    with budget("6 one-attribute theorem", 300.0):
        for n in (4, 6, 8, 10):
            for types in itertools.product("AB", repeat=n):
                oa = OneAttrInstance("".join(types))
                res = solve_1attr(oa)
                assert res.count in (1, 2)
                inst = expand(oa)
                expected = set()
                for partner in _perfect_matchings(n):
                    m = Matching(partner)
                    if is_stable(inst, m):
                        expected.add(m.partner)
                assert {m.partner for m in res.assignments} == expected


def test_criterion_7_bis_property_suite():
    with budget("7 bis property suite", 60.0):
        samples = [
            BisCycles(1, (0,), (0,)),
            BisCycles(2, (1, 0), (0, 1)),
            BisCycles(2, (0, 1), (1, 0)),
            BisCycles(3, (1, 2, 0), (0, 2, 1)),
            BisCycles(3, (2, 0, 1), (1, 0, 2)),
            BisCycles(4, (2, 3, 0, 1), (1, 0, 3, 2)),
            BisCycles(4, (1, 2, 3, 0), (3, 2, 1, 0)),
        ]
        origin = (val(0), val(0))
        for bc in samples:
            n = bc.n
            ai = build_bis_3attr(bc)
            men = range(3 * n)
            women = range(3 * n, 6 * n)
            for i in men:
                for j in men:
                    if i != j:
                        assert dot(ai.people[i].preference, ai.people[j].position).sign() < 0
                for j in women:
                    assert dot(ai.people[i].preference, ai.people[j].position).sign() > 0

            ei = build_bis_2euclid(bc)
            inst = euclidean_prefs(ei)

            def d2(pref, pos):
                return squared_distance(pref, pos).coeffs[0].atoms.get((), 0)

            # Observation 3 for both sides
            for side in (men, women):
                for i in side:
                    pref = ei.people[i].preference
                    d0 = d2(pref, origin)
                    for j in side:
                        if j != i:
                            assert d0 < d2(pref, ei.people[j].position)

            # Observation 2 via the designed initial lists, one pair per person
            for i, cyc in enumerate(bc.sigma_cycles, start=1):
                p = len(cyc)
                for m, e in enumerate(cyc):
                    pref = ei.people[bis_index(n, "A", e + 1)].preference
                    pos = ei.people[bis_index(n, "b", bc.rho[e] + 1)].position
                    assert d2(pref, pos) < d2(pref, origin)

            # (12)/(13) prefixes up to the unknown tau ordering
            def pl(letter, i):
                return list(inst.prefs[bis_index(n, letter, i)])

            for i, cyc in enumerate(bc.sigma_cycles, start=1):
                for m, e in enumerate(cyc):
                    assert pl("A", e + 1)[:2] == [
                        bis_index(n, "a", e + 1),
                        bis_index(n, "b", bc.rho[e] + 1),
                    ]
                    assert set(pl("B", e + 1)[:n]) == {
                        bis_index(n, "b", x) for x in range(1, n + 1)
                    }
            for cyc in bc.rho_cycles:
                for f in cyc:
                    assert pl("c", f + 1)[:2] == [
                        bis_index(n, "B", f + 1),
                        bis_index(n, "C", f + 1),
                    ]


def test_criterion_8_complexity_statements_not_testable():
    """The headline interreducibility results are complexity statements with
    no finite experiment; criteria 3, 5 and 7 exercise every formula those
    proofs rely on, which is the substitute this suite implements."""
    print("ACCEPTANCE 8 complexity statements: COVERED BY 3/5/7 (no finite experiment)")
