import pytest

from conftest import DATA, random_instance, rng_for
from roomrot.core import (
    Matching,
    RoommateInstance,
    blocking_pair,
    is_stable,
    parse_instance,
    parse_matching,
    serialize_instance,
    serialize_matching,
)
from roomrot.errors import InvalidMatching, InvalidPreferenceList, MalformedFile


def test_parse_four_person_example():
    text = "4\n2 3 4\n3 1 4\n1 2 4\n1 2 3\n"
    inst = parse_instance(text)
    assert inst.num_people == 4
    assert inst.prefs[0] == (1, 2, 3)
    assert inst.prefs[3] == (0, 1, 2)


def test_parse_minimal_instance():
    inst = parse_instance("2\n2\n1\n")
    assert inst.num_people == 2
    assert inst.prefs == ((1,), (0,))


def test_parse_rejects_duplicate_entry():
    with pytest.raises(InvalidPreferenceList):
        parse_instance("4\n2 2 3\n3 1 4\n1 2 4\n1 2 3\n")


def test_parse_rejects_odd_and_malformed():
    with pytest.raises(MalformedFile):
        parse_instance("3\n2 3\n1 3\n1 2\n")
    with pytest.raises(MalformedFile):
        parse_instance("4\n2 3 4\n3 1 4\n")
    with pytest.raises(MalformedFile):
        parse_instance("x\n")


def test_comments_are_ignored(appendix1):
    assert appendix1.num_people == 12  # data file carries a # header line


def test_stable_matching_appendix1(appendix1):
    m = Matching.from_pairs([(0, 5), (1, 8), (2, 7), (3, 9), (4, 6), (10, 11)], 12)
    assert is_stable(appendix1, m)


def test_minimal_instance_is_stable():
    inst = parse_instance("2\n2\n1\n")
    assert is_stable(inst, Matching((1, 0)))


def test_unstable_witness_matches_naive_scan(appendix1):
    m = Matching.from_pairs([(0, 1), (2, 3), (4, 5), (6, 7), (8, 9), (10, 11)], 12)
    # independent oracle: scan all C(12,2) pairs directly
    expected = None
    for a in range(12):
        for b in range(a + 1, 12):
            if appendix1.prefers(a, b, m.partner[a]) and appendix1.prefers(b, a, m.partner[b]):
                expected = (a, b)
                break
        if expected:
            break
    got = blocking_pair(appendix1, m)
    assert got == expected
    assert got is not None


def test_matching_validation():
    with pytest.raises(InvalidMatching):
        Matching((1, 0, 3, 3))
    with pytest.raises(InvalidMatching):
        Matching.from_pairs([(0, 1), (0, 2)], 4)
    with pytest.raises(InvalidMatching):
        Matching.from_pairs([(0, 1)], 4)


def test_roundtrip_appendix1(appendix1):
    assert parse_instance(serialize_instance(appendix1)) == appendix1
    raw = (DATA / "appendix1.sr").read_text()
    body = "\n".join(ln for ln in raw.splitlines() if ln and not ln.startswith("#"))
    assert serialize_instance(appendix1) == body + "\n"


def test_serialize_minimal():
    inst = parse_instance("2\n2\n1\n")
    assert serialize_instance(inst) == "2\n2\n1\n"


def test_roundtrip_random_instances():
    rng = rng_for(1)
    for _ in range(100):
        n = rng.choice([2, 4, 6, 8, 10])
        inst = random_instance(n, rng)
        assert parse_instance(serialize_instance(inst)) == inst


def test_matching_roundtrip():
    m = Matching.from_pairs([(0, 5), (1, 8), (2, 7), (3, 9), (4, 6), (10, 11)], 12)
    assert parse_matching(serialize_matching(m), 12) == m


def test_stability_invariant_under_relabeling():
    rng = rng_for(2)
    for _ in range(20):
        n = rng.choice([4, 6, 8])
        inst = random_instance(n, rng)
        partner = list(range(n))
        rng.shuffle(partner)
        # make a perfect matching by pairing the shuffle in order
        m = Matching.from_pairs(
            [(partner[i], partner[i + 1]) for i in range(0, n, 2)], n
        )
        pi = list(range(n))
        rng.shuffle(pi)
        relabeled = RoommateInstance(
            [
                [pi[q] for q in inst.prefs[p]]
                for p in sorted(range(n), key=lambda x: pi[x])
            ]
        )
        mapped = [0] * n
        for a, b in m.pairs():
            mapped[pi[a]] = pi[b]
            mapped[pi[b]] = pi[a]
        assert is_stable(inst, m) == is_stable(relabeled, Matching(mapped))
