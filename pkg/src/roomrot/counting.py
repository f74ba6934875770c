"""Exact counting and enumeration of stable assignments by independent routes.

Counts are plain Python ints (arbitrary precision).  The three methods are
mutually checking: downsets of Pi*, one-per-dual-pair independent sets in
G(I), and brute-force enumeration of all perfect matchings.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import is_stable
from .errors import InstanceTooLarge, InternalInconsistency
from .irving import eliminate
BRUTE_FORCE_LIMIT = 14


@dataclass(frozen=True)
class StableCount:
    value: int
    method: str


def _pair_selections(poset, consistent):
    """Count choices of one rotation per dual pair accepted by `consistent`.

    `consistent(chosen)` sees the partial selection as a dict pair_index ->
    member and is called after each extension; backtracking prunes on False.
    """
    pairs = poset.dual_pairs()

    def rec(i, chosen):
        if i == len(pairs):
            return 1
        total = 0
        for member in pairs[i]:
            chosen.append(member)
            if consistent(chosen):
                total += rec(i + 1, chosen)
            chosen.pop()
        return total

    return rec(0, [])


def count_via_downsets(poset):
    """Downsets of Pi* containing every singleton and one of each dual pair.

    A selection of one member per pair is valid iff the downward closure of
    the chosen members contains no rotation whose dual was also chosen; the
    singletons are always included and never constrain the pairs (only a
    singleton can precede a singleton).
    """
    def consistent(chosen):
        closure = poset.down_closure(chosen)
        for i in chosen:
            if closure >> poset.dual_of[i] & 1:
                return False
        return True

    return StableCount(_pair_selections(poset, consistent), "downsets")


def count_via_maximal_is(graph, poset):
    """Selections of one rotation per dual pair independent in G(I).

    One-per-pair independent selections are automatically maximal (every
    excluded vertex is adjacent to its chosen dual), and maximal independent
    sets of G(I) biject with stable matchings.
    """
    def consistent(chosen):
        new = chosen[-1]
        return all(not graph.has_edge(old, new) for old in chosen[:-1])

    return StableCount(_pair_selections(poset, consistent), "maximal-is")


def _perfect_matchings(n):
    """Yield all perfect matchings of range(n) as partner tuples."""
    partner = [-1] * n

    def rec(done):
        a = partner.index(-1, done)
        for b in range(a + 1, n):
            if partner[b] == -1:
                partner[a], partner[b] = b, a
                if all(x != -1 for x in partner):
                    yield tuple(partner)
                else:
                    yield from rec(a + 1)
                partner[a] = partner[b] = -1

    yield from rec(0)


def count_brute_force(inst):
    """Enumerate all (2n-1)!! perfect matchings and count the stable ones."""
    n = inst.num_people
    if n > BRUTE_FORCE_LIMIT:
        raise InstanceTooLarge(f"brute force is guarded at {BRUTE_FORCE_LIMIT} people")
    rank = inst.rank
    count = 0
    for partner in _perfect_matchings(n):
        stable = True
        for a in range(n):
            ra = rank[a]
            cutoff = ra[partner[a]]
            for b in range(a + 1, n):
                if ra[b] < cutoff and rank[b][a] < rank[b][partner[b]]:
                    stable = False
                    break
            if not stable:
                break
        if stable:
            count += 1
    return StableCount(count, "brute-force")


def _valid_downsets(poset):
    """Yield every valid downset as a rotation-index bitmask."""
    pairs = poset.dual_pairs()
    base = 0
    for i in poset.singletons:
        base |= poset.precedes_mask[i]

    def rec(i, chosen):
        if i == len(pairs):
            yield base | poset.down_closure(chosen)
            return
        for member in pairs[i]:
            chosen.append(member)
            closure = poset.down_closure(chosen)
            if not any(closure >> poset.dual_of[c] & 1 for c in chosen):
                yield from rec(i + 1, chosen)
            chosen.pop()

    yield from rec(0, [])


def enumerate_stable_matchings(inst, poset):
    """All stable matchings, one per valid downset, each verified stable."""
    results = []
    seen = set()
    n_rot = len(poset.rotations)
    for mask in _valid_downsets(poset):
        members = [i for i in range(n_rot) if mask >> i & 1]
        # eliminate along a linear extension of Pi* restricted to the downset
        order = sorted(members, key=lambda i: (bin(poset.precedes_mask[i]).count("1"), i))
        table = poset.phase1_table
        for i in order:
            table = eliminate(table, poset.rotations[i])
            if table is None:
                raise InternalInconsistency("downset elimination emptied a list")
        if not table.is_complete():
            raise InternalInconsistency("downset elimination left a non-singleton list")
        m = table.matching()
        if not is_stable(inst, m):
            raise InternalInconsistency("downset produced an unstable matching")
        if m.partner in seen:
            raise InternalInconsistency("two downsets produced the same matching")
        seen.add(m.partner)
        results.append(m)
    return results


def count_result_json(count, poset=None):
    """The CLI's stable JSON schema for a count."""
    obj = {"count": str(count.value), "method": count.method}
    if poset is not None:
        obj["rotations"] = len(poset.rotations)
        obj["dual_pairs"] = len(poset.dual_pairs())
        obj["singletons"] = len(poset.singletons)
    return obj
