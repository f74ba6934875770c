"""Irving's two-phase algorithm: proposal phase, short-list tables, rotations.

Tables are value-semantic snapshots; `phase1` and `eliminate` return new
tables and never mutate their inputs.  A result of None from `phase1`,
`eliminate` or `find_stable_matching` means the domain-negative outcome
(empty list arose / no stable matching), not an error.
"""

from __future__ import annotations

from .core import Matching
from .errors import InternalInconsistency, RotationNotExposed


class Rotation:
    """An exposed rotation, stored as cyclic (e_i, h_i, s_i) triples.

    Canonical form: the cyclic sequence is rotated so the smallest e_i
    comes first, which makes set-comparison across elimination orders work.
    """

    __slots__ = ("triples",)

    def __init__(self, triples):
        triples = list(triples)
        k = len(triples)
        if k < 2:
            raise InternalInconsistency("rotation of length < 2")
        es = [e for e, _, _ in triples]
        if len(set(es)) != k:
            raise InternalInconsistency("rotation with repeated e_i")
        for i, (_, _, s) in enumerate(triples):
            if s != triples[(i + 1) % k][1]:
                raise InternalInconsistency("rotation violates s_i = h_{i+1}")
        start = es.index(min(es))
        self.triples = tuple(triples[start:] + triples[:start])

    @property
    def people(self):
        return tuple(e for e, _, _ in self.triples)

    def dual_triples(self):
        """The triple form (S, E, E^r) of the would-be dual rotation."""
        t = self.triples
        k = len(t)
        return tuple((t[i][2], t[i][0], t[(i + 1) % k][0]) for i in range(k))

    def __eq__(self, other):
        return isinstance(other, Rotation) and self.triples == other.triples

    def __lt__(self, other):
        return self.triples < other.triples

    def __hash__(self):
        return hash(self.triples)

    def __repr__(self):
        body = "; ".join(f"{e + 1}|{h + 1},{s + 1}" for e, h, s in self.triples)
        return f"Rotation({body})"


class Table:
    """Short lists for every person, symmetric per Property 1."""

    __slots__ = ("inst", "lists")

    def __init__(self, inst, lists):
        self.inst = inst
        self.lists = tuple(tuple(row) for row in lists)

    def fingerprint(self):
        return self.lists

    def is_complete(self):
        return all(len(row) == 1 for row in self.lists)

    def has_empty(self):
        return any(not row for row in self.lists)

    def matching(self):
        if not self.is_complete():
            raise InternalInconsistency("table is not all-singleton")
        return Matching([row[0] for row in self.lists])

    def check_symmetry(self):
        """Property 1: A on B's list iff B on A's list (debug/test helper)."""
        members = [set(row) for row in self.lists]
        for a, row in enumerate(self.lists):
            for b in row:
                if a not in members[b]:
                    raise InternalInconsistency(f"asymmetric table at ({a + 1},{b + 1})")
        return True

    def total_length(self):
        return sum(len(row) for row in self.lists)

    def __eq__(self, other):
        return isinstance(other, Table) and self.inst == other.inst and self.lists == other.lists

    def __hash__(self):
        return hash(self.lists)


def phase1(inst, rng=None):
    """Run the proposal phase.  Returns the Phase-1 Table, or None if some
    list empties (no stable matching).

    The outcome is order-independent; the default picks the lowest-index
    free person, `rng` (random.Random) switches to a random free person so
    tests can exercise the invariance.
    """
    n = inst.num_people
    lists = [list(row) for row in inst.prefs]
    members = [set(row) for row in inst.prefs]

    def semi_engaged(e):
        head = lists[e][0]
        return lists[head][-1] == e

    while True:
        free = [e for e in range(n) if lists[e] and not semi_engaged(e)]
        if any(not lists[e] for e in range(n)):
            return None
        if not free:
            break
        e = free[rng.randrange(len(free))] if rng is not None else free[0]
        h = lists[e][0]
        # e proposes to h: everyone h likes less than e is dropped, symmetrically.
        cut = lists[h].index(e)
        dropped = lists[h][cut + 1:]
        del lists[h][cut + 1:]
        for p in dropped:
            members[h].discard(p)
            lists[p].remove(h)
            members[p].discard(h)
    return Table(inst, lists)


def exposed_rotations(table):
    """All rotations exposed in the table, canonical, as a sorted list.

    Requires a table in which everyone is semi-engaged (post Phase 1); the
    head map is then a bijection, so the second entry of e determines the
    next person in the cycle: next(e) = bottom of second(e)'s list.
    """
    lists = table.lists
    n = len(lists)
    state = [0] * n  # 0 unvisited, 1 on current walk, 2 settled
    found = {}
    for start in range(n):
        if state[start] != 0 or len(lists[start]) < 2:
            continue
        walk = []
        pos = {}
        e = start
        while True:
            if len(lists[e]) < 2 or state[e] == 2:
                break
            if state[e] == 1:
                cycle = walk[pos[e]:]
                rot = Rotation([(x, lists[x][0], lists[x][1]) for x in cycle])
                found[rot.triples] = rot
                break
            state[e] = 1
            pos[e] = len(walk)
            walk.append(e)
            s = lists[e][1]
            e = lists[s][-1]
        for x in walk:
            state[x] = 2
    return sorted(found.values())


def eliminate_with_removals(table, rot):
    """Eliminate an exposed rotation.

    Returns (new_table_or_None, truncations) where truncations lists the
    pairs (s_i, x) removed by moving the bottom of s_i's list up to e_i (the
    symmetric removal of s_i from x's list is implied); None means an empty
    list arose.  Raises RotationNotExposed if the precondition fails.
    """
    lists = [list(row) for row in table.lists]
    for e, h, s in rot.triples:
        row = lists[e]
        if len(row) < 2 or row[0] != h or row[1] != s:
            raise RotationNotExposed(f"{rot!r} is not exposed")
    drops = []  # (s_i, p) with p below e_i on s_i's list
    for e, _, s in rot.triples:
        row = lists[s]
        cut = row.index(e)
        drops.extend((s, p) for p in row[cut + 1:])
    removed = []
    for s, p in drops:
        if p in lists[s]:
            lists[s].remove(p)
            lists[p].remove(s)
            removed.append((s, p))
    new = Table(table.inst, lists)
    if new.has_empty():
        return None, removed
    return new, removed


def eliminate(table, rot):
    """Spec surface: new Table after eliminating `rot`, or None on empty list."""
    new, _ = eliminate_with_removals(table, rot)
    return new


def find_stable_matching(inst):
    """Phase 1 + Phase 2 with deterministic choices.

    Returns a stable Matching or None.  Phase 2 always eliminates the
    canonically smallest exposed rotation.
    """
    table = phase1(inst)
    if table is None:
        return None
    while not table.is_complete():
        rots = exposed_rotations(table)
        if not rots:
            raise InternalInconsistency("non-singleton table with no exposed rotation")
        table = eliminate(table, rots[0])
        if table is None:
            return None
    return table.matching()
