"""Instance data model, validation, stability test and (de)serialization.

People are 0-indexed in memory and 1-indexed in files.  A roommate instance
on 2n people stores, for each person, a strict ranking of the other 2n-1.
"""

from __future__ import annotations

from .errors import InvalidMatching, InvalidPreferenceList, MalformedFile


class RoommateInstance:
    """2n people, each with a strict total preference order over the others.

    Immutable after construction; `rank[p][q]` gives q's position in p's
    original list (lower = more preferred).
    """

    __slots__ = ("prefs", "rank")

    def __init__(self, prefs):
        prefs = tuple(tuple(row) for row in prefs)
        n = len(prefs)
        if n < 2 or n % 2 != 0:
            raise InvalidPreferenceList(f"number of people must be even and >= 2, got {n}")
        others = frozenset(range(n))
        for p, row in enumerate(prefs):
            if len(row) != n - 1 or set(row) != others - {p}:
                raise InvalidPreferenceList(
                    f"person {p + 1}: list is not a permutation of the other {n - 1} people"
                )
        self.prefs = prefs
        rank = []
        for p, row in enumerate(prefs):
            r = [0] * n
            for i, q in enumerate(row):
                r[q] = i
            r[p] = -1
            rank.append(tuple(r))
        self.rank = tuple(rank)

    @property
    def num_people(self):
        return len(self.prefs)

    def prefers(self, p, a, b):
        """True iff p ranks a strictly above b."""
        return self.rank[p][a] < self.rank[p][b]

    def __eq__(self, other):
        return isinstance(other, RoommateInstance) and self.prefs == other.prefs

    def __hash__(self):
        return hash(self.prefs)

    def __repr__(self):
        return f"RoommateInstance({self.num_people} people)"


class Matching:
    """A perfect matching: fixed-point-free involution on all people."""

    __slots__ = ("partner",)

    def __init__(self, partner):
        partner = tuple(partner)
        n = len(partner)
        for p, q in enumerate(partner):
            if not (0 <= q < n) or q == p or partner[q] != p:
                raise InvalidMatching(f"partner map is not a fixed-point-free involution at {p}")
        self.partner = partner

    @classmethod
    def from_pairs(cls, pairs, num_people):
        partner = [-1] * num_people
        for a, b in pairs:
            if not (0 <= a < num_people and 0 <= b < num_people):
                raise InvalidMatching(f"pair ({a + 1},{b + 1}) out of range")
            if partner[a] != -1 or partner[b] != -1:
                raise InvalidMatching(f"person {a + 1} or {b + 1} matched twice")
            partner[a] = b
            partner[b] = a
        if -1 in partner:
            raise InvalidMatching("not every person is matched")
        return cls(partner)

    def pairs(self):
        """Pairs (a, b) with a < b, in increasing a order."""
        return [(a, b) for a, b in enumerate(self.partner) if a < b]

    def __eq__(self, other):
        return isinstance(other, Matching) and self.partner == other.partner

    def __hash__(self):
        return hash(self.partner)

    def __repr__(self):
        return "Matching(" + ", ".join(f"{a + 1}-{b + 1}" for a, b in self.pairs()) + ")"


def blocking_pair(inst, m):
    """Lexicographically smallest blocking pair (a, b) with a < b, or None.

    (a, b) blocks when both prefer each other over their matched partners.
    """
    if len(m.partner) != inst.num_people:
        raise InvalidMatching("matching size does not fit the instance")
    n = inst.num_people
    rank = inst.rank
    for a in range(n):
        ra = rank[a]
        cutoff = ra[m.partner[a]]
        for b in range(a + 1, n):
            if ra[b] < cutoff and rank[b][a] < rank[b][m.partner[b]]:
                return (a, b)
    return None


def is_stable(inst, m):
    return blocking_pair(inst, m) is None


def parse_instance(text):
    """Parse the instance file format (see serialize_instance)."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise MalformedFile("empty instance file")
    try:
        n = int(lines[0])
    except ValueError:
        raise MalformedFile(f"bad header line {lines[0]!r}") from None
    if n < 2 or n % 2 != 0:
        raise MalformedFile(f"number of people must be even and >= 2, got {n}")
    if len(lines) != n + 1:
        raise MalformedFile(f"expected {n} preference lines, got {len(lines) - 1}")
    prefs = []
    for i, ln in enumerate(lines[1:]):
        try:
            row = [int(tok) for tok in ln.split()]
        except ValueError:
            raise MalformedFile(f"person {i + 1}: non-integer token in {ln!r}") from None
        if any(not (1 <= q <= n) for q in row):
            raise MalformedFile(f"person {i + 1}: id out of range 1..{n}")
        prefs.append([q - 1 for q in row])
    return RoommateInstance(prefs)


def serialize_instance(inst):
    """Text form: header line `2n`, then each person's list, 1-based ids."""
    out = [str(inst.num_people)]
    for row in inst.prefs:
        out.append(" ".join(str(q + 1) for q in row))
    return "\n".join(out) + "\n"


def parse_matching(text, num_people):
    """n lines `a b` with a < b, 1-based."""
    pairs = []
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        parts = ln.split()
        if len(parts) != 2:
            raise MalformedFile(f"bad matching line {ln!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise MalformedFile(f"bad matching line {ln!r}") from None
        if not a < b:
            raise MalformedFile(f"matching line {ln!r} must have a < b")
        pairs.append((a - 1, b - 1))
    return Matching.from_pairs(pairs, num_people)


def serialize_matching(m):
    return "\n".join(f"{a + 1} {b + 1}" for a, b in m.pairs()) + "\n"
