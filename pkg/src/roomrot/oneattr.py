"""Polynomial-time exact solver for 1-attribute instances.

Everyone sits on a line at positions 1..n; a type-A person ranks the others
by ascending position, a type-B person by descending position.  Such an
instance always has exactly one or two stable assignments, found by a case
analysis that repeatedly pairs off two people who are matched in every
stable assignment and recurses on the type string with their positions
deleted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .core import Matching, RoommateInstance
from .errors import DispatchExhausted, InvalidPreferenceList, TieDetected


@dataclass(frozen=True)
class OneAttrInstance:
    types: str

    def __post_init__(self):
        n = len(self.types)
        if n < 2 or n % 2 != 0 or any(c not in "AB" for c in self.types):
            raise InvalidPreferenceList(f"bad type string {self.types!r}")

    @classmethod
    def from_coordinates(cls, coords):
        """coords: iterable of (position, 'A'|'B'); positions must be distinct."""
        coords = sorted((Fraction(p), t) for p, t in coords)
        for (p1, _), (p2, t2) in zip(coords, coords[1:]):
            if p1 == p2:
                raise TieDetected("positions", str(p1), str(p2))
        return cls("".join(t for _, t in coords))


def expand(oa):
    """The explicit 2n-1 length preference lists."""
    n = len(oa.types)
    prefs = []
    for p, t in enumerate(oa.types):
        order = [q for q in range(n) if q != p]
        if t == "B":
            order.reverse()
        prefs.append(order)
    return RoommateInstance(prefs)


@dataclass
class Frame:
    """One recursion step: which case fired on which sub-instance."""

    types: str
    case: str
    pair: tuple | None  # 0-based positions within this sub-instance


@dataclass
class OneAttrResult:
    count: int
    assignments: list
    trace: list = field(default_factory=list)


_BASE4 = {
    "ABBA": ("B2", [frozenset({(0, 3), (1, 2)}), frozenset({(0, 2), (1, 3)})]),
    "BAAB": ("B3", [frozenset({(0, 3), (1, 2)}), frozenset({(0, 2), (1, 3)})]),
    "ABAB": ("B4", [frozenset({(0, 2), (1, 3)})]),
}


def _dispatch(t):
    """Return (case_name, forced_pair) or a base-case marker."""
    n = len(t)
    if n == 2:
        return "B1", None
    if t[0] == "A" and t[1] == "A":
        return "T1", (0, 1)
    if t[-2] == "B" and t[-1] == "B":
        return "S1", (n - 2, n - 1)
    if t[0] == "B" and t[-1] == "A":
        return "M1", (0, n - 1)
    if t[0] == "A" and t[1] == "B" and t[-1] == "A" and "A" in t[2:-1]:
        return "M2", (1, n - 1)
    if t[0] == "B" and t[-2] == "A" and t[-1] == "B" and "B" in t[1:-2]:
        return "S2", (0, n - 2)
    if n == 4 and t in _BASE4:
        return _BASE4[t][0], None
    if t[0] == "B" and t[1] == "A" and t[2] == "A" and "A" in t[3:]:
        return "T2", (1, 2)
    if t[-3] == "B" and t[-2] == "B" and t[-1] == "A" and "B" in t[:-3]:
        return "S3", (n - 3, n - 2)
    if n >= 6:
        if t[0] == "A" and t[1] == "B" and t[2] == "A" and t[-2] == "A" and t[-1] == "B":
            return "T3", (0, 2)
        if t[0] == "A" and t[1] == "B" and t[-3] == "B" and t[-2] == "A" and t[-1] == "B":
            return "S4", (n - 3, n - 1)
        if (
            t[0] == "A"
            and t[1] == "B"
            and t[2] == "B"
            and t[-3] == "A"
            and t[-2] == "A"
            and t[-1] == "B"
        ):
            return "M3", (1, n - 2)
    raise DispatchExhausted(f"no case covers type string {t!r}")


def _solve(t, trace):
    case, pair = _dispatch(t)
    if case == "B1":
        trace.append(Frame(t, case, (0, 1)))
        return [frozenset({(0, 1)})]
    if pair is None:
        trace.append(Frame(t, case, None))
        return list(_BASE4[t][1])
    trace.append(Frame(t, case, pair))
    a, b = pair
    keep = [i for i in range(len(t)) if i not in pair]
    sub = _solve("".join(t[i] for i in keep), trace)
    out = []
    for assignment in sub:
        mapped = {(keep[x], keep[y]) for x, y in assignment}
        mapped.add((a, b))
        out.append(frozenset(mapped))
    return out


def solve_1attr(oa):
    """All stable assignments of the instance; the count is always 1 or 2."""
    trace = []
    raw = _solve(oa.types, trace)
    n = len(oa.types)
    assignments = [Matching.from_pairs(sorted(a), n) for a in raw]
    if len(assignments) not in (1, 2) or len(set(assignments)) != len(assignments):
        raise DispatchExhausted(f"case analysis produced {len(assignments)} assignments")
    return OneAttrResult(count=len(assignments), assignments=assignments, trace=trace)
