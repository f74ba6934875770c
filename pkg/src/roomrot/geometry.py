"""Derive strict preference lists from dot-product and distance descriptions.

Coordinates are exact.  A vector is a tuple of components:

  Circ(turns, radius)   a planar pair (r cos 2*pi*t, r sin 2*pi*t); counts as
                        two dimensions; radius is an exact atom, or the
                        symbolic marker R for the large-radius limit
  Pair2(x, y)           a planar pair with explicit exact entries
  Val(a)                a single coordinate

Every comparison is certified: rational, circular (monotonicity of cos on a
half-turn), product form, rational dominance bounds, or certified intervals.
Nothing is ever decided by uncertified floating point.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key

from .core import RoommateInstance
from .errors import MalformedFile, PerturbationBoundViolated, TieDetected
from .exact import QUARTER, ExactSum, canon_turns

# -- atoms: (coef, cos-factor turns tuple) -----------------------------------

RAT_ONE = (Fraction(1), ())


def rat_atom(q):
    return (Fraction(q), ())


def cos_atom(t, coef=1):
    """coef * cos(2*pi*t) as an atom."""
    val, canon = canon_turns(Fraction(t))
    if canon is None:
        return (Fraction(coef) * val, ())
    return (Fraction(coef), (canon,))


def sin_atom(t, coef=1):
    return cos_atom(Fraction(t) - QUARTER, coef)


def atom_mul(a, b):
    return (a[0] * b[0], tuple(sorted(a[1] + b[1])))


def atom_scale(a, q):
    return (a[0] * Fraction(q), a[1])


def _add_atom(sum_, atom, extra_turns=()):
    sum_.add_term(atom[0], atom[1] + tuple(extra_turns))


# -- components ---------------------------------------------------------------

LIMIT_RADIUS = "R"


@dataclass(frozen=True)
class Circ:
    turns: Fraction
    radius: object = RAT_ONE  # atom, or LIMIT_RADIUS

    @property
    def dims(self):
        return 2


@dataclass(frozen=True)
class Pair2:
    x: tuple
    y: tuple

    @property
    def dims(self):
        return 2


@dataclass(frozen=True)
class Val:
    a: tuple

    @property
    def dims(self):
        return 1


def pair2(x, y):
    return Pair2(rat_atom(x), rat_atom(y))


def val(q):
    return Val(rat_atom(q))


@dataclass(frozen=True)
class Person:
    name: str
    position: tuple
    preference: tuple


class GeometricInstance:
    """Shared shell for attribute and Euclidean instances."""

    model = None

    def __init__(self, people):
        self.people = tuple(people)
        if not self.people:
            raise MalformedFile("instance with no people")
        shape = tuple(c.dims for c in self.people[0].position)
        for p in self.people:
            if (
                tuple(c.dims for c in p.position) != shape
                or tuple(c.dims for c in p.preference) != shape
            ):
                raise MalformedFile(f"person {p.name}: component shape mismatch")
        self.k = sum(shape)

    @property
    def names(self):
        return [p.name for p in self.people]


class AttributeInstance(GeometricInstance):
    model = "attribute"


class EuclideanInstance(GeometricInstance):
    model = "euclidean"


# -- dot products and squared distances ---------------------------------------


def _radius_atom(c):
    if c.radius is LIMIT_RADIUS:
        raise MalformedFile("symbolic radius is only valid in Euclidean instances")
    return c.radius


def dot(u, v):
    """Exact dot product of two aligned component tuples."""
    s = ExactSum()
    for cu, cv in zip(u, v, strict=True):
        if isinstance(cu, Val) and isinstance(cv, Val):
            _add_atom(s, atom_mul(cu.a, cv.a))
        elif isinstance(cu, Circ) and isinstance(cv, Circ):
            r = atom_mul(_radius_atom(cu), _radius_atom(cv))
            _add_atom(s, r, extra_turns=(cu.turns - cv.turns,))
        elif isinstance(cu, Circ) and isinstance(cv, Pair2):
            r = _radius_atom(cu)
            _add_atom(s, atom_mul(r, cv.x), extra_turns=(cu.turns,))
            _add_atom(s, atom_mul(r, cv.y), extra_turns=(cu.turns - QUARTER,))
        elif isinstance(cu, Pair2) and isinstance(cv, Circ):
            r = _radius_atom(cv)
            _add_atom(s, atom_mul(r, cu.x), extra_turns=(cv.turns,))
            _add_atom(s, atom_mul(r, cu.y), extra_turns=(cv.turns - QUARTER,))
        elif isinstance(cu, Pair2) and isinstance(cv, Pair2):
            _add_atom(s, atom_mul(cu.x, cv.x))
            _add_atom(s, atom_mul(cu.y, cv.y))
        else:
            raise MalformedFile(f"mismatched component kinds {cu!r} / {cv!r}")
    return s


class LimitDist:
    """Squared distance as a polynomial in the symbolic radius R.

    Compared lexicographically by descending power of R, which realizes the
    R -> infinity ordering.
    """

    __slots__ = ("coeffs",)

    def __init__(self):
        self.coeffs = {}

    def add(self, power, atom, extra_turns=()):
        s = self.coeffs.setdefault(power, ExactSum())
        s.add_term(atom[0], atom[1] + tuple(extra_turns))

    def compare(self, other):
        powers = sorted(set(self.coeffs) | set(other.coeffs), reverse=True)
        for p in powers:
            a = self.coeffs.get(p, ExactSum())
            b = other.coeffs.get(p, ExactSum())
            sign, _ = ((a - b)).sign_with_certificate()
            if sign:
                return sign
        return 0


def squared_distance(u, v):
    """Squared distance as a LimitDist (power 0 only if no symbolic radius)."""
    d = LimitDist()
    for cu, cv in zip(u, v, strict=True):
        if isinstance(cu, Val) and isinstance(cv, Val):
            d.add(0, atom_mul(cu.a, cu.a))
            d.add(0, atom_mul(cv.a, cv.a))
            d.add(0, atom_scale(atom_mul(cu.a, cv.a), -2))
        elif isinstance(cu, (Circ, Pair2)) and isinstance(cv, (Circ, Pair2)):
            _add_planar_norm_sq(d, cu)
            _add_planar_norm_sq(d, cv)
            _add_planar_cross(d, cu, cv)
        else:
            raise MalformedFile(f"mismatched component kinds {cu!r} / {cv!r}")
    return d


def _add_planar_norm_sq(d, c):
    """Add |c|^2 of a planar component to the distance polynomial."""
    if isinstance(c, Circ):
        if c.radius is LIMIT_RADIUS:
            d.add(2, RAT_ONE)
        else:
            d.add(0, atom_mul(c.radius, c.radius))
    else:
        d.add(0, atom_mul(c.x, c.x))
        d.add(0, atom_mul(c.y, c.y))


def _add_planar_cross(d, cu, cv):
    """Add -2 * cu . cv to the distance polynomial."""
    if isinstance(cu, Circ) and isinstance(cv, Circ):
        ru, rv = cu.radius, cv.radius
        power = (ru is LIMIT_RADIUS) + (rv is LIMIT_RADIUS)
        atom = RAT_ONE
        if ru is not LIMIT_RADIUS:
            atom = atom_mul(atom, ru)
        if rv is not LIMIT_RADIUS:
            atom = atom_mul(atom, rv)
        d.add(power, atom_scale(atom, -2), extra_turns=(cu.turns - cv.turns,))
        return
    if isinstance(cu, Pair2) and isinstance(cv, Circ):
        cu, cv = cv, cu
    if isinstance(cu, Circ) and isinstance(cv, Pair2):
        power = 1 if cu.radius is LIMIT_RADIUS else 0
        r = RAT_ONE if cu.radius is LIMIT_RADIUS else cu.radius
        d.add(power, atom_scale(atom_mul(r, cv.x), -2), extra_turns=(cu.turns,))
        d.add(power, atom_scale(atom_mul(r, cv.y), -2), extra_turns=(cu.turns - QUARTER,))
        return
    # Pair2 x Pair2
    d.add(0, atom_scale(atom_mul(cu.x, cv.x), -2))
    d.add(0, atom_scale(atom_mul(cu.y, cv.y), -2))


# -- preference derivation -----------------------------------------------------


def attribute_prefs(ai, cert_sink=None):
    """Sort each person's rivals by strictly decreasing dot product.

    Raises TieDetected on any exact tie (strictness violation).  `cert_sink`
    (a set) collects the certificate kinds used, for auditing which
    comparator tiers a construction exercises.
    """
    n = len(ai.people)
    prefs = []
    for i, person in enumerate(ai.people):
        dots = {}
        for j, other in enumerate(ai.people):
            if j != i:
                dots[j] = dot(person.preference, other.position)

        def cmp(a, b, dots=dots, who=i):
            sign, cert = (dots[b] - dots[a]).sign_with_certificate()
            if cert_sink is not None:
                cert_sink.add(cert)
            if sign == 0:
                raise TieDetected(ai.people[who].name, ai.people[a].name, ai.people[b].name)
            return sign

        order = sorted((j for j in range(n) if j != i), key=cmp_to_key(cmp))
        prefs.append(order)
    return RoommateInstance(prefs)


def euclidean_prefs(ei, cert_sink=None):
    """Sort each person's rivals by strictly increasing squared distance."""
    n = len(ei.people)
    prefs = []
    for i, person in enumerate(ei.people):
        dists = {}
        for j, other in enumerate(ei.people):
            if j != i:
                dists[j] = squared_distance(person.preference, other.position)

        def cmp(a, b, dists=dists, who=i):
            sign = dists[a].compare(dists[b])
            if sign == 0:
                raise TieDetected(ei.people[who].name, ei.people[a].name, ei.people[b].name)
            return sign

        order = sorted((j for j in range(n) if j != i), key=cmp_to_key(cmp))
        prefs.append(order)
    return RoommateInstance(prefs)


# -- perturbation ---------------------------------------------------------------


@dataclass(frozen=True)
class PerturbationPlan:
    """Which people receive the tiny first-two-coordinate offsets."""

    targets: tuple
    delta0: Fraction | None = None


def perturbation_bound(ai, targets):
    """Largest safe power-of-two delta0 for the given target group.

    Every preference that reads the perturbed coordinates is a unit circle
    angle alpha; the perturbed values are delta_j (cos a + sin a), bounded by
    sqrt(2) * delta_max.  Keeping that below a certified lower bound on every
    nonzero |cos| the person's list depends on preserves all strict orders.
    """
    target_set = set(targets)
    bounds = []
    for i, person in enumerate(ai.people):
        slot0 = person.preference[0]
        if not isinstance(slot0, Circ):
            continue
        for j, other in enumerate(ai.people):
            if j == i or j in target_set:
                continue
            pos0 = other.position[0]
            if not isinstance(pos0, Circ):
                continue
            val, canon = canon_turns(slot0.turns - pos0.turns)
            if canon is None:
                if val != 0:
                    bounds.append(abs(val))
            else:
                bounds.append(4 * abs(canon - QUARTER))
    if not bounds:
        raise PerturbationBoundViolated("no strict circle comparison to protect")
    lb = min(bounds)
    cap = lb / (8 * max(1, len(target_set)))
    delta0 = Fraction(1, 2)
    while delta0 > cap:
        delta0 /= 2
    return delta0


def perturb_for_strictness(ai, plan):
    """Assign distinct tiny (delta_j, delta_j) first-two coordinates to the
    plan's targets; everyone else and every preference vector is unchanged."""
    if not plan.targets:
        return ai
    delta0 = plan.delta0 if plan.delta0 is not None else perturbation_bound(ai, plan.targets)
    if delta0 <= 0:
        raise PerturbationBoundViolated(f"non-positive delta0 {delta0}")
    people = list(ai.people)
    for rank, idx in enumerate(plan.targets, start=1):
        p = people[idx]
        slot0 = p.position[0]
        if not (isinstance(slot0, Pair2) and slot0.x[0] == 0 and slot0.y[0] == 0):
            raise PerturbationBoundViolated(
                f"target {p.name} does not have an all-zero perturbable slot"
            )
        delta = rank * delta0
        people[idx] = Person(p.name, (pair2(delta, delta),) + p.position[1:], p.preference)
    return AttributeInstance(people)


def _lcm_denominator(values):
    return math.lcm(*(v.denominator for v in values))


def _pow2_below(cap):
    if cap <= 0:
        raise PerturbationBoundViolated(f"non-positive perturbation cap {cap}")
    xi = Fraction(1, 2)
    while xi >= cap:
        xi /= 2
    return xi


def circle_rotation_step(angles, n_targets):
    """A safe per-person rotation step for breaking circular mirror ties.

    All angles live on the grid (1/D)Z, so any nonzero difference of two
    cosines is at least 8/D^2, while rotating a preference by xi changes each
    cosine by at most 7*xi (in turns).  A step below both 8/(14 D^2) and the
    half-grid 1/(2D), divided across the targets, therefore breaks exact
    mirror ties without reordering anything that was strict.
    """
    d = _lcm_denominator(angles)
    cap = min(Fraction(8, 14 * d * d), Fraction(1, 2 * d)) / (n_targets + 1)
    return _pow2_below(cap)


def line_shift_step(values, n_targets):
    """Same idea on a line: distinct |z - z'| values differ by >= 1/D and a
    shift of xi moves each absolute difference by at most xi."""
    d = _lcm_denominator(values)
    return _pow2_below(Fraction(1, 2 * d) / (n_targets + 1))


def rotate_circ_preference(person, turns):
    """Rotate every planar-circle component of a person's preference."""
    pref = tuple(
        Circ(c.turns + turns, c.radius) if isinstance(c, Circ) else c
        for c in person.preference
    )
    return Person(person.name, person.position, pref)


def _rational_point(components):
    out = []
    for c in components:
        if not (isinstance(c, Val) and not c.a[1]):
            return None
        out.append(c.a[0])
    return tuple(out)


def perturb_preference_points(ei):
    """Break distance ties in an all-rational planar instance by shifting
    every preference point a tiny amount along one generic direction.

    A tie |p - u| = |p - v| lives on the perpendicular bisector of u, v;
    shifting p along a direction not perpendicular to any u - v leaves the
    bisector, and a shift below (min nonzero gap) / (2 max |2 w.(u-v)|)
    cannot flip any previously strict comparison.  Positions are untouched,
    so only the shifted person's own list is affected.
    """
    positions = []
    prefs = []
    for p in ei.people:
        pos = _rational_point(p.position)
        pref = _rational_point(p.preference)
        if pos is None or pref is None or len(pos) != 2:
            raise MalformedFile("perturbation needs an all-rational planar instance")
        positions.append(pos)
        prefs.append(pref)

    diffs = {
        (u[0] - v[0], u[1] - v[1])
        for i, u in enumerate(positions)
        for v in positions[i + 1:]
        if u != v
    }
    lam = None
    bad = {Fraction(-dx, dy) for dx, dy in diffs if dy != 0}
    for d in range(1, len(bad) + 2):
        if Fraction(1, d) not in bad:
            lam = Fraction(1, d)
            break
    w = (Fraction(1), lam)

    max_cross = max(2 * abs(dx * w[0] + dy * w[1]) for dx, dy in diffs)
    min_gap = None
    for p in prefs:
        dots = sorted((p[0] - u[0]) ** 2 + (p[1] - u[1]) ** 2 for u in set(positions))
        for a, b in zip(dots, dots[1:]):
            if b > a and (min_gap is None or b - a < min_gap):
                min_gap = b - a
    if min_gap is None:
        raise PerturbationBoundViolated("all squared distances coincide")
    xi = Fraction(1, 2)
    while xi * max_cross * 2 >= min_gap:
        xi /= 2

    people = [
        Person(
            p.name,
            p.position,
            (Val(rat_atom(pref[0] + xi * w[0])), Val(rat_atom(pref[1] + xi * w[1]))),
        )
        for p, pref in zip(ei.people, prefs)
    ]
    return EuclideanInstance(people)


# -- JSON encoding ---------------------------------------------------------------


def _rat_to_json(q):
    return {"num": q.numerator, "den": q.denominator}


def _atom_to_json(a):
    coef, factors = a
    if not factors:
        return _rat_to_json(coef)
    return {"coef": _rat_to_json(coef), "cos_turns": [_rat_to_json(t) for t in factors]}


def _comp_to_json(c):
    if isinstance(c, Circ):
        radius = "R" if c.radius is LIMIT_RADIUS else _atom_to_json(c.radius)
        return {"turns": _rat_to_json(c.turns), "radius": radius}
    if isinstance(c, Pair2):
        return {"xy": [_atom_to_json(c.x), _atom_to_json(c.y)]}
    return _atom_to_json(c.a)


def instance_to_json(gi):
    return {
        "model": gi.model,
        "k": gi.k,
        "people": [
            {
                "name": p.name,
                "position": [_comp_to_json(c) for c in p.position],
                "preference": [_comp_to_json(c) for c in p.preference],
            }
            for p in gi.people
        ],
    }


def _rat_from_json(obj, allow_float):
    if isinstance(obj, bool):
        raise MalformedFile("boolean is not a coordinate")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, float):
        if not allow_float:
            raise MalformedFile("float coordinates need --unsafe-float")
        return Fraction(obj)
    if isinstance(obj, dict) and set(obj) == {"num", "den"}:
        return Fraction(obj["num"], obj["den"])
    raise MalformedFile(f"bad rational {obj!r}")


def _atom_from_json(obj, allow_float):
    if isinstance(obj, dict) and "cos_turns" in obj:
        coef = _rat_from_json(obj["coef"], allow_float)
        atom = (coef, ())
        for t in obj["cos_turns"]:
            atom = atom_mul(atom, cos_atom(_rat_from_json(t, allow_float)))
        return atom
    return (_rat_from_json(obj, allow_float), ())


def _comp_from_json(obj, allow_float):
    if isinstance(obj, dict) and "turns" in obj:
        radius = obj.get("radius", 1)
        radius = LIMIT_RADIUS if radius == "R" else _atom_from_json(radius, allow_float)
        return Circ(_rat_from_json(obj["turns"], allow_float), radius)
    if isinstance(obj, dict) and "xy" in obj:
        x, y = obj["xy"]
        return Pair2(_atom_from_json(x, allow_float), _atom_from_json(y, allow_float))
    return Val(_atom_from_json(obj, allow_float))


def instance_from_json(obj, allow_float=False):
    if isinstance(obj, str):
        obj = json.loads(obj)
    model = obj.get("model")
    people = [
        Person(
            str(p["name"]),
            tuple(_comp_from_json(c, allow_float) for c in p["position"]),
            tuple(_comp_from_json(c, allow_float) for c in p["preference"]),
        )
        for p in obj["people"]
    ]
    if model == "attribute":
        gi = AttributeInstance(people)
    elif model == "euclidean":
        gi = EuclideanInstance(people)
    else:
        raise MalformedFile(f"unknown model {model!r}")
    if "k" in obj and obj["k"] != gi.k:
        raise MalformedFile(f"declared k={obj['k']} but components span {gi.k}")
    return gi
