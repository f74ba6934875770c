"""Exact sign determination for sums of rational multiples of cos(2*pi*t).

Values are canonicalized sums of atoms `coef * prod_i cos(2*pi*t_i)` with
rational coef and rational turns t_i in [0, 1/2].  sin terms enter as
sin(2*pi*t) = cos(2*pi*(t - 1/4)) and rational cosines (Niven angles) fold
into the coefficient, so exact equality of two expressible values is always
visible structurally.  Sign queries resolve through tiers:

  RATIONAL   - no trig atoms left
  SIGNS      - single atom, sign of coef times cos-factor signs
  MONOTONE   - c*(cos A - cos B): cos is strictly decreasing on [0, 1/2]
  PRODUCT    - c*(cos A + cos B) via the sum-to-product identity
  DOMINANCE  - one atom's certified rational lower bound beats the rest
  INTERVAL   - mpmath certified intervals, doubling precision

A comparison that is still undecided at the precision floor raises
UndecidedComparison instead of guessing.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import UndecidedComparison

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)

# cos(2*pi*t) for the rational-cosine turns in [0, 1/2] (Niven's theorem)
_NIVEN = {
    Fraction(0): Fraction(1),
    Fraction(1, 6): HALF,
    QUARTER: Fraction(0),
    Fraction(1, 3): -HALF,
    HALF: Fraction(-1),
}

INTERVAL_FLOOR_BITS = 8192


def canon_turns(t):
    """Reduce t so cos(2*pi*t) = cos(2*pi*canon) with canon in [0, 1/2].

    Returns (rational_value, None) for Niven angles, else (None, canon).
    """
    t = t % 1
    if t > HALF:
        t = 1 - t
    val = _NIVEN.get(t)
    if val is not None:
        return val, None
    return None, t


def circ_dist(a, b):
    """Circular distance of two angles in turns, in [0, 1/2]."""
    d = (a - b) % 1
    return d if d <= HALF else 1 - d


def _common_factors(k1, k2):
    """Multiset intersection of two factor tuples (both sorted)."""
    out = []
    j = 0
    for t in k1:
        while j < len(k2) and k2[j] < t:
            j += 1
        if j < len(k2) and k2[j] == t:
            out.append(t)
            j += 1
    return tuple(out)


def _strip(key, common):
    rest = list(key)
    for t in common:
        rest.remove(t)
    return tuple(rest)


class ExactSum:
    """Canonical sum of cos-atoms; supports exact sign and comparison."""

    __slots__ = ("atoms",)

    def __init__(self, atoms=None):
        self.atoms = dict(atoms) if atoms else {}

    @classmethod
    def from_rational(cls, q):
        q = Fraction(q)
        return cls({(): q} if q else {})

    def add_term(self, coef, turns_list):
        """Accumulate coef * prod cos(2*pi*t) after canonicalization."""
        coef = Fraction(coef)
        if not coef:
            return
        factors = []
        for t in turns_list:
            val, canon = canon_turns(t)
            if canon is None:
                coef *= val
                if not coef:
                    return
            else:
                factors.append(canon)
        key = tuple(sorted(factors))
        new = self.atoms.get(key, 0) + coef
        if new:
            self.atoms[key] = new
        else:
            self.atoms.pop(key, None)

    def add_cos(self, coef, t):
        self.add_term(coef, (t,))

    def add_sin(self, coef, t):
        self.add_term(coef, (t - QUARTER,))

    def __sub__(self, other):
        out = ExactSum(self.atoms)
        for key, coef in other.atoms.items():
            new = out.atoms.get(key, 0) - coef
            if new:
                out.atoms[key] = new
            else:
                out.atoms.pop(key, None)
        return out

    def is_zero(self):
        return not self.atoms

    # -- certified rational bounds ------------------------------------------

    @staticmethod
    def _cos_abs_lower(t):
        # |cos(2*pi*t)| >= 4*|t - 1/4| on [0, 1/2] (chord bound for sin)
        return 4 * abs(t - QUARTER)

    @staticmethod
    def _atom_bounds(key, coef):
        lo = abs(coef)
        for t in key:
            lo *= ExactSum._cos_abs_lower(t)
        return lo, abs(coef)

    @staticmethod
    def _atom_sign(key, coef):
        s = 1 if coef > 0 else -1
        for t in key:
            if t > QUARTER:
                s = -s
        return s

    # -- sign ---------------------------------------------------------------

    def sign_with_certificate(self):
        """Return (sign, certificate) with sign in {-1, 0, 1}."""
        atoms = self.atoms
        if not atoms:
            return 0, "ZERO"
        if len(atoms) == 1:
            (key, coef), = atoms.items()
            if not key:
                return (1 if coef > 0 else -1), "RATIONAL"
            return self._atom_sign(key, coef), "SIGNS"
        if len(atoms) == 2 and () not in atoms:
            (k1, c1), (k2, c2) = atoms.items()
            common = _common_factors(k1, k2)
            if common:
                # factor out the shared cos terms; their sign is exact
                sgn = 1
                for t in common:
                    if t > QUARTER:
                        sgn = -sgn
                reduced = ExactSum()
                reduced.atoms[_strip(k1, common)] = c1 * sgn
                reduced.atoms[_strip(k2, common)] = c2 * sgn
                return reduced.sign_with_certificate()
            if len(k1) == 1 and len(k2) == 1:
                a, b = k1[0], k2[0]
                if c1 == -c2:
                    # c*(cos A - cos B), decreasing on [0, 1/2]
                    s = 1 if c1 > 0 else -1
                    return (s if a < b else -s), "MONOTONE"
                if c1 == c2:
                    # c*(cos A + cos B) = 2c cos(pi(A+B)) cos(pi(A-B))
                    s = 1 if c1 > 0 else -1
                    for half_angle in ((a + b) / 2, (a - b) / 2):
                        val, canon = canon_turns(half_angle)
                        if val is not None:
                            if val == 0:
                                return 0, "PRODUCT"
                            s *= 1 if val > 0 else -1
                        else:
                            s *= 1 if canon < QUARTER else -1
                    return s, "PRODUCT"
        # dominance: one atom certifiably outweighs all the others
        items = list(atoms.items())
        bounds = [self._atom_bounds(k, c) for k, c in items]
        total_hi = sum(hi for _, hi in bounds)
        for (key, coef), (lo, hi) in zip(items, bounds):
            if lo > total_hi - hi:
                return self._atom_sign(key, coef), "DOMINANCE"
        return self._interval_sign(), "INTERVAL"

    def sign(self):
        return self.sign_with_certificate()[0]

    def _interval_sign(self):
        import mpmath

        iv = mpmath.iv
        prec = 64
        while prec <= INTERVAL_FLOOR_BITS:
            old = iv.prec
            iv.prec = prec
            try:
                two_pi = 2 * iv.pi
                total = iv.mpf(0)
                for key, coef in self.atoms.items():
                    term = iv.mpf(coef.numerator) / coef.denominator
                    for t in key:
                        term *= iv.cos(two_pi * iv.mpf(t.numerator) / t.denominator)
                    total += term
                if total.a > 0:
                    return 1
                if total.b < 0:
                    return -1
            finally:
                iv.prec = old
            prec *= 2
        raise UndecidedComparison(f"interval floor hit for {self.atoms!r}")

    def evaluate(self, prec=53):
        """Plain (uncertified) mpmath float evaluation, for diagnostics."""
        import mpmath

        with mpmath.workprec(prec):
            total = mpmath.mpf(0)
            for key, coef in self.atoms.items():
                term = mpmath.mpf(coef.numerator) / coef.denominator
                for t in key:
                    term *= mpmath.cos(2 * mpmath.pi * mpmath.mpf(t.numerator) / t.denominator)
                total += term
            return total

    def __repr__(self):
        parts = []
        for key, coef in sorted(self.atoms.items()):
            factors = "".join(f"*cos(2pi*{t})" for t in key)
            parts.append(f"{coef}{factors}")
        return "ExactSum(" + (" + ".join(parts) if parts else "0") + ")"


def compare_sums(u, v):
    """Three-way exact comparison of two ExactSums; returns sign with cert."""
    return (u - v).sign_with_certificate()
