"""The complete rotation set, dual pairing, precedence order Pi*, and G(I).

Discovery is an exhaustive, memoized DFS over the table state space starting
from the Phase-1 table: at each table every exposed rotation is eliminated in
turn.  This substitutes for a polynomial-time rotation finder and is exact at
the instance sizes this package targets.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field

from .errors import ExplorationBudgetExceeded, InternalInconsistency
from .irving import Rotation, eliminate_with_removals, exposed_rotations, phase1

DEFAULT_BUDGET = 10 ** 6


def exploration_budget():
    """Default DFS budget; SR_EXPLORATION_BUDGET overrides."""
    raw = os.environ.get("SR_EXPLORATION_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


class RotationPoset:
    """Rot(I) with dual pairing, singleton set and the precedence order Pi*.

    `precedes_mask[i]` is a bitmask of rotations j with Pi*(j, i), i.e. the
    reflexive-transitive predecessors of rotation i.
    """

    def __init__(self, rotations, dual_of, remover, phase1_table, explicit_edges):
        self.rotations = tuple(rotations)  # canonical order
        self.dual_of = dict(dual_of)  # index -> index, involution on non-singletons
        self.remover = dict(remover)  # (person, removed_person) -> rotation index
        self.phase1_table = phase1_table
        self.explicit_edges = frozenset(explicit_edges)  # (pred, succ) index pairs
        self.singletons = frozenset(
            i for i in range(len(self.rotations)) if i not in self.dual_of
        )
        self.precedes_mask = self._closure()
        # the downset counters assume only singletons precede singletons
        for s in self.singletons:
            mask = self.precedes_mask[s]
            for j in range(len(self.rotations)):
                if mask >> j & 1 and j not in self.singletons:
                    raise InternalInconsistency("a dual-pair rotation precedes a singleton")

    def _closure(self):
        n = len(self.rotations)
        mask = [1 << i for i in range(n)]  # reflexive
        succs = [[] for _ in range(n)]
        for a, b in self.explicit_edges:
            succs[a].append(b)
        # propagate to a fixed point (posets here are tiny)
        changed = True
        while changed:
            changed = False
            for a in range(n):
                for b in succs[a]:
                    merged = mask[b] | mask[a]
                    if merged != mask[b]:
                        mask[b] = merged
                        changed = True
        return tuple(mask)

    def __len__(self):
        return len(self.rotations)

    def precedes(self, i, j):
        """Pi*(i, j): rotation i precedes rotation j (reflexive, transitive)."""
        return bool(self.precedes_mask[j] >> i & 1)

    def pi(self, i, j):
        """Pi(i, j): precedence restricted to non-singletons."""
        return i in self.dual_of and j in self.dual_of and self.precedes(i, j)

    def non_singletons(self):
        return [i for i in range(len(self.rotations)) if i in self.dual_of]

    def dual_pairs(self):
        """One (i, i^d) per pair, with the canonically smaller member first."""
        return [(i, j) for i, j in sorted(self.dual_of.items()) if i < j]

    def down_closure(self, indices):
        m = 0
        for i in indices:
            m |= self.precedes_mask[i]
        return m

    def hasse_edges(self):
        """Transitive reduction of Pi* (irreflexive cover relations)."""
        n = len(self.rotations)
        lt = [[self.precedes(i, j) and i != j for j in range(n)] for i in range(n)]
        edges = []
        for i in range(n):
            for j in range(n):
                if lt[i][j] and not any(lt[i][k] and lt[k][j] for k in range(n)):
                    edges.append((i, j))
        return edges

    def names(self):
        """Stable display names: pairs become R{k}/R{k}d, singletons R{k}.

        Numbering follows the canonical rotation order, pairs named after
        their smaller member.
        """
        label = {}
        k = 0
        for i in range(len(self.rotations)):
            if i in label:
                continue
            k += 1
            if i in self.dual_of:
                label[i] = f"R{k}"
                label[self.dual_of[i]] = f"R{k}d"
            else:
                label[i] = f"R{k}"
        return label


@dataclass
class AttributionReport:
    """Outcome of replaying random elimination orders."""

    runs: int
    checked_pairs: int
    conflicts: list = field(default_factory=list)

    @property
    def consistent(self):
        return not self.conflicts


def _static_attribution(inst, phase1_table, ordered):
    """claimants[(e, p)] = rotations whose elimination can remove p from e's
    list by truncating p's list above e, best first.

    Candidates are rotations with a triple (e', h', p): eliminating one moves
    p's bottom up to e'.  Only pairs surviving Phase 1 are Phase-2 removals,
    and cuts execute bottom-up, so the lowest cut above e (largest rank of
    e') is the rotation that actually performs the removal.
    """
    rank = inst.rank
    claimants = {}
    for i, rot in enumerate(ordered):
        for ecut, _, p in rot.triples:
            threshold = rank[p][ecut]
            for e in phase1_table.lists[p]:
                if rank[p][e] > threshold:
                    claimants.setdefault((e, p), []).append((threshold, i))
    for pair in claimants:
        claimants[pair].sort(reverse=True)
    return claimants


def discover_rotations(inst, budget=None):
    """Explore every elimination order and assemble the rotation poset.

    Returns a RotationPoset, or None when the instance has no stable matching
    (Phase 1 fails or no branch completes).  Raises ExplorationBudgetExceeded
    when more than `budget` distinct tables are visited.
    """
    if budget is None:
        budget = exploration_budget()
    t0 = phase1(inst)
    if t0 is None:
        return None

    seen = set()
    rotations = {}  # triples -> Rotation
    reached_complete = False
    dead_branch = False

    stack = [t0]
    while stack:
        table = stack.pop()
        fp = table.fingerprint()
        if fp in seen:
            continue
        seen.add(fp)
        if len(seen) > budget:
            raise ExplorationBudgetExceeded(f"visited more than {budget} tables")
        if table.is_complete():
            reached_complete = True
            continue
        rots = exposed_rotations(table)
        if not rots:
            raise InternalInconsistency("non-singleton table with no exposed rotation")
        for rot in rots:
            rotations.setdefault(rot.triples, rot)
            child, _ = eliminate_with_removals(table, rot)
            if child is None:
                dead_branch = True
            else:
                stack.append(child)

    if not reached_complete:
        return None
    if dead_branch:
        # Phase 2 of a solvable instance never empties a list; reaching here
        # with reached_complete set would contradict the downset theory.
        raise InternalInconsistency("elimination branch died on a solvable instance")

    ordered = sorted(rotations.values())
    n2 = inst.num_people
    if len(ordered) > (n2 // 2) * (n2 - 1):
        raise InternalInconsistency("rotation count exceeds the n(2n-1) bound")

    dual_of = {}
    index = {rot.triples: i for i, rot in enumerate(ordered)}
    for i, rot in enumerate(ordered):
        j = index.get(Rotation(rot.dual_triples()).triples)
        if j is not None:
            dual_of[i] = j
    for i, j in dual_of.items():
        if dual_of.get(j) != i or i == j:
            raise InternalInconsistency("dual pairing is not a fixed-point-free involution")

    claimants = _static_attribution(inst, t0, ordered)
    remover = {}
    edges = set()
    for i, rot in enumerate(ordered):
        for e, h, s in rot.triples:
            row = inst.prefs[e]
            for p in row[: row.index(s)]:
                if p == h:
                    continue
                # the removal must happen before rotation i is exposed, so
                # rotation i itself is never the remover of its own pair
                options = [r for _, r in claimants.get((e, p), ()) if r != i]
                if options:
                    remover[(e, p)] = options[0]
                    edges.add((options[0], i))

    return RotationPoset(ordered, dual_of, remover, t0, edges)


class RotationGraph:
    """G(I): vertices are non-singleton rotations, indexed as in the poset."""

    def __init__(self, vertices, edges):
        self.vertices = tuple(vertices)
        self.edges = frozenset(frozenset(e) for e in edges)

    def has_edge(self, i, j):
        return frozenset((i, j)) in self.edges


def rotation_graph(poset):
    """Edge (R1, R2) iff Pi(R1^d, R2); every dual pair is an edge."""
    verts = poset.non_singletons()
    edges = set()
    for i in verts:
        if poset.pi(poset.dual_of[i], i):
            raise InternalInconsistency("Pi(R^d, R) would exclude R from every maximal IS")
        for j in verts:
            if i < j and (poset.pi(poset.dual_of[i], j) or poset.pi(poset.dual_of[j], i)):
                edges.add((i, j))
    return RotationGraph(verts, edges)


def rotation_graph_existential(poset):
    """Second route to G(I): edge iff some rotation R has Pi*(R, R1) and
    Pi*(R^d, R2).  Kept as an independent check of the closed form."""
    verts = poset.non_singletons()
    edges = set()
    for i in verts:
        for j in verts:
            if i >= j:
                continue
            for r in verts:
                rd = poset.dual_of[r]
                if (poset.precedes(r, i) and poset.precedes(rd, j)) or (
                    poset.precedes(r, j) and poset.precedes(rd, i)
                ):
                    edges.add((i, j))
                    break
    return RotationGraph(verts, edges)


def attribution_consistency_check(inst, runs=10, seed=0, poset=None):
    """Replay `runs` random elimination orders and compare removal attribution.

    Records, for each pair (e, p) with p removed from e's list by truncating
    p's own list, the rotation that did it.  The uniqueness lemma promises a
    single remover for every pair that some rotation's exposure depends on;
    those are the keys of `poset.remover` and any disagreement — across runs
    or against the statically derived map — is reported as a conflict.
    """
    rng = random.Random(seed)
    if poset is None:
        poset = discover_rotations(inst)
    needed = poset.remover if poset is not None else {}
    merged = {}
    conflicts = []
    checked = 0
    for _ in range(runs):
        table = phase1(inst)
        if table is None:
            break
        while table is not None and not table.is_complete():
            rots = exposed_rotations(table)
            if not rots:
                raise InternalInconsistency("stuck table during replay")
            rot = rots[rng.randrange(len(rots))]
            table, truncations = eliminate_with_removals(table, rot)
            for s, x in truncations:
                key = (x, s)
                if key not in needed:
                    continue
                checked += 1
                prev = merged.setdefault(key, rot.triples)
                if prev != rot.triples:
                    conflicts.append((key, prev, rot.triples))
    if poset is not None:
        for key, triples in merged.items():
            static = poset.rotations[needed[key]].triples
            if static != triples:
                conflicts.append((key, static, triples))
    return AttributionReport(runs=runs, checked_pairs=checked, conflicts=conflicts)


def hasse_dot(poset):
    """Graphviz DOT text for the Hasse diagram of Pi*."""
    names = poset.names()
    lines = ["digraph hasse {", "  rankdir=BT;"]
    for i in range(len(poset.rotations)):
        shape = "doublecircle" if i in poset.singletons else "circle"
        lines.append(f'  "{names[i]}" [shape={shape}];')
    for a, b in sorted(poset.hasse_edges(), key=lambda e: (names[e[0]], names[e[1]])):
        lines.append(f'  "{names[a]}" -> "{names[b]}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def gofi_dot(poset, graph=None):
    """Graphviz DOT text for G(I)."""
    if graph is None:
        graph = rotation_graph(poset)
    names = poset.names()
    lines = ["graph gofi {"]
    for i in graph.vertices:
        lines.append(f'  "{names[i]}";')
    pairs = sorted(tuple(sorted(e, key=lambda i: names[i])) for e in graph.edges)
    for a, b in sorted(pairs, key=lambda e: (names[e[0]], names[e[1]])):
        lines.append(f'  "{names[a]}" -- "{names[b]}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
