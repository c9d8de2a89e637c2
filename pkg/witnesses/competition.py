"""
Competition graphs, witness verification and the exact competition-number
oracle.

The oracle searches edge clique covers with an injective prey assignment:
cliques are chosen for the lowest uncovered edge, each clique gets a base
vertex or a fresh added vertex as prey, and the member-to-prey digraph is
kept acyclic with per-vertex reachability bitmasks.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Optional

import networkx as nx

from .conf import resolve
from .exceptions import OracleCapExceeded
from .graphs import (
    Digraph, Graph, added_name, edge_of, sort_edges, sort_vertices, vertex_key,
)
from .structure import Clique

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TraceStep:
    step: str
    vertices: tuple = ()
    consumed: tuple = ()
    produced: tuple = ()
    detail: str = ''

    def relabel(self, mapping: dict) -> 'TraceStep':
        def rename(vs):
            return tuple(mapping.get(v, v) for v in vs)
        return replace(
            self, vertices=rename(self.vertices), consumed=rename(self.consumed), produced=rename(self.produced),
        )


@dataclass(frozen=True)
class Witness:
    """An acyclic digraph whose competition graph is the base graph plus `added` isolated vertices."""
    digraph: Digraph
    base: tuple
    added: tuple
    trace: tuple = ()

    @property
    def k(self) -> int:
        return len(self.added)

    def with_steps(self, *steps) -> 'Witness':
        return replace(self, trace=self.trace + tuple(steps))

    def common_prey_of(self, clique) -> tuple:
        members = list(clique)
        return tuple(
            a for a in self.added
            if all(a in self.digraph.out_neighbors(m) for m in members)
        )

    def relabel_added(self, start: int = 0) -> 'Witness':
        mapping = {old: added_name(start + i) for i, old in enumerate(self.added)}
        return Witness(
            digraph=self.digraph.relabel(mapping),
            base=self.base,
            added=tuple(mapping[a] for a in self.added),
            trace=tuple(s.relabel(mapping) for s in self.trace),
        )


def competition_graph(d: Digraph) -> Graph:
    edges = set()
    for v in d.vertices:
        preds = d.in_neighbors(v)
        for i in range(len(preds)):
            for j in range(i + 1, len(preds)):
                edges.add(edge_of(preds[i], preds[j]))
    return Graph(d.vertices, sort_edges(edges))


def is_acyclic(d: Digraph):
    """Return (True, topological order) or (False, a directed cycle)."""
    if nx.is_directed_acyclic_graph(d.nx):
        return True, tuple(nx.lexicographical_topological_sort(d.nx, key=vertex_key))
    return False, tuple(u for u, _ in nx.find_cycle(d.nx))


@dataclass(frozen=True)
class CommonPreyCheck:
    clique: tuple
    vertex: object
    holds: bool
    missing_members: tuple


@dataclass(frozen=True)
class VerificationReport:
    vertex_sets_consistent: bool
    acyclic: bool
    cycle: tuple
    competition_graph_matches: bool
    missing_edges: tuple
    extra_edges: tuple
    added_isolated: bool
    non_isolated_added: tuple
    common_out_neighbor: Optional[CommonPreyCheck] = None

    @property
    def passes(self) -> bool:
        return (
            self.vertex_sets_consistent
            and self.acyclic
            and self.competition_graph_matches
            and self.added_isolated
            and (self.common_out_neighbor is None or self.common_out_neighbor.holds)
        )


def verify_witness(g: Graph, w: Witness, expected_common_prey=None) -> VerificationReport:
    d = w.digraph
    base, added = set(w.base), set(w.added)
    consistent = (
        base == set(g.vertices)
        and not base & added
        and base | added == set(d.vertices)
    )
    acyclic, order_or_cycle = is_acyclic(d)

    produced = competition_graph(d)
    base_edges = {e for e in produced.edges if e[0] in base and e[1] in base}
    touching_added = sort_vertices({v for e in produced.edges for v in e if v in added})

    check = None
    if expected_common_prey is not None:
        clique, vertex = expected_common_prey
        members = sort_vertices(clique)
        missing = tuple(
            m for m in members if m not in d or vertex not in d or vertex not in d.out_neighbors(m)
        )
        check = CommonPreyCheck(members, vertex, not missing, missing)

    report = VerificationReport(
        vertex_sets_consistent=consistent,
        acyclic=acyclic,
        cycle=() if acyclic else order_or_cycle,
        competition_graph_matches=base_edges == g.edge_set,
        missing_edges=sort_edges(g.edge_set - base_edges),
        extra_edges=sort_edges(base_edges - g.edge_set),
        added_isolated=not touching_added,
        non_isolated_added=touching_added,
        common_out_neighbor=check,
    )
    if not report.passes:
        logger.debug('Witness verification failed: %s', report)
    return report


@dataclass(frozen=True)
class CliqueCoverAssignment:
    """Cliques covering E(G) with injective prey; `prey[i]` is the prey of `cliques[i]`."""
    cliques: tuple
    prey: tuple
    added: tuple

    def to_witness(self, g: Graph) -> Witness:
        arcs = {(m, p) for clique, p in zip(self.cliques, self.prey) for m in clique.members}
        digraph = Digraph(g.vertices, ()).with_arcs(arcs, self.added)
        return Witness(
            digraph=digraph,
            base=g.vertices,
            added=self.added,
            trace=(TraceStep('oracle', vertices=g.vertices, produced=self.added,
                             detail=f'{len(self.cliques)} cliques'),),
        )


@dataclass(frozen=True)
class OracleResult:
    exact: Optional[int]
    lower: int
    upper: Optional[int]
    witness: Optional[Witness]
    nodes: int
    exhausted: bool = False

    @property
    def is_exact(self) -> bool:
        return self.exact is not None


class _Exhausted(Exception):
    pass


class _CoverSearch:
    def __init__(self, g: Graph, budget: int):
        self.g = g
        self.n = len(g.vertices)
        self.budget = budget
        self.nodes = 0
        self.base_cap = max(self.n - 2, 0)
        index = {v: i for i, v in enumerate(g.vertices)}
        edge_index = {e: i for i, e in enumerate(g.edges)}

        cliques = [Clique.of(c) for c in nx.enumerate_all_cliques(g.nx) if len(c) >= 2]
        cliques.sort(key=lambda c: (-len(c), c.sort_key()))
        self.cliques = cliques
        self.member_mask = []
        self.edge_mask = []
        for c in cliques:
            self.member_mask.append(sum(1 << index[v] for v in c.members))
            self.edge_mask.append(sum(1 << edge_index[e] for e in c.edges()))

        self.covers = [[] for _ in g.edges]
        self.compat = [0] * len(g.edges)
        for ci, mask in enumerate(self.edge_mask):
            bits = mask
            while bits:
                low = bits & -bits
                ei = low.bit_length() - 1
                self.covers[ei].append(ci)
                self.compat[ei] |= mask
                bits ^= low

    def cover_lower_bound(self, uncovered: int) -> int:
        """Edges pairwise outside any common clique each need their own clique."""
        count = 0
        while uncovered:
            low = uncovered & -uncovered
            count += 1
            uncovered &= ~self.compat[low.bit_length() - 1]
        return count

    def root_lower_bound(self) -> int:
        if not self.g.edges:
            return 0
        theta = self.cover_lower_bound((1 << len(self.g.edges)) - 1)
        # The first vertex of a topological order has no prey, so it is added unless G has an isolated vertex.
        floor = 1 if all(self.g.degree(v) for v in self.g.vertices) else 0
        return max(floor, theta - self.base_cap)

    def solve(self, k: int) -> Optional[CliqueCoverAssignment]:
        self.k = k
        self.choices = []
        found = self._search((1 << len(self.g.edges)) - 1, [0] * self.n, 0, 0, 0)
        if not found:
            return None
        added = tuple(added_name(i) for i in range(k))
        cliques, prey = [], []
        for ci, kind, value in self.choices:
            cliques.append(self.cliques[ci])
            prey.append(self.g.vertices[value] if kind == 'base' else added[value])
        return CliqueCoverAssignment(tuple(cliques), tuple(prey), added)

    def _search(self, uncovered, reach, used, base_used, added_used) -> bool:
        self.nodes += 1
        if self.nodes > self.budget:
            raise _Exhausted
        if not uncovered:
            return True
        need = self.cover_lower_bound(uncovered)
        if need > (self.k - added_used) + (self.base_cap - base_used):
            return False

        first = (uncovered & -uncovered).bit_length() - 1
        for ci in self.covers[first]:
            members = self.member_mask[ci]
            rest = uncovered & ~self.edge_mask[ci]
            if base_used < self.base_cap:
                for p in range(self.n):
                    bit = 1 << p
                    if used & bit or members & bit or reach[p] & members:
                        continue
                    gained = bit | reach[p]
                    new_reach = [
                        r | gained if (members >> u) & 1 or r & members else r
                        for u, r in enumerate(reach)
                    ]
                    self.choices.append((ci, 'base', p))
                    if self._search(rest, new_reach, used | bit, base_used + 1, added_used):
                        return True
                    self.choices.pop()
            if added_used < self.k:
                self.choices.append((ci, 'added', added_used))
                if self._search(rest, reach, used, base_used, added_used + 1):
                    return True
                self.choices.pop()
        return False


def exact_competition_number(g: Graph, max_k: Optional[int] = None, budget: Optional[int] = None,
                             max_vertices: Optional[int] = None, upper_hint: Optional[Witness] = None) -> OracleResult:
    """
    Smallest k admitting a witness, by iterative deepening from a proven
    lower bound. On budget exhaustion the proven bracket is returned instead
    of an exact value. A verified `upper_hint` closes the search early once
    the deepening reaches its size.
    """
    max_vertices = resolve(max_vertices, 'ORACLE_MAX_VERTICES')
    if len(g.vertices) > max_vertices:
        raise OracleCapExceeded(f'Oracle accepts at most {max_vertices} vertices, got {len(g.vertices)}.')
    budget = resolve(budget, 'ORACLE_BUDGET')
    max_k = resolve(max_k, 'ORACLE_MAX_K')
    if max_k is None:
        max_k = len(g.edges)

    hint_k = None
    if upper_hint is not None and verify_witness(g, upper_hint).passes:
        hint_k = upper_hint.k

    search = _CoverSearch(g, budget)
    lower = search.root_lower_bound()
    logger.debug('Oracle on n=%d m=%d: root lower bound %d.', len(g.vertices), len(g.edges), lower)

    for k in range(lower, max_k + 1):
        if hint_k is not None and k >= hint_k:
            return OracleResult(hint_k, hint_k, hint_k, upper_hint, search.nodes)
        try:
            assignment = search.solve(k)
        except _Exhausted:
            logger.info('Oracle budget of %d nodes exhausted at k=%d.', budget, k)
            return OracleResult(None, k, hint_k, upper_hint if hint_k is not None else None,
                                search.nodes, exhausted=True)
        if assignment is not None:
            return OracleResult(k, k, k, assignment.to_witness(g), search.nodes)
    return OracleResult(None, max(lower, max_k + 1), hint_k, upper_hint if hint_k is not None else None, search.nodes)
