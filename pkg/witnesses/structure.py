"""
Structural analysis of graphs: holes, maximal cliques, chordality, the
hypothesis report consumed by the constructions, and the combinatorial
selectors the constructions rely on.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

import networkx as nx

from .conf import resolve
from .exceptions import (
    BudgetExceeded, LemmaCondViolation, PreconditionViolation,
)
from .graphs import (
    Cycle, Graph, canonical_cycle, connected_components, cut_vertices,
    edge_of, is_connected, shortest_path_avoiding, sort_edges, sort_vertices,
    vertex_key,
)

logger = logging.getLogger(__name__)

LITERAL = 'literal'
RESTRICTED = 'restricted'
READINGS = (LITERAL, RESTRICTED)

CONDITION_A = 'a'
CONDITION_B = 'b'

WINDOW_BELOW = 'below'
WINDOW_INTERIOR = 'interior'
WINDOW_TOP = 'top'
WINDOW_ABOVE = 'above'


def graph_payload(g: Graph) -> dict:
    return {'vertices': list(g.vertices), 'edges': [list(e) for e in g.edges]}


@dataclass(frozen=True)
class Clique:
    members: tuple

    @classmethod
    def of(cls, vertices) -> 'Clique':
        return cls(sort_vertices(vertices))

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    @property
    def vertex_set(self) -> frozenset:
        return frozenset(self.members)

    @property
    def is_non_edge(self) -> bool:
        return len(self.members) >= 3

    def edges(self) -> tuple:
        m = self.members
        return sort_edges((m[i], m[j]) for i in range(len(m)) for j in range(i + 1, len(m)))

    def contains_edge(self, e) -> bool:
        return e[0] in self.vertex_set and e[1] in self.vertex_set

    def without(self, v) -> 'Clique':
        return Clique(tuple(u for u in self.members if u != v))

    def sort_key(self):
        return tuple(vertex_key(v) for v in self.members)


def enumerate_holes(g: Graph, max_holes: Optional[int] = None, max_nodes: Optional[int] = None,
                    limit: Optional[int] = None) -> list:
    """
    All chordless cycles of length at least 4, canonical and sorted.

    Induced paths are grown from each vertex s towards strictly larger
    vertices; a path closes into a hole when its new end is adjacent to s.
    `limit` stops quietly after that many holes; the budgets raise instead.
    """
    max_holes = resolve(max_holes, 'HOLE_LIMIT')
    max_nodes = resolve(max_nodes, 'HOLE_SEARCH_NODES')
    rank = {v: i for i, v in enumerate(g.vertices)}
    adj = g.adjacency
    holes = []
    nodes = 0

    class _Done(Exception):
        pass

    def extend(path, on_path):
        nonlocal nodes
        s, last = path[0], path[-1]
        for x in g.neighbors(last):
            if rank[x] <= rank[s] or x in on_path:
                continue
            nodes += 1
            if nodes > max_nodes:
                raise BudgetExceeded(
                    f'Hole search exceeded {max_nodes} search nodes.',
                    instance=graph_payload(g),
                )
            if any(x in adj[y] for y in path[1:-1]):
                continue
            if x in adj[s]:
                if len(path) >= 3 and rank[path[1]] < rank[x]:
                    holes.append(Cycle(tuple(path) + (x,)))
                    if limit is not None and len(holes) >= limit:
                        raise _Done
                    if len(holes) > max_holes:
                        raise BudgetExceeded(
                            f'Graph has more than {max_holes} holes.',
                            instance=graph_payload(g),
                        )
                continue
            path.append(x)
            on_path.add(x)
            extend(path, on_path)
            path.pop()
            on_path.discard(x)

    try:
        for s in g.vertices:
            for p1 in g.neighbors(s):
                if rank[p1] > rank[s]:
                    extend([s, p1], {s, p1})
    except _Done:
        pass

    holes.sort(key=Cycle.sort_key)
    logger.debug('Enumerated %d holes in %d search nodes.', len(holes), nodes)
    return holes


def enumerate_maximal_cliques(g: Graph, limit: Optional[int] = None) -> list:
    limit = resolve(limit, 'CLIQUE_LIMIT')
    cliques = []
    for members in nx.find_cliques(g.nx):
        cliques.append(Clique.of(members))
        if len(cliques) > limit:
            raise BudgetExceeded(
                f'Graph has more than {limit} maximal cliques.',
                instance=graph_payload(g),
            )
    cliques.sort(key=Clique.sort_key)
    return cliques


def find_triangle(g: Graph) -> Optional[Clique]:
    adj = g.adjacency
    for u, v in g.edges:
        common = [w for w in adj[u] & adj[v] if vertex_key(w) > vertex_key(v)]
        if common:
            return Clique.of((u, v, min(common, key=vertex_key)))
    return None


def maximum_cardinality_search(g: Graph) -> list:
    weight = {v: 0 for v in g.vertices}
    visited = []
    remaining = set(g.vertices)
    while remaining:
        v = min(remaining, key=lambda u: (-weight[u], vertex_key(u)))
        remaining.discard(v)
        visited.append(v)
        for w in g.adjacency[v]:
            if w in remaining:
                weight[w] += 1
    return visited


def lex_bfs(g: Graph) -> list:
    label = {v: [] for v in g.vertices}
    visited = []
    remaining = set(g.vertices)
    number = len(g.vertices)
    while remaining:
        best = max(label[u] for u in remaining)
        v = min((u for u in remaining if label[u] == best), key=vertex_key)
        remaining.discard(v)
        visited.append(v)
        for w in g.adjacency[v]:
            if w in remaining:
                label[w].append(number)
        number -= 1
    return visited


ELIMINATION_STRATEGIES = {
    'mcs': maximum_cardinality_search,
    'lex-bfs': lex_bfs,
}


def is_perfect_elimination_order(g: Graph, order) -> bool:
    position = {v: i for i, v in enumerate(order)}
    for v in order:
        later = [w for w in g.adjacency[v] if position[w] > position[v]]
        for i in range(len(later)):
            for j in range(i + 1, len(later)):
                if not g.has_edge(later[i], later[j]):
                    return False
    return True


def is_chordal(g: Graph, strategy: Optional[str] = None):
    """
    Return (True, perfect elimination order) or (False, a hole).

    The order lists vertices so that each vertex's later neighbours form a
    clique.
    """
    strategy = resolve(strategy, 'ELIMINATION_ORDER')
    order = list(reversed(ELIMINATION_STRATEGIES[strategy](g)))
    if is_perfect_elimination_order(g, order):
        return True, tuple(order)
    return False, enumerate_holes(g, limit=1)[0]


def omega_window(omega: int, h: int) -> str:
    if omega < 2:
        return WINDOW_BELOW
    if omega == h + 1:
        return WINDOW_TOP
    if omega <= h:
        return WINDOW_INTERIOR
    return WINDOW_ABOVE


@dataclass(frozen=True)
class HypothesisReport:
    """
    Holes, maximal cliques and the hypothesis flags of a graph.

    `non_edge_clique` is the unique maximal clique with at least three
    vertices, or None when there is none or more than one.
    """
    holes: tuple
    maximal_cliques: tuple
    omega: int
    non_edge_clique: Optional[Clique]
    holes_pairwise_edge_disjoint: bool
    at_most_one_non_edge_maximal_clique: bool
    connected: bool

    @property
    def h(self) -> int:
        return len(self.holes)

    @property
    def non_edge_cliques(self) -> tuple:
        return tuple(c for c in self.maximal_cliques if c.is_non_edge)

    @property
    def omega_window(self) -> str:
        return omega_window(self.omega, self.h)

    @property
    def hypotheses_hold(self) -> bool:
        return (
            self.holes_pairwise_edge_disjoint
            and self.at_most_one_non_edge_maximal_clique
            and self.connected
        )

    @property
    def passes(self) -> bool:
        return self.hypotheses_hold and 2 <= self.omega <= self.h + 1

    def holes_containing(self, v) -> tuple:
        return tuple(H for H in self.holes if v in H.vertex_set)


def validate_hypotheses(g: Graph) -> HypothesisReport:
    holes = enumerate_holes(g)
    cliques = enumerate_maximal_cliques(g)
    omega = max((len(c) for c in cliques), default=0)

    edge_use = Counter(e for H in holes for e in H.edges())
    disjoint = all(count == 1 for count in edge_use.values())

    non_edge = [c for c in cliques if c.is_non_edge]
    report = HypothesisReport(
        holes=tuple(holes),
        maximal_cliques=tuple(cliques),
        omega=omega,
        non_edge_clique=non_edge[0] if len(non_edge) == 1 else None,
        holes_pairwise_edge_disjoint=disjoint,
        at_most_one_non_edge_maximal_clique=len(non_edge) <= 1,
        connected=is_connected(g),
    )
    logger.debug(
        'Hypotheses: n=%d h=%d omega=%d window=%s hold=%s',
        len(g), report.h, omega, report.omega_window, report.hypotheses_hold,
    )
    return report


@dataclass(frozen=True)
class ChordedCycleAnalysis:
    verdict: str
    shared_edge: tuple
    triangle: Optional[Clique] = None
    holes: tuple = ()

    TRIANGLE = 'triangle'
    TWO_HOLES = 'two_holes_sharing_edge'


def _cycle_sequence(c) -> tuple:
    return c.vertices if isinstance(c, Cycle) else tuple(c)


def analyze_chorded_cycle(g: Graph, c, chord) -> ChordedCycleAnalysis:
    seq = _cycle_sequence(c)
    n = len(seq)
    if n < 4 or not Cycle(seq).is_cycle_of(g):
        raise PreconditionViolation('Expected a cycle of length at least 4 in the graph.')
    u, v = chord
    if not g.has_edge(u, v) or u not in seq or v not in seq:
        raise PreconditionViolation(f'{u!r}-{v!r} is not an edge between cycle vertices.')
    i, j = sorted((seq.index(u), seq.index(v)))
    if j - i in (1, n - 1):
        raise PreconditionViolation(f'{u!r}-{v!r} joins consecutive cycle vertices.')

    chord = edge_of(u, v)
    a, b = seq[i], seq[j]
    sections = (seq[i:j + 1], seq[j:] + seq[:i + 1])
    paths = []
    for section in sections:
        sub = g.induced(section).without_edges([chord])
        paths.append(shortest_path_avoiding(sub, a, {b}))

    for path in paths:
        if len(path) == 3:
            return ChordedCycleAnalysis(
                verdict=ChordedCycleAnalysis.TRIANGLE, shared_edge=chord, triangle=Clique.of(path),
            )
    return ChordedCycleAnalysis(
        verdict=ChordedCycleAnalysis.TWO_HOLES,
        shared_edge=chord,
        holes=tuple(Cycle(canonical_cycle(p)) for p in paths),
    )


def _require_clique(report: HypothesisReport) -> Clique:
    if report.non_edge_clique is None:
        raise PreconditionViolation('The graph has no unique non-edge maximal clique.')
    return report.non_edge_clique


def is_hole_by_clique_criterion(report: HypothesisReport, c) -> bool:
    K = _require_clique(report)
    if not report.hypotheses_hold:
        raise PreconditionViolation('Hypothesis flags do not all pass.')
    return len(K.vertex_set & set(_cycle_sequence(c))) <= 2


def k_avoiding_path_exists(g: Graph, K: Clique, v, H: Cycle, reading: str = RESTRICTED) -> bool:
    """
    Whether a path of length >= 1 leads from clique vertex `v` to a vertex of
    `H` with no internal vertex on K and without being a single edge of K.

    The restricted reading also forbids ending on K at a vertex other than v.
    """
    clique = K.vertex_set
    if v not in clique:
        raise PreconditionViolation(f'{v!r} is not a vertex of the clique.')
    hole = H.vertex_set
    adj = g.adjacency

    reached = set()
    frontier = [w for w in adj[v] if w not in clique]
    reached.update(frontier)
    while frontier:
        x = frontier.pop()
        for w in adj[x]:
            if w not in clique and w not in reached:
                reached.add(w)
                frontier.append(w)

    if reached & hole:
        return True
    if reading == LITERAL:
        return any(adj[x] & reached for x in (hole & clique) - {v})
    return False


def _separated_by(g: Graph, v, group_a, group_b) -> bool:
    rest = g.without_vertices([v])
    component = {}
    for index, members in enumerate(connected_components(rest)):
        for u in members:
            component[u] = index
    a = {component[u] for u in group_a if u != v}
    b = {component[u] for u in group_b if u != v}
    return not (a & b)


@dataclass(frozen=True)
class AvoidanceGraph:
    clique_side: tuple
    hole_side: tuple
    multiplicity: dict = field(hash=False)
    reading: str = RESTRICTED

    def vertex_degree(self, v) -> int:
        return sum(self.multiplicity[(v, j)] for j in range(len(self.hole_side)))

    def hole_degree(self, j: int) -> int:
        return sum(self.multiplicity[(v, j)] for v in self.clique_side)

    def vertex_degrees(self) -> dict:
        return {v: self.vertex_degree(v) for v in self.clique_side}

    def hole_degrees(self) -> list:
        return [self.hole_degree(j) for j in range(len(self.hole_side))]


def build_avoidance_graph(g: Graph, report: HypothesisReport, reading: str = RESTRICTED) -> AvoidanceGraph:
    K = _require_clique(report)
    cuts = cut_vertices(g)
    multiplicity = {}
    for v in K.members:
        for j, H in enumerate(report.holes):
            if not k_avoiding_path_exists(g, K, v, H, reading):
                r = 0
            elif v in cuts and _separated_by(g, v, K.members, H.vertices):
                r = 2
            else:
                r = 1
            multiplicity[(v, j)] = r
    return AvoidanceGraph(K.members, report.holes, multiplicity, reading)


def _check_selector_preconditions(report: HypothesisReport) -> Clique:
    K = _require_clique(report)
    if not report.hypotheses_hold:
        raise PreconditionViolation('Hypothesis flags do not all pass.')
    if not (len(K) == report.h + 1 == report.omega):
        raise PreconditionViolation(
            f'Expected |K| = omega = h + 1, got |K|={len(K)} omega={report.omega} h={report.h}.'
        )
    return K


def select_clique_vertex(g: Graph, report: HypothesisReport):
    """
    First clique vertex (in identifier order) with no K-avoiding path to any
    hole, returned with condition "a"; otherwise the first vertex on an edge
    shared by K and a hole that lies on no other hole, with condition "b".
    """
    K = _check_selector_preconditions(report)

    if logger.isEnabledFor(logging.DEBUG):
        avoidance = build_avoidance_graph(g, report, RESTRICTED)
        logger.debug('Avoidance degrees: clique=%s holes=%s',
                     avoidance.vertex_degrees(), avoidance.hole_degrees())

    for v in K.members:
        if not any(k_avoiding_path_exists(g, K, v, H, LITERAL) for H in report.holes):
            return v, CONDITION_A

    for v in K.members:
        containing = report.holes_containing(v)
        if len(containing) != 1:
            continue
        if any(v in e and K.contains_edge(e) for e in containing[0].edges()):
            return v, CONDITION_B

    raise LemmaCondViolation(
        'No vertex of K satisfies condition (a) or (b).',
        instance={
            'graph': graph_payload(g),
            'clique': list(K.members),
            'holes': [list(H.vertices) for H in report.holes],
        },
    )


@dataclass(frozen=True)
class EdgeRemovalReport:
    edge: tuple
    holes_after: tuple
    new_holes: tuple
    h_before: int
    edge_in_clique: bool
    host_hole: Cycle
    clique: Optional[Clique]

    @property
    def clique_edge_conclusion_holds(self) -> bool:
        return len(self.holes_after) < self.h_before or self.edge_in_clique

    def new_hole_has_expected_form(self, hole: Cycle) -> bool:
        if self.clique is None:
            return False
        vi, vj = self.edge
        extra = hole.vertex_set - self.host_hole.vertex_set
        if len(extra) != 1 or not hole.vertex_set >= self.host_hole.vertex_set:
            return False
        (vk,) = extra
        if vk not in self.clique.vertex_set:
            return False
        expected = (set(self.host_hole.edges()) - {self.edge}) | {edge_of(vi, vk), edge_of(vj, vk)}
        return set(hole.edges()) == expected

    @property
    def new_holes_have_expected_form(self) -> bool:
        return all(self.new_hole_has_expected_form(H) for H in self.new_holes)


def edge_removal_hole_report(g: Graph, report: HypothesisReport, e) -> EdgeRemovalReport:
    e = g.require_edge(e)
    hosts = [H for H in report.holes if e in H.edges()]
    if not hosts:
        raise PreconditionViolation(f'Edge {e[0]!r}-{e[1]!r} lies on no hole.')
    after = enumerate_holes(g.without_edges([e]))
    before = set(report.holes)
    K = report.non_edge_clique
    return EdgeRemovalReport(
        edge=e,
        holes_after=tuple(after),
        new_holes=tuple(H for H in after if H not in before),
        h_before=report.h,
        edge_in_clique=K is not None and K.contains_edge(e),
        host_hole=hosts[0],
        clique=K,
    )


@dataclass(frozen=True)
class Lemma3Statistics:
    vertex_degrees: dict
    hole_degrees: dict
    selected: tuple

    def hole_bound_holds(self, reading: str) -> bool:
        return all(d <= 2 for d in self.hole_degrees[reading])

    def low_degree_vertex_exists(self, reading: str) -> bool:
        return any(d <= 1 for d in self.vertex_degrees[reading].values())


def lemma3_statistics(g: Graph, report: HypothesisReport) -> Lemma3Statistics:
    """
    Avoidance-graph degrees under both readings plus the selector's choice.
    Degree-bound violations are findings: they are logged, never raised.
    """
    vertex_degrees, hole_degrees = {}, {}
    for reading in READINGS:
        avoidance = build_avoidance_graph(g, report, reading)
        vertex_degrees[reading] = avoidance.vertex_degrees()
        hole_degrees[reading] = avoidance.hole_degrees()
    stats = Lemma3Statistics(vertex_degrees, hole_degrees, select_clique_vertex(g, report))

    for reading in READINGS:
        if not stats.hole_bound_holds(reading):
            logger.warning(
                'Finding (%s reading): hole degree above 2 on n=%d h=%d, degrees %s.',
                reading, len(g), report.h, hole_degrees[reading],
            )
        if not stats.low_degree_vertex_exists(reading):
            logger.info(
                'Finding (%s reading): no clique vertex of degree <= 1 on n=%d h=%d.',
                reading, len(g), report.h,
            )
    return stats
