"""
Witness builders.

Every builder returns a `Witness` and, with `verify_each_step` on, checks
each intermediate digraph against the graph it is meant to realize. Facts
the constructions depend on (component counts, tree sides, hole counts) are
checked at runtime and raise `ConstructionAssertion` with the instance
attached.
"""
from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, replace
from typing import Optional

import networkx as nx

from .competition import (
    TraceStep, Witness, competition_graph, exact_competition_number, is_acyclic,
    verify_witness,
)
from .conf import resolve
from .exceptions import (
    AssignmentSearchExhausted, ConstructionAssertion, HypothesisAnomaly,
    OracleCapExceeded, PreconditionViolation, UnsupportedGraphClass,
)
from .graphs import (
    Digraph, Graph, added_name, connected_components, edge_key, is_connected,
    is_cut_edge, is_tree, is_triangle_free, sort_vertices, vertex_key,
)
from .structure import (
    CONDITION_A, Clique, graph_payload, is_chordal, select_clique_vertex,
    validate_hypotheses,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BuilderOptions:
    verify_each_step: Optional[bool] = None
    vertex_order_strategy: Optional[str] = None
    fresh_start: int = 0
    seed: Optional[int] = None
    restarts: Optional[int] = None


def _instance(g: Graph, **extra) -> dict:
    return {'graph': graph_payload(g), **extra}


class WitnessBuilder:
    def __init__(self, options: Optional[BuilderOptions] = None):
        self.options = options or BuilderOptions()
        self.verify_each_step = resolve(self.options.verify_each_step, 'VERIFY_EACH_STEP')
        self.strategy = resolve(self.options.vertex_order_strategy, 'ELIMINATION_ORDER')
        self.restarts = resolve(self.options.restarts, 'ORDER_RESTARTS')
        self.rng = random.Random(resolve(self.options.seed, 'SEED'))
        self._fresh = itertools.count(self.options.fresh_start)
        self.common_prey = None

    def fresh(self) -> str:
        return added_name(next(self._fresh))

    def check(self, g: Graph, w: Witness, step: str, common_prey=None) -> Witness:
        if not self.verify_each_step:
            return w
        return self.certify(g, w, step, common_prey)

    def certify(self, g: Graph, w: Witness, step: str, common_prey=None) -> Witness:
        report = verify_witness(g, w, common_prey)
        if not report.passes:
            raise ConstructionAssertion(
                f'Step {step} produced an invalid witness.',
                instance=_instance(g, step=step, missing=report.missing_edges, extra=report.extra_edges,
                                   acyclic=report.acyclic, added=list(w.added)),
            )
        return w

    def pad(self, w: Witness, count: int) -> Witness:
        """Add `count` unused added vertices."""
        extra = tuple(self.fresh() for _ in range(count))
        return replace(w, digraph=w.digraph.with_arcs((), extra), added=w.added + extra)

    def add_prey(self, w: Witness, members, prey=None) -> Witness:
        """Give `members` the common out-neighbour `prey`, a fresh added vertex when None."""
        new = prey is None
        if new:
            prey = self.fresh()
        arcs = [(m, prey) for m in members]
        return replace(
            w,
            digraph=w.digraph.with_arcs(arcs, (prey,) if new else ()),
            added=w.added + ((prey,) if new else ()),
        )

    def chordal(self, g: Graph) -> Witness:
        chordal, order = is_chordal(g, self.strategy)
        if not chordal:
            raise PreconditionViolation('Graph is not chordal.', instance=_instance(g, hole=list(order.vertices)))
        if not g.edges:
            w = Witness(Digraph(g.vertices, ()), g.vertices, (), (TraceStep('chordal', g.vertices),))
            return self.check(g, w, 'chordal')

        first = self.fresh()
        position = {v: i for i, v in enumerate(order)}
        arcs = set()
        for i, v in enumerate(order):
            later = [u for u in g.adjacency[v] if position[u] > i]
            if not later:
                continue
            prey = order[i - 1] if i > 0 else first
            arcs.update((m, prey) for m in [v] + later)
        w = Witness(
            digraph=Digraph(g.vertices, ()).with_arcs(arcs, (first,)),
            base=g.vertices,
            added=(first,),
            trace=(TraceStep('chordal', g.vertices, produced=(first,), detail=f'order={self.strategy}'),),
        )
        return self.check(g, w, 'chordal')

    def _candidate_orders(self, g: Graph):
        """Vertex orders listed prey-first; reversed search orders keep every suffix connected."""
        root = g.vertices[0]
        bfs = [root] + [v for _, v in nx.bfs_edges(g.nx, root, sort_neighbors=lambda nbrs: sorted(nbrs, key=vertex_key))]
        yield 'bfs', bfs[::-1]
        yield 'dfs', list(nx.dfs_preorder_nodes(g.nx, root))[::-1]
        core = nx.core_number(g.nx)
        yield 'degeneracy', sorted(g.vertices, key=lambda v: (core[v], vertex_key(v)))
        for attempt in range(self.restarts):
            order = list(g.vertices)
            self.rng.shuffle(order)
            yield f'random-{attempt}', order

    @staticmethod
    def _nested_prey_assignment(g: Graph, order) -> dict:
        """
        Assign base prey to edges: the vertex at position i may take an edge
        whose endpoints both sit later. Option sets are nested, so filling
        from the latest usable position backwards is optimal.
        """
        position = {v: i for i, v in enumerate(order)}
        ranked = sorted(g.edges, key=lambda e: (-min(position[e[0]], position[e[1]]), edge_key(e)))
        assignment = {}
        for i in range(len(order) - 3, -1, -1):
            for e in ranked:
                if e not in assignment and min(position[e[0]], position[e[1]]) > i:
                    assignment[e] = order[i]
                    break
        return assignment

    def triangle_free(self, g: Graph) -> Witness:
        if len(g.vertices) < 2 or not is_connected(g) or not is_triangle_free(g):
            raise PreconditionViolation(
                'Expected a connected triangle-free graph with at least two vertices.', instance=_instance(g),
            )
        n = len(g.vertices)
        k = len(g.edges) - n + 2
        for name, order in self._candidate_orders(g):
            assignment = self._nested_prey_assignment(g, order)
            if len(assignment) == n - 2:
                break
        else:
            raise AssignmentSearchExhausted(
                f'No vertex order gives {n - 2} base prey.', instance=_instance(g),
            )

        added = tuple(self.fresh() for _ in range(k))
        spare = iter(added)
        arcs = set()
        for e in g.edges:
            prey = assignment[e] if e in assignment else next(spare)
            arcs.update(((e[0], prey), (e[1], prey)))
        w = Witness(
            digraph=Digraph(g.vertices, ()).with_arcs(arcs, added),
            base=g.vertices,
            added=added,
            trace=(TraceStep('roberts', g.vertices, produced=added, detail=f'order={name}'),),
        )
        return self.check(g, w, 'roberts')

    def paste(self, w1: Witness, w2: Witness, consumed, sources) -> Witness:
        consumed, sources = tuple(consumed), tuple(sources)
        d1, d2 = w1.digraph, w2.digraph
        if set(d1.vertices) & set(d2.vertices):
            raise PreconditionViolation('Pasted digraphs must have disjoint vertex sets.')
        if len(consumed) != len(sources) or len(set(consumed)) != len(consumed) or len(set(sources)) != len(sources):
            raise PreconditionViolation('Need as many distinct consumed vertices as distinct sources.')
        c1, c2 = competition_graph(d1), competition_graph(d2)
        for i in consumed:
            if i not in d1 or c1.degree(i):
                raise PreconditionViolation(f'{i!r} is not an isolated vertex of the first competition graph.')
        for u in sources:
            if u not in d2 or d2.in_neighbors(u):
                raise PreconditionViolation(f'{u!r} has in-neighbours in the second digraph.')

        dropped = set(consumed)
        arcs = [a for a in d1.arcs if a[0] not in dropped and a[1] not in dropped]
        arcs += list(d2.arcs)
        for i, u in zip(consumed, sources):
            arcs += [(x, u) for x in d1.in_neighbors(i) if x not in dropped]
        vertices = [v for v in d1.vertices if v not in dropped] + list(d2.vertices)
        digraph = Digraph((), ()).with_arcs(arcs, vertices)

        pasted = Witness(
            digraph=digraph,
            base=sort_vertices([v for v in w1.base if v not in dropped] + list(w2.base)),
            added=tuple(a for a in w1.added if a not in dropped) + w2.added,
            trace=w1.trace + w2.trace + (
                TraceStep('paste', sort_vertices(vertices), consumed=consumed, produced=sources),
            ),
        )

        acyclic, _ = is_acyclic(digraph)
        expected = {e for e in c1.edges if e[0] not in dropped and e[1] not in dropped} | set(c2.edges)
        if not acyclic or set(competition_graph(digraph).edges) != expected:
            raise ConstructionAssertion(
                'Pasting broke acyclicity or the competition-graph identity.',
                instance={'consumed': list(consumed), 'sources': list(sources)},
            )
        return pasted

    def _designated_clique(self, g: Graph, report, clique) -> Clique:
        if clique is not None:
            K = Clique.of(clique)
        elif report.non_edge_clique is not None:
            K = report.non_edge_clique
        else:
            hole = report.holes[0]
            K = Clique.of(min(hole.edges(), key=edge_key))
        if len(K) != report.omega or not all(g.has_edge(u, v) for u, v in K.edges()):
            raise PreconditionViolation(
                f'{list(K.members)} is not a clique of size {report.omega}.', instance=_instance(g),
            )
        if K.is_non_edge and K != report.non_edge_clique:
            raise PreconditionViolation('Designated clique is not the non-edge maximal clique.')
        return K

    def theorem1(self, g: Graph, report=None, clique=None) -> Witness:
        report = report or validate_hypotheses(g)
        if not report.hypotheses_hold or report.h < 1 or report.omega != report.h + 1:
            raise PreconditionViolation(
                f'Expected connected hypothesis graph with omega = h + 1 and h >= 1, '
                f'got h={report.h} omega={report.omega} hold={report.hypotheses_hold}.',
                instance=_instance(g),
            )
        K = self._designated_clique(g, report, clique)
        if report.h == 1:
            w = self._theorem1_base(g, report, K)
        else:
            w = self._theorem1_step(g, report, K)
        self.common_prey = (K.members, w.added[-1])
        return self.check(g, w, 'theorem1', self.common_prey)

    def _theorem1_base(self, g: Graph, report, K: Clique) -> Witness:
        x, y = K.members
        e = (x, y)
        hole = report.holes[0]
        rest = g.without_edges([e])

        if e in hole.edges():
            subcase = 'hole-edge'
            sub = self.chordal(rest)
        elif g.degree(x) == 1 or g.degree(y) == 1:
            subcase = 'pendant'
            pendant = x if g.degree(x) == 1 else y
            core = g.without_vertices([pendant])
            inner = self.triangle_free(core)
            if inner.k != 2:
                raise ConstructionAssertion('Hole side needs exactly two added vertices.', instance=_instance(g))
            lone = Witness(Digraph((pendant,), ()), (pendant,), ())
            sub = self.paste(inner, lone, inner.added[-1:], (pendant,))
        else:
            subcase = 'cut-edge'
            if not is_cut_edge(g, e):
                raise ConstructionAssertion(f'{x!r}-{y!r} should be a cut edge.', instance=_instance(g))
            parts = connected_components(rest)
            hole_side = [p for p in parts if hole.vertex_set <= set(p)]
            tree_side = [p for p in parts if not hole.vertex_set <= set(p)]
            if len(parts) != 2 or len(hole_side) != 1:
                raise ConstructionAssertion('Removing the cut edge must leave two components.', instance=_instance(g))
            g1, g2 = rest.induced(hole_side[0]), rest.induced(tree_side[0])
            if not is_tree(g2) or len(g2) < 2:
                raise ConstructionAssertion('Tree side must be a tree with at least two vertices.', instance=_instance(g))
            tree = self.chordal(g2)
            sources = [s for s in tree.digraph.sources() if s in set(tree.base)][:2]
            inner = self.triangle_free(g1)
            if inner.k != 2 or len(sources) != 2:
                raise ConstructionAssertion('Pasting needs two added vertices and two sources.', instance=_instance(g))
            sub = self.paste(inner, tree, inner.added, sources)

        if sub.k != 1:
            raise ConstructionAssertion(f'Expected one added vertex for G - e, got {sub.k}.', instance=_instance(g))
        self.check(rest, sub, f'theorem1.base.{subcase}')
        w = self.add_prey(sub, (x, y))
        return w.with_steps(TraceStep(
            'theorem1.base', g.vertices, produced=w.added[-1:], detail=f'subcase={subcase} edge={x}-{y}',
        ))

    def _theorem1_step(self, g: Graph, report, K: Clique) -> Witness:
        v1, condition = select_clique_vertex(g, report)
        remaining = K.without(v1)
        clique_edges = [(v1, v) for v in remaining.members]

        if condition == CONDITION_A:
            hole = report.holes[0]
            u, w = min((e for e in hole.edges() if not K.contains_edge(e)), key=edge_key)
            split = g.without_edges([(u, w)] + clique_edges)
            parts = connected_components(split)
            if len(parts) != 2:
                raise ConstructionAssertion(
                    f'Expected two components after detaching {v1!r}, got {len(parts)}.', instance=_instance(g),
                )
            side1 = next(p for p in parts if v1 in p)
            side2 = next(p for p in parts if v1 not in p)
            g1, g2 = split.induced(side1), split.induced(side2)
            if not is_tree(g1) or u in side1 or w in side1:
                raise ConstructionAssertion(f'Component of {v1!r} must be a tree away from the hole.',
                                            instance=_instance(g))
            inner = self._recurse(g2, report, remaining, connected_required=True)

            tree = self.chordal(g1)
            if tree.k == 0:
                tree = self.pad(tree, 1)
            sources = tree.digraph.sources()
            if len(sources) < 2:
                raise ConstructionAssertion('Tree witness needs two in-sources.', instance=_instance(g))
            x, y = sources[0], sources[1]
            spare, common = inner.added
            star = self.paste(inner, tree, (spare,), (x,))
            star = replace(star, added=tree.added + (common,))
            star = self.add_prey(star, (v1,), common)
            star = self.add_prey(star, (u, w), y)
            detail = f'condition=a vertex={v1} edge={u}-{w}'
        else:
            split = g.without_edges(clique_edges)
            inner = self._recurse(split, report, remaining, connected_required=True)
            common = inner.added[-1]
            star = self.add_prey(inner, (v1,), common)
            detail = f'condition=b vertex={v1}'

        return star.with_steps(TraceStep('theorem1.step', g.vertices, produced=(star.added[-1],), detail=detail))

    def _recurse(self, g: Graph, parent, remaining: Clique, connected_required: bool) -> Witness:
        report = validate_hypotheses(g)
        if report.h != parent.h - 1:
            raise ConstructionAssertion(
                f'Sub-instance should have {parent.h - 1} holes, found {report.h}.',
                instance=_instance(g, clique=list(remaining.members)),
            )
        if (connected_required and not report.connected) or not report.hypotheses_hold:
            raise ConstructionAssertion('Sub-instance lost the hypotheses.', instance=_instance(g))
        if report.omega != len(remaining):
            raise ConstructionAssertion(
                f'Sub-instance clique number {report.omega} differs from {len(remaining)}.', instance=_instance(g),
            )
        return self.theorem1(g, report, remaining.members)

    def theorem2(self, g: Graph, report=None) -> Witness:
        report = report or validate_hypotheses(g)
        if not report.passes:
            raise PreconditionViolation(
                f'Expected connected hypothesis graph with 2 <= omega <= h + 1, '
                f'got h={report.h} omega={report.omega} hold={report.hypotheses_hold}.',
                instance=_instance(g),
            )
        h, omega = report.h, report.omega
        if omega == h + 1:
            w = self.theorem1(g, report)
            step = TraceStep('theorem2.top', g.vertices, detail=f'h={h} omega={omega}')
        elif omega == 2:
            if len(g.edges) != len(g.vertices) + h - 1:
                raise HypothesisAnomaly(
                    f'Triangle-free graph with {h} edge-disjoint holes has {len(g.edges)} edges, '
                    f'expected {len(g.vertices) + h - 1}.',
                    instance=_instance(g),
                )
            w = self.triangle_free(g)
            step = TraceStep('theorem2.triangle-free', g.vertices, produced=w.added, detail=f'h={h}')
        else:
            K = report.non_edge_clique
            x, y = min((e for e in report.holes[0].edges() if not K.contains_edge(e)), key=edge_key)
            smaller = g.without_edges([(x, y)])
            sub_report = validate_hypotheses(smaller)
            if (sub_report.h != h - 1 or sub_report.omega != omega
                    or not sub_report.hypotheses_hold):
                raise ConstructionAssertion(
                    f'Removing {x!r}-{y!r} gave h={sub_report.h} omega={sub_report.omega}.',
                    instance=_instance(g),
                )
            sub = self.theorem2(smaller, sub_report)
            w = self.add_prey(sub, (x, y))
            step = TraceStep('theorem2.remove-edge', g.vertices, produced=w.added[-1:], detail=f'edge={x}-{y}')

        if w.k > h - omega + 3:
            raise ConstructionAssertion(f'Built {w.k} added vertices, bound is {h - omega + 3}.',
                                        instance=_instance(g))
        return self.check(g, w.with_steps(step), 'theorem2')

    def auto(self, g: Graph, fallback_to_oracle: bool = False) -> Witness:
        if not g.edges or is_chordal(g, self.strategy)[0]:
            return self.chordal(g)
        if len(g.vertices) >= 2 and is_connected(g) and is_triangle_free(g):
            return self.triangle_free(g)
        report = validate_hypotheses(g)
        if report.passes:
            return self.theorem2(g, report)
        if fallback_to_oracle:
            try:
                result = exact_competition_number(g)
            except OracleCapExceeded:
                result = None
            if result is not None and result.witness is not None:
                return result.witness
        raise UnsupportedGraphClass(
            'Graph is neither chordal, connected triangle-free, nor in the hypothesis class.',
            instance=_instance(g, h=report.h, omega=report.omega),
        )


def _build(method: str, g: Graph, options, *args, **kwargs) -> Witness:
    builder = WitnessBuilder(options)
    w = getattr(builder, method)(g, *args, **kwargs)
    builder.certify(g, w, method, builder.common_prey if method == 'theorem1' else None)
    logger.info('Built %s witness with k=%d on n=%d.', method, w.k, len(g.vertices))
    return w.relabel_added()


def chordal_witness(g: Graph, options: Optional[BuilderOptions] = None) -> Witness:
    return _build('chordal', g, options)


def triangle_free_witness(g: Graph, options: Optional[BuilderOptions] = None) -> Witness:
    return _build('triangle_free', g, options)


def paste(w1: Witness, w2: Witness, consumed, sources, options: Optional[BuilderOptions] = None) -> Witness:
    return WitnessBuilder(options).paste(w1, w2, consumed, sources)


def theorem1_witness(g: Graph, report=None, clique=None, options: Optional[BuilderOptions] = None) -> Witness:
    return _build('theorem1', g, options, report, clique)


def theorem2_witness(g: Graph, report=None, options: Optional[BuilderOptions] = None) -> Witness:
    return _build('theorem2', g, options, report)


def auto_witness(g: Graph, fallback_to_oracle: bool = False, options: Optional[BuilderOptions] = None) -> Witness:
    return _build('auto', g, options, fallback_to_oracle=fallback_to_oracle)


BUILDERS = {
    'auto': auto_witness,
    'chordal': chordal_witness,
    'roberts': triangle_free_witness,
    'theorem1': theorem1_witness,
    'theorem2': theorem2_witness,
}
