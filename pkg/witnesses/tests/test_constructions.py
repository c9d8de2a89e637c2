import random
from dataclasses import replace
from unittest import mock

from django.test import SimpleTestCase
from hypothesis import given, settings

from witnesses.competition import (
    Witness, competition_graph, exact_competition_number, is_acyclic,
    verify_witness,
)
from witnesses.constructions import (
    BuilderOptions, WitnessBuilder, auto_witness, chordal_witness, paste,
    theorem1_witness, theorem2_witness, triangle_free_witness,
)
from witnesses.exceptions import (
    ConstructionAssertion, HypothesisAnomaly, PreconditionViolation,
    UnsupportedGraphClass,
)
from witnesses.generators import FamilySpec, gen_family, gen_flower
from witnesses.graphs import build_digraph, build_graph
from witnesses.structure import validate_hypotheses

from .strategies import (
    CONDITION_A_GRAPH, FIGURE_EIGHT, complete_graph,
    connected_triangle_free_graphs, cycle_graph, path_graph,
)


def steps(w):
    return [step.step for step in w.trace]


def details(w):
    return ' '.join(step.detail for step in w.trace)


class ChordalWitnessTests(SimpleTestCase):
    def test_small_graphs(self):
        for g, k in ((build_graph([1, 2], []), 0), (path_graph(3), 1), (complete_graph(4), 1),
                     (complete_graph(4).with_edges([(4, 5)]), 1)):
            with self.subTest(edges=g.edges):
                w = chordal_witness(g)
                self.assertEqual(w.k, k)
                self.assertTrue(verify_witness(g, w).passes)

    def test_added_names_are_relabelled(self):
        self.assertEqual(chordal_witness(path_graph(4)).added, ('$k0',))

    def test_tree_has_two_base_sources(self):
        w = chordal_witness(path_graph(5))
        self.assertEqual(len([s for s in w.digraph.sources() if s in w.base]), 2)

    def test_lex_bfs_order(self):
        w = chordal_witness(complete_graph(3).with_edges([(3, 4)]), BuilderOptions(vertex_order_strategy='lex-bfs'))
        self.assertEqual(w.k, 1)

    def test_rejects_holes(self):
        with self.assertRaises(PreconditionViolation):
            chordal_witness(cycle_graph(4))


class TriangleFreeWitnessTests(SimpleTestCase):
    def test_cycles_and_figure_eight(self):
        for g, k in ((cycle_graph(4), 2), (cycle_graph(7), 2), (path_graph(2), 1), (FIGURE_EIGHT, 3)):
            with self.subTest(edges=g.edges):
                w = triangle_free_witness(g)
                self.assertEqual(w.k, k)
                self.assertTrue(verify_witness(g, w).passes)
                self.assertEqual(steps(w), ['roberts'])

    def test_preconditions(self):
        for g in (complete_graph(3), build_graph([1, 2], []), build_graph([1], [])):
            with self.subTest(edges=g.edges):
                with self.assertRaises(PreconditionViolation):
                    triangle_free_witness(g)

    @given(connected_triangle_free_graphs())
    @settings(max_examples=50, deadline=None)
    def test_formula(self, g):
        w = triangle_free_witness(g)
        self.assertEqual(w.k, len(g.edges) - len(g.vertices) + 2)
        self.assertTrue(verify_witness(g, w).passes)


def random_dag(rng, prefix, n, p):
    vertices = [f'{prefix}{i}' for i in range(n)]
    arcs = [(vertices[j], vertices[i]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    d = build_digraph(vertices, arcs)
    return Witness(d, d.vertices, ())


class PasteTests(SimpleTestCase):
    def test_tree_onto_lone_vertex(self):
        inner = triangle_free_witness(cycle_graph(4))
        lone = Witness(build_digraph([5], []), (5,), ())
        w = paste(inner, lone, inner.added[-1:], (5,))
        g = build_graph(range(1, 6), cycle_graph(4).edges)
        self.assertTrue(verify_witness(g, w).passes)
        self.assertEqual(w.k, 1)
        self.assertEqual(steps(w)[-1], 'paste')

    def test_preconditions(self):
        w1 = Witness(build_digraph(['a', 'b', 'c'], [('a', 'c'), ('b', 'c')]), ('a', 'b', 'c'), ())
        w2 = Witness(build_digraph(['x', 'y'], [('x', 'y')]), ('x', 'y'), ())
        with self.assertRaises(PreconditionViolation):
            paste(w1, w2, ['a'], ['x'])
        with self.assertRaises(PreconditionViolation):
            paste(w1, w2, ['c'], ['y'])
        with self.assertRaises(PreconditionViolation):
            paste(w1, w1, ['c'], ['a'])
        with self.assertRaises(PreconditionViolation):
            paste(w1, w2, ['c'], [])

    def test_random_pairs(self):
        rng = random.Random(4242)
        done = 0
        while done < 100:
            w1 = random_dag(rng, 'a', rng.randint(2, 7), rng.random() * 0.6)
            w2 = random_dag(rng, 'b', rng.randint(1, 6), rng.random() * 0.6)
            c1 = competition_graph(w1.digraph)
            isolated = [v for v in c1.vertices if not c1.degree(v)]
            sources = list(w2.digraph.sources())
            m = min(len(isolated), len(sources), rng.randint(1, 3))
            if not m:
                continue
            consumed = rng.sample(isolated, m)
            chosen = rng.sample(sources, m)
            w = paste(w1, w2, consumed, chosen)

            dropped = set(consumed)
            expected = {e for e in c1.edges if not dropped & set(e)} | set(competition_graph(w2.digraph).edges)
            with self.subTest(pair=done):
                self.assertTrue(is_acyclic(w.digraph)[0])
                self.assertEqual(set(competition_graph(w.digraph).edges), expected)
                self.assertFalse(dropped & set(w.digraph.vertices))
            done += 1


class Theorem1Tests(SimpleTestCase):
    def assertTheorem1(self, g, clique):
        w = theorem1_witness(g)
        self.assertEqual(w.k, 2)
        self.assertEqual(w.added, ('$k0', '$k1'))
        report = verify_witness(g, w, (clique, w.added[-1]))
        self.assertTrue(report.passes, report)
        return w

    def test_flowers(self):
        rng = random.Random(1)
        for h in range(1, 6):
            lengths = [rng.choice((4, 5, 6)) for _ in range(h)]
            with self.subTest(h=h, lengths=lengths):
                w = self.assertTheorem1(gen_flower(h, lengths), range(1, h + 2) if h > 1 else (1, 2))
                self.assertEqual(steps(w).count('theorem1.step'), h - 1)
                self.assertEqual(steps(w).count('theorem1.base'), 1)

    def test_small_flowers_match_oracle(self):
        for h in (1, 2):
            g = gen_flower(h)
            self.assertEqual(exact_competition_number(g).exact, theorem1_witness(g).k)

    def test_condition_a_branch(self):
        w = self.assertTheorem1(CONDITION_A_GRAPH, (1, 2, 3))
        self.assertIn('condition=a vertex=1 edge=2-4', details(w))
        self.assertIn('subcase=pendant', details(w))

    def test_pendant_hole_families(self):
        cases = (
            (('edge:1', 'pendant:1'), 'condition=a vertex=3'),
            (('edge:1', 'pendant:3'), 'condition=b vertex=1'),
        )
        for attachments, expected in cases:
            g = gen_family(FamilySpec(omega=3, h=2, hole_lengths=(4, 4), attachments=attachments))
            with self.subTest(attachments=attachments):
                w = self.assertTheorem1(g, (1, 2, 3))
                self.assertIn(expected, details(w))
                self.assertIn('subcase=cut-edge', details(w))

    def test_base_subcases(self):
        hole_with_tail = build_graph(range(1, 7), [(1, 2), (2, 3), (3, 4), (1, 4), (4, 5), (5, 6)])
        cases = (
            ((1, 2), 'subcase=hole-edge'),
            ((5, 6), 'subcase=pendant'),
            ((4, 5), 'subcase=cut-edge'),
        )
        for clique, expected in cases:
            with self.subTest(clique=clique):
                w = theorem1_witness(hole_with_tail, clique=clique)
                self.assertEqual(w.k, 2)
                self.assertIn(expected, details(w))
                self.assertTrue(verify_witness(hole_with_tail, w, (clique, w.added[-1])).passes)

    def test_designated_edge_must_be_an_edge(self):
        with self.assertRaises(PreconditionViolation):
            theorem1_witness(cycle_graph(5), clique=(1, 3))

    def test_outside_theorem(self):
        for g in (complete_graph(4), FIGURE_EIGHT):
            with self.subTest(edges=g.edges):
                with self.assertRaises(PreconditionViolation):
                    theorem1_witness(g)

    def test_without_step_verification(self):
        g = gen_flower(3)
        w = theorem1_witness(g, options=BuilderOptions(verify_each_step=False))
        self.assertTrue(verify_witness(g, w, ((1, 2, 3, 4), w.added[-1])).passes)


class Theorem2Tests(SimpleTestCase):
    def test_grid(self):
        rng = random.Random(2)
        instances = 0
        for h in range(1, 6):
            for omega in range(2, h + 2):
                g = gen_family(FamilySpec(omega=omega, h=h, seed=rng.randrange(10 ** 6)))
                with self.subTest(omega=omega, h=h):
                    w = theorem2_witness(g)
                    self.assertLessEqual(w.k, h - omega + 3)
                    self.assertTrue(verify_witness(g, w).passes)
                    if len(g.vertices) <= 9:
                        result = exact_competition_number(g, budget=200_000)
                        self.assertLessEqual(result.lower, w.k)
                        if result.is_exact:
                            self.assertLessEqual(result.exact, w.k)
                instances += 1
        self.assertGreaterEqual(instances, 12)

    def test_figure_eight_is_tight(self):
        w = theorem2_witness(FIGURE_EIGHT)
        self.assertEqual(w.k, 3)
        self.assertEqual(exact_competition_number(FIGURE_EIGHT).exact, 3)

    def test_interior_window_removes_hole_edges(self):
        g = gen_family(FamilySpec(omega=3, h=3, hole_lengths=(4, 4, 4), attachments=('edge:1', 'edge:2', 'pendant:1')))
        w = theorem2_witness(g)
        self.assertEqual(w.k, 3)
        self.assertEqual(steps(w).count('theorem2.remove-edge'), 1)
        self.assertTrue(verify_witness(g, w).passes)

    def test_edge_count_anomaly(self):
        report = validate_hypotheses(FIGURE_EIGHT)
        inflated = replace(report, holes=report.holes + report.holes[:1])
        with self.assertRaises(HypothesisAnomaly):
            theorem2_witness(FIGURE_EIGHT, report=inflated)

    def test_rejects_failing_hypotheses(self):
        with self.assertRaises(PreconditionViolation):
            theorem2_witness(cycle_graph(6).with_edges([(1, 4)]))


class AutoWitnessTests(SimpleTestCase):
    def test_routes(self):
        cases = (
            (build_graph([1, 2, 3], []), 0, 'chordal'),
            (path_graph(4), 1, 'chordal'),
            (complete_graph(4).with_edges([(4, 5)]), 1, 'chordal'),
            (cycle_graph(5), 2, 'roberts'),
            (FIGURE_EIGHT, 3, 'roberts'),
            (gen_flower(3), 2, 'theorem2.top'),
        )
        for g, k, route in cases:
            with self.subTest(route=route, edges=g.edges):
                w = auto_witness(g)
                self.assertEqual(w.k, k)
                self.assertIn(route, steps(w))
                self.assertTrue(verify_witness(g, w).passes)

    def test_unsupported_and_oracle_fallback(self):
        g = build_graph(range(1, 8), [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 6), (1, 4), (1, 7), (2, 7)])
        with self.assertRaises(UnsupportedGraphClass):
            auto_witness(g)
        w = auto_witness(g, fallback_to_oracle=True)
        self.assertTrue(verify_witness(g, w).passes)
        self.assertEqual(steps(w), ['oracle'])


class FinalVerificationTests(SimpleTestCase):
    def test_final_witness_checked_without_step_verification(self):
        broken = Witness(build_digraph([1, 2], []), (1, 2), ())
        with mock.patch.object(WitnessBuilder, 'chordal', return_value=broken):
            with self.assertRaises(ConstructionAssertion):
                chordal_witness(path_graph(2), options=BuilderOptions(verify_each_step=False))

    def test_theorem1_common_prey_checked_without_step_verification(self):
        g = gen_flower(2)
        with mock.patch('witnesses.constructions.verify_witness', wraps=verify_witness) as spy:
            w = theorem1_witness(g, options=BuilderOptions(verify_each_step=False))
        self.assertEqual(spy.call_count, 1)
        _, built, (clique, prey) = spy.call_args.args
        self.assertEqual(clique, (1, 2, 3))
        self.assertEqual(prey, built.added[-1])
        self.assertTrue(verify_witness(g, w, (clique, w.added[-1])).passes)
