import random

import networkx as nx
from django.test import SimpleTestCase, override_settings

from witnesses.exceptions import BudgetExceeded, PreconditionViolation
from witnesses.generators import gen_corpus, gen_flower
from witnesses.graphs import Cycle, build_graph, canonical_cycle
from witnesses.structure import (
    CONDITION_A, CONDITION_B, LITERAL, RESTRICTED, ChordedCycleAnalysis,
    Clique, analyze_chorded_cycle, build_avoidance_graph,
    edge_removal_hole_report, enumerate_holes, enumerate_maximal_cliques,
    find_triangle, is_chordal, is_hole_by_clique_criterion,
    is_perfect_elimination_order, k_avoiding_path_exists, lemma3_statistics,
    omega_window, select_clique_vertex, validate_hypotheses,
)

from .strategies import (
    CONDITION_A_GRAPH, FIGURE_EIGHT, brute_force_holes, complete_graph,
    cycle_graph, random_graph,
)

C6_WITH_CHORD = cycle_graph(6).with_edges([(1, 4)])


class HoleEnumerationTests(SimpleTestCase):
    def test_small_graphs(self):
        self.assertEqual([H.vertices for H in enumerate_holes(cycle_graph(5))], [(1, 2, 3, 4, 5)])
        self.assertEqual(enumerate_holes(complete_graph(4)), [])
        self.assertEqual(enumerate_holes(cycle_graph(3)), [])
        self.assertEqual(
            [H.vertices for H in enumerate_holes(C6_WITH_CHORD)],
            [(1, 2, 3, 4), (1, 4, 5, 6)],
        )

    def test_limit_and_budgets(self):
        self.assertEqual(len(enumerate_holes(C6_WITH_CHORD, limit=1)), 1)
        with self.assertRaises(BudgetExceeded):
            enumerate_holes(C6_WITH_CHORD, max_holes=1)
        with self.assertRaises(BudgetExceeded):
            enumerate_holes(cycle_graph(8), max_nodes=3)

    @override_settings(WITNESSES={'HOLE_LIMIT': 1})
    def test_budget_from_settings(self):
        with self.assertRaises(BudgetExceeded):
            enumerate_holes(C6_WITH_CHORD)

    def test_matches_exhaustive_search(self):
        rng = random.Random(20240101)
        for index in range(200):
            g = random_graph(rng, rng.randint(4, 9), rng.choice([0.25, 0.35, 0.5]))
            with self.subTest(index=index, edges=g.edges):
                found = {H.vertices for H in enumerate_holes(g)}
                self.assertEqual(found, brute_force_holes(g))
                chordless = {canonical_cycle(c) for c in nx.chordless_cycles(g.nx) if len(c) >= 4}
                self.assertEqual(found, chordless)


class CliqueAndChordalityTests(SimpleTestCase):
    def test_maximal_cliques(self):
        g = complete_graph(4).with_edges([(4, 5)])
        self.assertEqual([c.members for c in enumerate_maximal_cliques(g)], [(1, 2, 3, 4), (4, 5)])

    def test_find_triangle(self):
        self.assertEqual(find_triangle(complete_graph(4)), Clique((1, 2, 3)))
        self.assertIsNone(find_triangle(cycle_graph(4)))

    def test_chordal_recognition(self):
        for strategy in ('mcs', 'lex-bfs'):
            with self.subTest(strategy=strategy):
                chordal, order = is_chordal(complete_graph(4).with_edges([(4, 5)]), strategy)
                self.assertTrue(chordal)
                self.assertTrue(is_perfect_elimination_order(complete_graph(4).with_edges([(4, 5)]), order))
                chordal, hole = is_chordal(cycle_graph(5), strategy)
                self.assertFalse(chordal)
                self.assertEqual(hole.vertices, (1, 2, 3, 4, 5))

    def test_chordal_agrees_with_networkx(self):
        rng = random.Random(7)
        for _ in range(60):
            g = random_graph(rng, rng.randint(1, 8), 0.5)
            self.assertEqual(is_chordal(g)[0], nx.is_chordal(g.nx))


class HypothesisReportTests(SimpleTestCase):
    def test_flower(self):
        report = validate_hypotheses(gen_flower(3))
        self.assertEqual((report.h, report.omega), (3, 4))
        self.assertEqual(report.non_edge_clique, Clique((1, 2, 3, 4)))
        self.assertTrue(report.passes)
        self.assertEqual(report.omega_window, 'top')
        self.assertEqual([H.vertices for H in report.holes_containing(1)], [(1, 2, 6, 5)])

    def test_shared_edge_fails(self):
        report = validate_hypotheses(C6_WITH_CHORD)
        self.assertFalse(report.holes_pairwise_edge_disjoint)
        self.assertFalse(report.passes)

    def test_two_non_edge_cliques(self):
        g = build_graph(range(1, 6), [(1, 2), (1, 3), (2, 3), (3, 4), (3, 5), (4, 5)])
        report = validate_hypotheses(g)
        self.assertFalse(report.at_most_one_non_edge_maximal_clique)
        self.assertIsNone(report.non_edge_clique)

    def test_figure_eight(self):
        report = validate_hypotheses(FIGURE_EIGHT)
        self.assertEqual((report.h, report.omega), (2, 2))
        self.assertEqual(report.omega_window, 'interior')
        self.assertTrue(report.passes)

    def test_omega_window(self):
        self.assertEqual(omega_window(1, 0), 'below')
        self.assertEqual(omega_window(2, 3), 'interior')
        self.assertEqual(omega_window(4, 3), 'top')
        self.assertEqual(omega_window(5, 3), 'above')


class ChordedCycleTests(SimpleTestCase):
    def test_two_holes(self):
        result = analyze_chorded_cycle(C6_WITH_CHORD, range(1, 7), (4, 1))
        self.assertEqual(result.verdict, ChordedCycleAnalysis.TWO_HOLES)
        self.assertEqual(result.shared_edge, (1, 4))
        self.assertEqual({H.vertices for H in result.holes}, {(1, 2, 3, 4), (1, 4, 5, 6)})

    def test_triangle(self):
        g = cycle_graph(4).with_edges([(1, 3)])
        result = analyze_chorded_cycle(g, [1, 2, 3, 4], (1, 3))
        self.assertEqual(result.verdict, ChordedCycleAnalysis.TRIANGLE)
        self.assertEqual(result.triangle, Clique((1, 2, 3)))

    def test_rejects_cycle_edges(self):
        with self.assertRaises(PreconditionViolation):
            analyze_chorded_cycle(C6_WITH_CHORD, range(1, 7), (1, 2))

    def test_random_sweep(self):
        rng = random.Random(31337)
        analysed = 0
        for _ in range(100):
            g = random_graph(rng, rng.randint(5, 10), 0.4)
            for index, cycle in enumerate(nx.simple_cycles(g.nx, length_bound=7)):
                if index >= 30:
                    break
                chords = Cycle(tuple(cycle)).chords(g) if len(cycle) >= 4 else ()
                if not chords:
                    continue
                result = analyze_chorded_cycle(g, cycle, chords[0])
                analysed += 1
                self.assert_structure(g, result, chords[0])
        self.assertGreater(analysed, 50)

    def assert_structure(self, g, result, chord):
        if result.verdict == ChordedCycleAnalysis.TRIANGLE:
            self.assertTrue(set(chord) <= result.triangle.vertex_set)
            self.assertTrue(all(g.has_edge(u, v) for u, v in result.triangle.edges()))
            return
        first, second = result.holes
        for H in result.holes:
            self.assertGreaterEqual(len(H), 4)
            self.assertTrue(H.is_cycle_of(g))
            self.assertEqual(H.chords(g), ())
        self.assertEqual(set(first.edges()) & set(second.edges()), {chord})


class CliqueVertexSelectionTests(SimpleTestCase):
    def test_hole_criterion_on_corpus(self):
        checked = 0
        for entry in gen_corpus(seed=3, max_h=4):
            if entry.omega < 3:
                continue
            report = validate_hypotheses(entry.graph)
            holes = {H.vertices for H in report.holes}
            for cycle in nx.simple_cycles(entry.graph.nx, length_bound=8):
                if len(cycle) < 4:
                    continue
                c = Cycle.from_sequence(cycle)
                with self.subTest(entry=entry.name, cycle=c.vertices):
                    self.assertEqual(is_hole_by_clique_criterion(report, c), c.vertices in holes)
                checked += 1
        self.assertGreater(checked, 0)

    def test_avoidance_degrees_on_flower(self):
        g = gen_flower(3)
        report = validate_hypotheses(g)
        restricted = build_avoidance_graph(g, report, RESTRICTED)
        self.assertEqual(restricted.vertex_degrees(), {1: 1, 2: 2, 3: 2, 4: 1})
        self.assertEqual(restricted.hole_degrees(), [2, 2, 2])
        literal = build_avoidance_graph(g, report, LITERAL)
        self.assertEqual(literal.vertex_degrees(), {1: 2, 2: 3, 3: 3, 4: 2})

    def test_readings_differ(self):
        g = gen_flower(3)
        report = validate_hypotheses(g)
        K = report.non_edge_clique
        second_hole = report.holes_containing(3)[0]
        self.assertFalse(k_avoiding_path_exists(g, K, 1, second_hole, RESTRICTED))
        self.assertTrue(k_avoiding_path_exists(g, K, 1, second_hole, LITERAL))

    def test_selection(self):
        for g, expected in ((gen_flower(2), (1, CONDITION_B)), (gen_flower(3), (1, CONDITION_B)),
                            (CONDITION_A_GRAPH, (1, CONDITION_A))):
            with self.subTest(expected=expected):
                self.assertEqual(select_clique_vertex(g, validate_hypotheses(g)), expected)

    def test_selection_needs_top_window(self):
        with self.assertRaises(PreconditionViolation):
            select_clique_vertex(C6_WITH_CHORD, validate_hypotheses(C6_WITH_CHORD))

    def test_lemma3_sweep(self):
        instances = 0
        for entry in gen_corpus(seed=11, max_h=4, repeats=9):
            if entry.omega != entry.h + 1 or entry.h < 2:
                continue
            report = validate_hypotheses(entry.graph)
            with self.subTest(entry=entry.name):
                stats = lemma3_statistics(entry.graph, report)
                self.assertIn(stats.selected[1], (CONDITION_A, CONDITION_B))
                self.assertTrue(stats.hole_bound_holds(RESTRICTED))
            instances += 1
        self.assertGreaterEqual(instances, 50)


class EdgeRemovalTests(SimpleTestCase):
    def setUp(self):
        self.g = gen_flower(2)
        self.report = validate_hypotheses(self.g)

    def test_clique_edge_creates_expected_hole(self):
        result = edge_removal_hole_report(self.g, self.report, (2, 1))
        self.assertTrue(result.edge_in_clique)
        self.assertEqual(len(result.holes_after), 2)
        self.assertEqual([H.vertices for H in result.new_holes], [(1, 3, 2, 5, 4)])
        self.assertTrue(result.new_holes_have_expected_form)
        self.assertTrue(result.clique_edge_conclusion_holds)

    def test_hole_edge_outside_clique_drops_a_hole(self):
        result = edge_removal_hole_report(self.g, self.report, (1, 4))
        self.assertFalse(result.edge_in_clique)
        self.assertEqual(len(result.holes_after), 1)
        self.assertEqual(result.new_holes, ())
        self.assertTrue(result.clique_edge_conclusion_holds)

    def test_edge_on_no_hole(self):
        with self.assertRaises(PreconditionViolation):
            edge_removal_hole_report(self.g, self.report, (1, 3))
