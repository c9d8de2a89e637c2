from witnesses.graphs import graph_to_dot
from witnesses.serializers import HypothesisReportSerializer, render
from witnesses.structure import validate_hypotheses

from ._base import WitnessCommand


class Command(WitnessCommand):
    help = 'Report holes, maximal cliques and hypothesis flags of a graph; exit 2 when they fail.'
    input_arguments = ('graph',)

    def add_command_arguments(self, parser):
        parser.add_argument('graph', help='Graph JSON file.')

    def run(self, graph, output=None, format='json', **options):
        g = self.load_graph(graph)
        report = validate_hypotheses(g)
        if format == 'dot':
            self.emit(graph_to_dot(g), output)
        else:
            self.emit(render(HypothesisReportSerializer, report), output)
        if not report.passes:
            self.fail(
                f'Hypotheses fail: h={report.h} omega={report.omega} '
                f'edge_disjoint={report.holes_pairwise_edge_disjoint} '
                f'single_clique={report.at_most_one_non_edge_maximal_clique} connected={report.connected}.'
            )
