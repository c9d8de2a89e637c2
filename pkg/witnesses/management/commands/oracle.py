from django.core.management.base import CommandError

from witnesses.competition import exact_competition_number
from witnesses.exceptions import OracleCapExceeded
from witnesses.serializers import OracleResultSerializer, WitnessSerializer, render

from ._base import EXIT_INPUT, WitnessCommand


class Command(WitnessCommand):
    help = 'Compute the exact competition number of a small graph, or a proven bracket within the budget.'
    formats = ('json',)
    input_arguments = ('graph',)

    def add_command_arguments(self, parser):
        parser.add_argument('graph', help='Graph JSON file.')
        parser.add_argument('--max-k', type=int, default=None)
        parser.add_argument('--budget', type=int, default=None, help='Search-node budget.')
        parser.add_argument('--max-vertices', type=int, default=None, help='Vertex cap.')
        parser.add_argument('--emit-witness', metavar='PATH', help="Write the oracle's own witness here.")

    def overrides(self, options):
        return {key: options[key] for key in ('max_k', 'budget', 'max_vertices') if options.get(key) is not None}

    def run(self, graph, output=None, max_k=None, budget=None, max_vertices=None, emit_witness=None, **options):
        g = self.load_graph(graph)
        try:
            result = exact_competition_number(g, max_k=max_k, budget=budget, max_vertices=max_vertices)
        except OracleCapExceeded as exc:
            raise CommandError(exc.detail, returncode=EXIT_INPUT)

        self.emit(render(OracleResultSerializer, result), output)
        summary = self.stdout if output else self.stderr
        if result.is_exact:
            summary.write(f'k={result.exact}')
        else:
            upper = '?' if result.upper is None else result.upper
            summary.write(f'k in [{result.lower}, {upper}] after {result.nodes} nodes')
        if emit_witness and result.witness is not None:
            self.emit(render(WitnessSerializer, result.witness), emit_witness)
