from witnesses.competition import verify_witness
from witnesses.serializers import VerificationReportSerializer, render

from ._base import WitnessCommand, parse_vertex, parse_vertex_list


class Command(WitnessCommand):
    help = 'Check a witness against a graph; exit 0 on a full pass, 2 with a failure report otherwise.'
    formats = ('json',)
    input_arguments = ('graph', 'witness')

    def add_command_arguments(self, parser):
        parser.add_argument('graph', help='Graph JSON file.')
        parser.add_argument('witness', help='Witness JSON file.')
        parser.add_argument(
            '--require-common-prey', metavar='CLIQUE[@PREY]',
            help='Comma separated clique that must share an added out-neighbour, by default the last added vertex.',
        )

    def run(self, graph, witness, output=None, require_common_prey=None, **options):
        g = self.load_graph(graph)
        w = self.load_witness(witness)

        expected = None
        if require_common_prey:
            members, _, prey = require_common_prey.partition('@')
            clique = parse_vertex_list(members)
            if prey:
                vertex = parse_vertex(prey)
            else:
                vertex = w.added[-1] if w.added else None
            expected = (clique, vertex)

        report = verify_witness(g, w, expected)
        self.emit(render(VerificationReportSerializer, report), output)
        if not report.passes:
            self.fail('Witness does not verify.')
