import logging
from pathlib import Path

from witnesses.competition import verify_witness
from witnesses.constructions import BUILDERS, BuilderOptions
from witnesses.exceptions import WitnessError
from witnesses.graphs import digraph_to_dot
from witnesses.serializers import GraphSerializer, WitnessSerializer, render

from ._base import WitnessCommand, render_json

logger = logging.getLogger('witnesses.commands')

FAILURE_DUMP = 'witness-failure.instance.json'


class Command(WitnessCommand):
    help = 'Build a witness digraph for a graph, verify it and write it with its construction trace.'
    input_arguments = ('graph',)

    def add_command_arguments(self, parser):
        parser.add_argument('graph', help='Graph JSON file.')
        parser.add_argument('--method', choices=sorted(BUILDERS), default='auto')
        parser.add_argument('--fallback-to-oracle', action='store_true',
                            help='With --method auto, use the exact oracle outside the supported classes.')
        parser.add_argument('--no-step-verification', action='store_true',
                            help='Only verify the final witness.')

    def overrides(self, options):
        return {'method': options['method'], 'verify_each_step': not options['no_step_verification']}

    def run(self, graph, method='auto', output=None, format='json', seed=None, **options):
        g = self.load_graph(graph)
        builder_options = BuilderOptions(
            verify_each_step=False if options.get('no_step_verification') else None, seed=seed,
        )
        kwargs = {'options': builder_options}
        if method == 'auto':
            kwargs['fallback_to_oracle'] = options.get('fallback_to_oracle', False)

        try:
            w = BUILDERS[method](g, **kwargs)
        except WitnessError as exc:
            dump = self.dump_instance(g, exc, output)
            self.fail(f'{exc.code}: {exc.detail} (instance written to {dump})')

        report = verify_witness(g, w)
        if not report.passes:
            self.fail(f'Built witness failed verification: missing={report.missing_edges} '
                      f'extra={report.extra_edges} acyclic={report.acyclic}.')

        if format == 'dot':
            self.emit(digraph_to_dot(w.digraph, highlight=w.added), output)
        else:
            self.emit(render(WitnessSerializer, w), output)
        summary = self.stdout if output else self.stderr
        summary.write(f'k={w.k}')
        logger.info('%s witness with k=%d verified.', method, w.k)

    def dump_instance(self, g, exc, output) -> str:
        path = f'{output}.instance.json' if output else FAILURE_DUMP
        payload = {'error': exc.get_full_details(), 'graph': GraphSerializer(g).data}
        Path(path).write_bytes(render_json(payload))
        logger.warning('Construction failed with %s; instance written to %s', exc.code, path)
        return path

