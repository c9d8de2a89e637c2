import logging

from django.core.management.base import CommandError

from witnesses.generators import FamilySpec, gen_family, gen_flower, gen_triangle_free_random
from witnesses.graphs import graph_to_dot
from witnesses.serializers import FamilySpecSerializer, GraphSerializer, load_bytes, render

from ._base import EXIT_INPUT, WitnessCommand, parse_int_list

logger = logging.getLogger('witnesses.commands')


class Command(WitnessCommand):
    help = 'Generate a validated flower, hypothesis-family or random triangle-free graph.'
    input_arguments = ('spec',)

    def add_command_arguments(self, parser):
        parser.add_argument('family', choices=('flower', 'family', 'tf-random'))
        parser.add_argument('--h', type=int, help='Hole count for flowers.')
        parser.add_argument('--lengths', help='Comma separated hole lengths.')
        parser.add_argument('--omega', type=int, help='Clique number for family instances.')
        parser.add_argument('--holes', type=int, help='Hole count for family instances.')
        parser.add_argument('--attach', help='Comma separated attachments such as edge:1,pendant:3.')
        parser.add_argument('--spec', help='FamilySpec JSON file; replaces --omega/--holes/--lengths/--attach.')
        parser.add_argument('--n', type=int, help='Vertex count for tf-random.')
        parser.add_argument('--extra', type=int, default=0, help='Extra edges for tf-random.')

    def run(self, family, output=None, format='json', seed=None, **options):
        lengths = parse_int_list(options['lengths']) if options.get('lengths') else None
        spec = None
        if family == 'flower':
            h = self.required(options, 'h')
            g = gen_flower(h, lengths)
        elif family == 'family':
            spec = self.family_spec(options, lengths, seed)
            g = gen_family(spec)
        else:
            g = gen_triangle_free_random(self.required(options, 'n'), options['extra'], seed)

        if format == 'dot':
            self.emit(graph_to_dot(g), output)
        else:
            self.emit(render(GraphSerializer, g), output)
        if spec is not None:
            logger.info('Family spec: %s', spec.describe())
            if output:
                self.emit(render(FamilySpecSerializer, spec), f'{output}.spec.json')

    def family_spec(self, options, lengths, seed) -> FamilySpec:
        if options.get('spec'):
            return load_bytes(FamilySpecSerializer, self.read(options['spec']))
        attachments = tuple(a.strip() for a in options['attach'].split(',')) if options.get('attach') else ()
        return FamilySpec(
            omega=self.required(options, 'omega'),
            h=self.required(options, 'holes'),
            hole_lengths=tuple(lengths or ()),
            attachments=attachments,
            seed=seed,
        )

    def required(self, options, name):
        if options.get(name) is None:
            raise CommandError(f'--{name} is required for this family.', returncode=EXIT_INPUT)
        return options[name]
