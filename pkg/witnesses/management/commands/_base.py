import hashlib
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from django.core.management.base import BaseCommand, CommandError
from rest_framework.exceptions import ParseError, ValidationError
from rest_framework.renderers import JSONRenderer

import witnesses
from witnesses.conf import witness_settings
from witnesses.exceptions import GraphValidationError, WitnessError
from witnesses.serializers import GraphSerializer, WitnessSerializer, load_bytes

logger = logging.getLogger('witnesses.commands')

EXIT_INPUT = 1
EXIT_SEMANTIC = 2

VERBOSITY_LEVELS = {0: logging.WARNING, 1: logging.INFO, 2: logging.DEBUG, 3: logging.DEBUG}


@dataclass
class RunConfig:
    command: str
    inputs: list = field(default_factory=list)
    output: Optional[str] = None
    format: str = 'json'
    seed: Optional[int] = None
    verbosity: int = 1
    overrides: dict = field(default_factory=dict)


def parse_vertex(token: str):
    token = token.strip()
    return int(token) if token.lstrip('-').isdigit() else token


def parse_vertex_list(text: str) -> list:
    return [parse_vertex(t) for t in text.split(',') if t.strip()]


def parse_int_list(text: str) -> list:
    try:
        return [int(t) for t in text.split(',') if t.strip()]
    except ValueError:
        raise CommandError(f'Expected a comma separated list of integers, got {text!r}.', returncode=EXIT_INPUT)


def render_json(data) -> bytes:
    return JSONRenderer().render(data, renderer_context={'indent': 2}) + b'\n'


class WitnessCommand(BaseCommand):
    """
    Shared plumbing: logging setup, run-config logging, input digests,
    output routing and the exit-code contract (1 for I/O or input
    problems, 2 for semantic failures).
    """
    requires_system_checks = []
    formats = ('json', 'dot')
    input_arguments = ()

    def add_arguments(self, parser):
        parser.add_argument('-o', '--output', help='Write the result here instead of standard output.')
        parser.add_argument('--format', choices=self.formats, default='json')
        parser.add_argument('--seed', type=int, default=None, help='Seed for every random choice.')
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def handle(self, *args, **options):
        logging.getLogger('witnesses').setLevel(VERBOSITY_LEVELS.get(options['verbosity'], logging.DEBUG))
        self.config = RunConfig(
            command=self.__module__.rsplit('.', 1)[-1],
            inputs=[options[name] for name in self.input_arguments if options.get(name)],
            output=options.get('output'),
            format=options['format'],
            seed=options.get('seed'),
            verbosity=options['verbosity'],
            overrides=self.overrides(options),
        )
        logger.info('witnesses %s', witnesses.__version__)
        logger.info('Run config: %s', asdict(self.config))
        logger.debug('Settings: %s', witness_settings.as_dict())

        try:
            self.run(**options)
        except (ParseError, ValidationError, GraphValidationError) as exc:
            raise CommandError(f'Invalid input: {getattr(exc, "detail", exc)}', returncode=EXIT_INPUT)
        except OSError as exc:
            raise CommandError(str(exc), returncode=EXIT_INPUT)
        except WitnessError as exc:
            raise CommandError(f'{exc.code}: {exc.detail}', returncode=EXIT_SEMANTIC)

    def overrides(self, options) -> dict:
        return {}

    def run(self, **options):
        raise NotImplementedError('subclasses of WitnessCommand must provide a run() method')

    def read(self, path) -> bytes:
        raw = Path(path).read_bytes()
        logger.info('Input %s sha256=%s', path, hashlib.sha256(raw).hexdigest())
        return raw

    def load_graph(self, path):
        return load_bytes(GraphSerializer, self.read(path))

    def load_witness(self, path):
        return load_bytes(WitnessSerializer, self.read(path))

    def emit(self, payload, output=None):
        if isinstance(payload, str):
            payload = payload.encode('utf-8')
        if output:
            Path(output).write_bytes(payload)
            logger.info('Wrote %s', output)
        else:
            self.stdout.write(payload.decode('utf-8'), ending='')

    def fail(self, message: str):
        raise CommandError(message, returncode=EXIT_SEMANTIC)
