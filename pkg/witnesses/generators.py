"""
Seeded generators for hypothesis-class instances and triangle-free controls.

Nothing leaves this module unvalidated: every graph is re-checked with
`validate_hypotheses` (or for triangle-freeness) and a mismatch raises
`GenerationError` carrying the instance.
"""
from __future__ import annotations

import itertools
import logging
import random
from dataclasses import asdict, dataclass, field
from typing import Optional

from .conf import resolve
from .exceptions import GenerationError
from .graphs import Graph, build_graph, is_connected, is_triangle_free
from .structure import graph_payload, validate_hypotheses

logger = logging.getLogger(__name__)

HOLE_LENGTH_CHOICES = (4, 5, 6)
EDGE = 'edge'
PENDANT = 'pendant'


@dataclass(frozen=True)
class FamilySpec:
    """
    Requested clique number and hole count plus an optional attachment plan.

    Attachments are strings `edge:j` (hole glued along clique edge j-(j+1))
    or `pendant:v` (hole sharing only vertex v with the graph built so far).
    Missing lengths and attachments are filled in from `seed`.
    """
    omega: int
    h: int
    hole_lengths: tuple = ()
    attachments: tuple = ()
    seed: Optional[int] = None

    def describe(self) -> dict:
        data = asdict(self)
        data['hole_lengths'] = list(self.hole_lengths)
        data['attachments'] = list(self.attachments)
        return data


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    graph: Graph
    omega: int
    h: int
    spec: Optional[FamilySpec] = field(default=None, compare=False)


def _parse_attachment(text: str):
    kind, _, value = str(text).partition(':')
    if kind not in (EDGE, PENDANT) or not value:
        raise GenerationError(f'Attachment {text!r} must look like "edge:j" or "pendant:v".')
    try:
        return kind, int(value)
    except ValueError:
        raise GenerationError(f'Attachment {text!r} needs an integer argument.')


class _Assembler:
    """Grows a graph on integer vertices, handing out fresh labels in order."""

    def __init__(self, vertices):
        self.vertices = list(vertices)
        self.edges = []
        self._next = max(self.vertices, default=0) + 1

    def clique(self):
        for u, v in itertools.combinations(self.vertices, 2):
            self.edges.append((u, v))

    def path(self, start, end, internal: int):
        fresh = list(range(self._next, self._next + internal))
        self._next += internal
        self.vertices += fresh
        walk = [start] + fresh + [end]
        self.edges += list(zip(walk, walk[1:]))

    def pendant_cycle(self, anchor, length: int):
        fresh = list(range(self._next, self._next + length - 1))
        self._next += length - 1
        self.vertices += fresh
        walk = [anchor] + fresh + [anchor]
        self.edges += list(zip(walk, walk[1:]))

    def graph(self) -> Graph:
        return build_graph(self.vertices, self.edges)


def _check_lengths(lengths):
    for length in lengths:
        if length < 4:
            raise GenerationError(f'Hole length {length} is below 4.')


def _require(g: Graph, omega: int, h: int, what: str, spec=None):
    report = validate_hypotheses(g)
    ok = report.hypotheses_hold and report.omega == omega and report.h == h
    if ok and omega >= 3:
        ok = report.non_edge_clique is not None
    if not ok:
        raise GenerationError(
            f'{what} came out with h={report.h} omega={report.omega} hold={report.hypotheses_hold}, '
            f'requested h={h} omega={omega}.',
            instance={'graph': graph_payload(g), 'spec': spec.describe() if spec else None},
        )
    return g


def gen_flower(h: int, hole_lengths=None) -> Graph:
    """Clique on 1..h+1 with hole j glued along edge j-(j+1)."""
    if h < 1:
        raise GenerationError(f'Flower needs h >= 1, got {h}.')
    lengths = list(hole_lengths) if hole_lengths else [4] * h
    if len(lengths) != h:
        raise GenerationError(f'Expected {h} hole lengths, got {len(lengths)}.')
    _check_lengths(lengths)

    assembler = _Assembler(range(1, h + 2))
    assembler.clique()
    for j, length in enumerate(lengths, start=1):
        assembler.path(j, j + 1, length - 2)
    return _require(assembler.graph(), h + 1, h, f'flower({h})')


def _plan(spec: FamilySpec, rng: random.Random):
    lengths = list(spec.hole_lengths)
    if len(lengths) > spec.h:
        raise GenerationError(f'{len(lengths)} hole lengths given for h={spec.h}.')
    lengths += [rng.choice(HOLE_LENGTH_CHOICES) for _ in range(spec.h - len(lengths))]
    _check_lengths(lengths)

    attachments = [_parse_attachment(a) for a in spec.attachments]
    if len(attachments) > spec.h:
        raise GenerationError(f'{len(attachments)} attachments given for h={spec.h}.')
    if not spec.attachments:
        on_edge = min(spec.h, spec.omega - 1)
        attachments = [(EDGE, j) for j in range(1, on_edge + 1)]
    attachments += [(PENDANT, None)] * (spec.h - len(attachments))

    used = [j for kind, j in attachments if kind == EDGE]
    if len(set(used)) != len(used):
        raise GenerationError('Two holes planned on the same clique edge.')
    for j in used:
        if not 1 <= j <= spec.omega - 1:
            raise GenerationError(f'Clique edge index {j} outside 1..{spec.omega - 1}.')
    return lengths, attachments


def gen_family(spec: FamilySpec) -> Graph:
    if spec.h < 1 or not 2 <= spec.omega <= spec.h + 1:
        raise GenerationError(
            f'Need 2 <= omega <= h + 1, got omega={spec.omega} h={spec.h}.', instance={'spec': spec.describe()},
        )
    rng = random.Random(resolve(spec.seed, 'SEED'))
    lengths, attachments = _plan(spec, rng)

    collapsed = spec.omega == 2 and all(kind == PENDANT for kind, _ in attachments)
    assembler = _Assembler([1] if collapsed else range(1, spec.omega + 1))
    assembler.clique()
    for (kind, where), length in zip(attachments, lengths):
        if kind == EDGE:
            assembler.path(where, where + 1, length - 2)
            continue
        anchor = where if where is not None else rng.choice(assembler.vertices)
        if anchor not in assembler.vertices:
            raise GenerationError(f'Pendant anchor {anchor} does not exist yet.', instance={'spec': spec.describe()})
        assembler.pendant_cycle(anchor, length)

    g = assembler.graph()
    logger.debug('Generated family instance omega=%d h=%d n=%d.', spec.omega, spec.h, len(g))
    return _require(g, spec.omega, spec.h, 'family', spec)


def gen_triangle_free_random(n: int, extra_edges: int, seed: Optional[int] = None,
                             attempts: Optional[int] = None) -> Graph:
    """Random recursive tree on 1..n plus `extra_edges` edges closing no triangle."""
    if n < 2:
        raise GenerationError(f'Need n >= 2, got {n}.')
    rng = random.Random(resolve(seed, 'SEED'))
    attempts = resolve(attempts, 'GENERATOR_ATTEMPTS')

    for _ in range(attempts):
        adjacency = {v: set() for v in range(1, n + 1)}
        for v in range(2, n + 1):
            parent = rng.randint(1, v - 1)
            adjacency[v].add(parent)
            adjacency[parent].add(v)

        pairs = [(u, v) for u, v in itertools.combinations(range(1, n + 1), 2) if v not in adjacency[u]]
        rng.shuffle(pairs)
        added = 0
        for u, v in pairs:
            if added == extra_edges:
                break
            if v in adjacency[u] or adjacency[u] & adjacency[v]:
                continue
            adjacency[u].add(v)
            adjacency[v].add(u)
            added += 1
        if added == extra_edges:
            edges = {(u, v) for u in adjacency for v in adjacency[u] if u < v}
            g = build_graph(range(1, n + 1), edges)
            if not (is_connected(g) and is_triangle_free(g)):
                raise GenerationError('Generated graph is not connected and triangle-free.',
                                      instance=graph_payload(g))
            return g

    raise GenerationError(
        f'Could not place {extra_edges} triangle-free extra edges on {n} vertices in {attempts} attempts.',
    )


def gen_corpus(seed: Optional[int] = None, max_h: int = 5, repeats: int = 1) -> list:
    """
    Validated hypothesis corpus: flowers for h = 1..max_h and family
    instances over the full (omega, h) grid, `repeats` draws per cell.
    """
    rng = random.Random(resolve(seed, 'SEED'))
    corpus = []
    for round_ in range(repeats):
        for h in range(1, max_h + 1):
            lengths = [rng.choice(HOLE_LENGTH_CHOICES) for _ in range(h)]
            corpus.append(CorpusEntry(f'flower-{h}-{round_}', gen_flower(h, lengths), h + 1, h))
            for omega in range(2, h + 2):
                spec = FamilySpec(omega=omega, h=h, seed=rng.randrange(2 ** 32))
                corpus.append(CorpusEntry(f'family-{omega}-{h}-{round_}', gen_family(spec), omega, h, spec))
    logger.info('Generated corpus of %d instances.', len(corpus))
    return corpus
