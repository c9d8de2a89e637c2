"""
Graph and digraph value types plus the elementary algorithms every other
module builds on.

Vertex identifiers are opaque integers or strings. All enumeration goes
through `vertex_key`, so output never depends on hash order.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Union

import networkx as nx

from .exceptions import (
    DuplicateEdge, DuplicateVertex, EdgeNotPresent, InvalidVertex,
    ReservedIdentifier, SelfLoop, UndeclaredEndpoint,
)

Vertex = Union[int, str]
Edge = tuple
Path = tuple

ADDED_PREFIX = '$k'


def added_name(index: int) -> str:
    return f'{ADDED_PREFIX}{index}'


def added_index(v) -> Optional[int]:
    if isinstance(v, str) and v.startswith(ADDED_PREFIX) and v[len(ADDED_PREFIX):].isdigit():
        return int(v[len(ADDED_PREFIX):])
    return None


def vertex_key(v):
    """Total order on identifiers: ints, then user strings, then added names by index."""
    if isinstance(v, int):
        return (0, v, '')
    index = added_index(v)
    if index is not None:
        return (2, index, v)
    return (1, 0, v)


def sort_vertices(vertices: Iterable) -> tuple:
    return tuple(sorted(vertices, key=vertex_key))


def edge_of(u, v) -> Edge:
    return (u, v) if vertex_key(u) <= vertex_key(v) else (v, u)


def edge_key(e: Edge):
    return (vertex_key(e[0]), vertex_key(e[1]))


def sort_edges(edges: Iterable) -> tuple:
    return tuple(sorted((edge_of(*e) for e in edges), key=edge_key))


def _check_identifier(v):
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise InvalidVertex(f'Invalid vertex identifier {v!r}; expected an integer or a string.')


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph. Build instances with `build_graph`."""
    vertices: tuple
    edges: tuple

    @cached_property
    def adjacency(self) -> dict:
        adj = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return {v: frozenset(nbrs) for v, nbrs in adj.items()}

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    @cached_property
    def nx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(self.edges)
        return graph

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, v):
        return v in self.adjacency

    def neighbors(self, v) -> tuple:
        return sort_vertices(self.adjacency[v])

    def degree(self, v) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u, v) -> bool:
        return u in self.adjacency and v in self.adjacency[u]

    def require_edge(self, e) -> Edge:
        u, v = e
        if not self.has_edge(u, v):
            raise EdgeNotPresent(f'Edge {u!r}-{v!r} is not present in the graph.')
        return edge_of(u, v)

    def without_edges(self, edges: Iterable) -> 'Graph':
        removed = {self.require_edge(e) for e in edges}
        return Graph(self.vertices, tuple(e for e in self.edges if e not in removed))

    def with_edges(self, edges: Iterable) -> 'Graph':
        return Graph(self.vertices, sort_edges(set(self.edges) | {edge_of(*e) for e in edges}))

    def induced(self, vertices: Iterable) -> 'Graph':
        keep = set(vertices)
        return Graph(
            sort_vertices(keep),
            tuple(e for e in self.edges if e[0] in keep and e[1] in keep),
        )

    def without_vertices(self, vertices: Iterable) -> 'Graph':
        drop = set(vertices)
        return self.induced(v for v in self.vertices if v not in drop)


@dataclass(frozen=True)
class Digraph:
    """Directed graph without loops or parallel arcs. Build with `build_digraph`."""
    vertices: tuple
    arcs: tuple

    @cached_property
    def _in(self) -> dict:
        ins = {v: set() for v in self.vertices}
        for u, v in self.arcs:
            ins[v].add(u)
        return {v: frozenset(s) for v, s in ins.items()}

    @cached_property
    def _out(self) -> dict:
        outs = {v: set() for v in self.vertices}
        for u, v in self.arcs:
            outs[u].add(v)
        return {v: frozenset(s) for v, s in outs.items()}

    @cached_property
    def nx(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(self.arcs)
        return graph

    def __contains__(self, v):
        return v in self._in

    def in_neighbors(self, v) -> tuple:
        return sort_vertices(self._in[v])

    def out_neighbors(self, v) -> tuple:
        return sort_vertices(self._out[v])

    def sources(self) -> tuple:
        """Vertices with empty in-neighbourhood, in vertex order."""
        return tuple(v for v in self.vertices if not self._in[v])

    def with_arcs(self, arcs: Iterable, vertices: Iterable = ()) -> 'Digraph':
        return _make_digraph(list(self.vertices) + list(vertices), set(self.arcs) | set(arcs))

    def without_vertices(self, vertices: Iterable) -> 'Digraph':
        drop = set(vertices)
        return _make_digraph(
            [v for v in self.vertices if v not in drop],
            [a for a in self.arcs if a[0] not in drop and a[1] not in drop],
        )

    def relabel(self, mapping: dict) -> 'Digraph':
        def rename(v):
            return mapping.get(v, v)
        return _make_digraph(
            [rename(v) for v in self.vertices],
            [(rename(u), rename(v)) for u, v in self.arcs],
        )


def _arc_key(a):
    return (vertex_key(a[0]), vertex_key(a[1]))


def _make_digraph(vertices, arcs) -> Digraph:
    return Digraph(sort_vertices(set(vertices)), tuple(sorted(set(arcs), key=_arc_key)))


def build_graph(vertices: Iterable, edges: Iterable) -> Graph:
    declared = set()
    for v in vertices:
        _check_identifier(v)
        if isinstance(v, str) and v.startswith('$'):
            raise ReservedIdentifier(f'Vertex {v!r} uses the reserved "$" namespace.')
        if v in declared:
            raise DuplicateVertex(f'Duplicate vertex {v!r}.')
        declared.add(v)

    seen = set()
    for pair in edges:
        u, v = pair
        if u == v:
            raise SelfLoop(f'Self-loop at vertex {u!r}.')
        for endpoint in (u, v):
            if endpoint not in declared:
                raise UndeclaredEndpoint(f'Edge {u!r}-{v!r} uses undeclared vertex {endpoint!r}.')
        e = edge_of(u, v)
        if e in seen:
            raise DuplicateEdge(f'Duplicate edge {u!r}-{v!r}.')
        seen.add(e)

    return Graph(sort_vertices(declared), sort_edges(seen))


def build_digraph(vertices: Iterable, arcs: Iterable) -> Digraph:
    declared = set()
    for v in vertices:
        _check_identifier(v)
        if v in declared:
            raise DuplicateVertex(f'Duplicate vertex {v!r}.')
        declared.add(v)

    seen = set()
    for pair in arcs:
        u, v = pair
        if u == v:
            raise SelfLoop(f'Self-loop at vertex {u!r}.')
        for endpoint in (u, v):
            if endpoint not in declared:
                raise UndeclaredEndpoint(f'Arc {u!r}->{v!r} uses undeclared vertex {endpoint!r}.')
        if (u, v) in seen:
            raise DuplicateEdge(f'Duplicate arc {u!r}->{v!r}.')
        seen.add((u, v))

    return _make_digraph(declared, seen)


def canonical_cycle(sequence: Iterable) -> tuple:
    """Rotate and reflect so the least vertex comes first and its smaller neighbour second."""
    seq = list(sequence)
    start = min(range(len(seq)), key=lambda i: vertex_key(seq[i]))
    rotated = seq[start:] + seq[:start]
    if len(rotated) > 2 and vertex_key(rotated[-1]) < vertex_key(rotated[1]):
        rotated = [rotated[0]] + rotated[:0:-1]
    return tuple(rotated)


@dataclass(frozen=True)
class Cycle:
    vertices: tuple

    @classmethod
    def from_sequence(cls, sequence: Iterable) -> 'Cycle':
        return cls(canonical_cycle(sequence))

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    @property
    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    def edges(self) -> tuple:
        n = len(self.vertices)
        return sort_edges((self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n))

    def sort_key(self):
        return tuple(vertex_key(v) for v in self.vertices)

    def is_cycle_of(self, g: Graph) -> bool:
        return (
            len(self.vertices) >= 3
            and len(set(self.vertices)) == len(self.vertices)
            and all(g.has_edge(u, v) for u, v in self.edges())
        )

    def chords(self, g: Graph) -> tuple:
        on_cycle = set(self.edges())
        members = self.vertex_set
        return tuple(
            e for e in g.induced(members).edges if e not in on_cycle
        )


Hole = Cycle


def connected_components(g: Graph) -> list:
    components = [sort_vertices(c) for c in nx.connected_components(g.nx)]
    return sorted(components, key=lambda c: vertex_key(c[0]))


def is_connected(g: Graph) -> bool:
    return len(connected_components(g)) <= 1


def cut_vertices(g: Graph) -> frozenset:
    return frozenset(nx.articulation_points(g.nx))


def bridges(g: Graph) -> frozenset:
    return frozenset(edge_of(u, v) for u, v in nx.bridges(g.nx))


def is_cut_edge(g: Graph, e) -> bool:
    return g.require_edge(e) in bridges(g)


def is_tree(g: Graph) -> bool:
    return len(g.vertices) >= 1 and len(g.edges) == len(g.vertices) - 1 and is_connected(g)


def is_triangle_free(g: Graph) -> bool:
    return not any(nx.triangles(g.nx).values())


def shortest_path_avoiding(g: Graph, source, to: Iterable, forbidden_internal: Iterable = ()) -> Optional[Path]:
    """
    Shortest path from `source` to any vertex of `to` whose internal vertices
    avoid `forbidden_internal`. Among shortest paths the lexicographically
    smallest vertex sequence wins; returns None when no such path exists.
    """
    targets = set(to)
    forbidden = set(forbidden_internal)
    if source in targets:
        return (source,)

    parent = {source: None}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in g.neighbors(u):
            if w in parent:
                continue
            parent[w] = u
            if w in targets:
                path = [w]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return tuple(reversed(path))
            if w not in forbidden:
                queue.append(w)
    return None


def _dot_id(v) -> str:
    return json.dumps(str(v))


def graph_to_dot(g: Graph, name: str = 'G') -> str:
    lines = [f'graph {_dot_id(name)} {{']
    lines += [f'  {_dot_id(v)};' for v in g.vertices]
    lines += [f'  {_dot_id(u)} -- {_dot_id(v)};' for u, v in g.edges]
    lines.append('}')
    return '\n'.join(lines) + '\n'


def digraph_to_dot(d: Digraph, name: str = 'D', highlight: Iterable = ()) -> str:
    marked = set(highlight)
    lines = [f'digraph {_dot_id(name)} {{']
    for v in d.vertices:
        style = ' [shape=box]' if v in marked else ''
        lines.append(f'  {_dot_id(v)}{style};')
    lines += [f'  {_dot_id(u)} -> {_dot_id(v)};' for u, v in d.arcs]
    lines.append('}')
    return '\n'.join(lines) + '\n'
