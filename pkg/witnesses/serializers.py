"""
JSON interchange formats.

Input serializers return domain objects straight from `validate`, so a
nested serializer hands its parent a `Digraph` or `Graph` rather than a dict.
"""
import io

from rest_framework import serializers
from rest_framework.parsers import JSONParser
from rest_framework.renderers import JSONRenderer

from .competition import TraceStep, Witness
from .exceptions import GraphValidationError
from .generators import FamilySpec
from .graphs import build_digraph, build_graph, sort_vertices


class VertexField(serializers.Field):
    default_error_messages = {
        'invalid': 'Vertex identifiers must be integers or strings.',
    }

    def to_internal_value(self, data):
        if isinstance(data, bool) or not isinstance(data, (int, str)):
            self.fail('invalid')
        return data

    def to_representation(self, value):
        return value


def vertex_list(**kwargs):
    return serializers.ListField(child=VertexField(), **kwargs)


def pair_list(**kwargs):
    return serializers.ListField(
        child=serializers.ListField(child=VertexField(), min_length=2, max_length=2), **kwargs
    )


def _build(builder, *args):
    try:
        return builder(*args)
    except GraphValidationError as exc:
        raise serializers.ValidationError({'non_field_errors': [exc.detail]}, code=exc.code)


class GraphSerializer(serializers.Serializer):
    vertices = vertex_list()
    edges = pair_list()

    def validate(self, attrs):
        return _build(build_graph, attrs['vertices'], [tuple(e) for e in attrs['edges']])


class DigraphSerializer(serializers.Serializer):
    vertices = vertex_list()
    arcs = pair_list()

    def validate(self, attrs):
        return _build(build_digraph, attrs['vertices'], [tuple(a) for a in attrs['arcs']])


class TraceStepSerializer(serializers.Serializer):
    step = serializers.CharField()
    vertices = vertex_list(required=False)
    consumed = vertex_list(required=False)
    produced = vertex_list(required=False)
    detail = serializers.CharField(required=False, allow_blank=True)

    def validate(self, attrs):
        return TraceStep(
            step=attrs['step'],
            vertices=tuple(attrs.get('vertices', ())),
            consumed=tuple(attrs.get('consumed', ())),
            produced=tuple(attrs.get('produced', ())),
            detail=attrs.get('detail', ''),
        )


class WitnessSerializer(serializers.Serializer):
    k = serializers.IntegerField(read_only=True)
    base = vertex_list()
    added = vertex_list()
    digraph = DigraphSerializer()
    trace = TraceStepSerializer(many=True, required=False)

    def validate(self, attrs):
        digraph = attrs['digraph']
        missing = [v for v in list(attrs['base']) + list(attrs['added']) if v not in digraph]
        if missing:
            raise serializers.ValidationError(f'Vertices {missing} are not in the digraph.')
        if len(set(attrs['added'])) != len(attrs['added']):
            raise serializers.ValidationError('Added vertices must be distinct.')
        return Witness(
            digraph=digraph,
            base=sort_vertices(attrs['base']),
            added=tuple(attrs['added']),
            trace=tuple(attrs.get('trace', ())),
        )


class HypothesisReportSerializer(serializers.Serializer):
    h = serializers.IntegerField()
    omega = serializers.IntegerField()
    omega_window = serializers.CharField()
    holes = serializers.SerializerMethodField()
    maximal_cliques = serializers.SerializerMethodField()
    K = serializers.SerializerMethodField()
    holes_pairwise_edge_disjoint = serializers.BooleanField()
    at_most_one_non_edge_maximal_clique = serializers.BooleanField()
    connected = serializers.BooleanField()
    hypotheses_hold = serializers.BooleanField()
    passes = serializers.BooleanField()

    def get_holes(self, obj):
        return [list(H.vertices) for H in obj.holes]

    def get_maximal_cliques(self, obj):
        return [list(c.members) for c in obj.maximal_cliques]

    def get_K(self, obj):
        return list(obj.non_edge_clique.members) if obj.non_edge_clique else None


class CommonPreyCheckSerializer(serializers.Serializer):
    clique = vertex_list()
    vertex = VertexField()
    holds = serializers.BooleanField()
    missing_members = vertex_list()


class VerificationReportSerializer(serializers.Serializer):
    passes = serializers.BooleanField()
    vertex_sets_consistent = serializers.BooleanField()
    acyclic = serializers.BooleanField()
    cycle = vertex_list()
    competition_graph_matches = serializers.BooleanField()
    missing_edges = pair_list()
    extra_edges = pair_list()
    added_isolated = serializers.BooleanField()
    non_isolated_added = vertex_list()
    common_out_neighbor = CommonPreyCheckSerializer(allow_null=True)


class OracleResultSerializer(serializers.Serializer):
    exact = serializers.IntegerField(allow_null=True)
    lower = serializers.IntegerField()
    upper = serializers.IntegerField(allow_null=True)
    nodes = serializers.IntegerField()
    exhausted = serializers.BooleanField()
    witness = WitnessSerializer(allow_null=True)


class FamilySpecSerializer(serializers.Serializer):
    omega = serializers.IntegerField(min_value=2)
    h = serializers.IntegerField(min_value=1)
    hole_lengths = serializers.ListField(child=serializers.IntegerField(min_value=4), required=False)
    attachments = serializers.ListField(child=serializers.RegexField(r'^(edge|pendant):\d+$'), required=False)
    seed = serializers.IntegerField(allow_null=True, required=False)

    def validate(self, attrs):
        return FamilySpec(
            omega=attrs['omega'],
            h=attrs['h'],
            hole_lengths=tuple(attrs.get('hole_lengths', ())),
            attachments=tuple(attrs.get('attachments', ())),
            seed=attrs.get('seed'),
        )


def parse_json(raw: bytes):
    """Parse bytes as JSON; `ParseError` messages carry the line and column."""
    return JSONParser().parse(io.BytesIO(raw))


def load(serializer_class, data):
    serializer = serializer_class(data=data)
    serializer.is_valid(raise_exception=True)
    return serializer.validated_data


def load_bytes(serializer_class, raw: bytes):
    return load(serializer_class, parse_json(raw))


def render(serializer_class, instance) -> bytes:
    return JSONRenderer().render(serializer_class(instance).data, renderer_context={'indent': 2}) + b'\n'

