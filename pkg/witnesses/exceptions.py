"""
Exceptions raised by the witnesses toolkit.

Every error carries a human readable `detail`, a stable `code`, and, where a
graph instance is involved, an `instance` payload (plain JSON data) so that
callers can dump the offending input verbatim.
"""


class WitnessError(Exception):
    default_detail = 'Witness toolkit error.'
    default_code = 'error'

    def __init__(self, detail=None, code=None, instance=None):
        if detail is None:
            detail = self.default_detail
        if code is None:
            code = self.default_code
        self.detail = str(detail)
        self.code = code
        self.instance = instance
        super().__init__(self.detail)

    def __str__(self):
        return self.detail

    def get_full_details(self):
        data = {'message': self.detail, 'code': self.code}
        if self.instance is not None:
            data['instance'] = self.instance
        return data


class GraphValidationError(WitnessError):
    default_detail = 'Invalid graph.'
    default_code = 'invalid'


class InvalidVertex(GraphValidationError):
    default_detail = 'Vertex identifiers must be integers or strings.'
    default_code = 'invalid_vertex'


class ReservedIdentifier(GraphValidationError):
    default_detail = 'Vertex identifiers starting with "$" are reserved for added vertices.'
    default_code = 'reserved_identifier'


class DuplicateVertex(GraphValidationError):
    default_detail = 'Duplicate vertex.'
    default_code = 'duplicate_vertex'


class SelfLoop(GraphValidationError):
    default_detail = 'Self-loops are not allowed.'
    default_code = 'self_loop'


class DuplicateEdge(GraphValidationError):
    default_detail = 'Duplicate edge.'
    default_code = 'duplicate_edge'


class UndeclaredEndpoint(GraphValidationError):
    default_detail = 'Edge endpoint is not a declared vertex.'
    default_code = 'undeclared_endpoint'


class EdgeNotPresent(WitnessError):
    default_detail = 'Edge is not present in the graph.'
    default_code = 'edge_not_present'


class BudgetExceeded(WitnessError):
    default_detail = 'Search budget exceeded; the input is outside desk scale.'
    default_code = 'budget_exceeded'


class OracleCapExceeded(WitnessError):
    default_detail = 'Graph has too many vertices for the exact oracle.'
    default_code = 'oracle_cap_exceeded'


class PreconditionViolation(WitnessError):
    default_detail = 'Operation precondition violated.'
    default_code = 'precondition'


class ConstructionAssertion(WitnessError):
    default_detail = 'A construction step produced an unexpected structure.'
    default_code = 'construction_assertion'


class LemmaCondViolation(ConstructionAssertion):
    default_detail = 'No clique vertex satisfies condition (a) or (b).'
    default_code = 'lemma_condition_violation'


class HypothesisAnomaly(ConstructionAssertion):
    default_detail = 'Triangle-free instance violates |E| = |V| + h - 1.'
    default_code = 'hypothesis_anomaly'


class AssignmentSearchExhausted(ConstructionAssertion):
    default_detail = 'No vertex order admits the required prey assignment.'
    default_code = 'assignment_exhausted'


class UnsupportedGraphClass(WitnessError):
    default_detail = 'Graph is outside the supported classes.'
    default_code = 'unsupported_class'


class GenerationError(WitnessError):
    default_detail = 'Instance generation failed.'
    default_code = 'generation_failed'
