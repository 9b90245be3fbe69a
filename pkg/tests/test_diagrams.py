"""Diagram validation, graph conversion, composition and juxtaposition."""

import random

import pytest

from tracediagrams.builders import loop_diagram, trace_loop, vertex_pair
from tracediagrams.diagrams import (COVECTOR, SINK, SOURCE, VECTOR, Cap,
                                    Cross, Cup, Diagram, GEdge, GInput,
                                    GNode, GOutput, Id, LayeredDiagram, Mat,
                                    NVertex, canonical_ciliation,
                                    compose_vertical, juxtapose_horizontal,
                                    to_graph, validate_graph,
                                    validate_layered)
from tracediagrams.evaluate import eval_layered
from tracediagrams.fuzz import random_layered_diagram
from tracediagrams.linalg import Matrix

A = Matrix([[2, 3], [4, 5]])
B = Matrix([[1, 2], [0, 1]])


# -- layered validation ------------------------------------------------------

def test_cup_then_cap_is_a_valid_closed_diagram():
    d = LayeredDiagram(2, (), [(Cup(),), (Cap(),)])
    assert validate_layered(d) == []
    assert d.outputs() == ()


def test_wire_count_violation_names_the_layer():
    d = LayeredDiagram(2, (), [(Cup(),), (Id(),)])
    problems = validate_layered(d)
    assert any("wire count 2 vs 1" in p for p in problems)
    assert any("layer 1" in p for p in problems)


def test_mat_on_covector_wire_before_cap_is_valid():
    d = LayeredDiagram(2, (VECTOR, COVECTOR), [(Id(), Mat("A")), (Cap(),)])
    assert validate_layered(d) == []


def test_cap_polarity_violation():
    d = LayeredDiagram(2, (VECTOR, VECTOR), [(Cap(),)])
    assert any("cap requires" in p for p in validate_layered(d))


def test_vertex_piece_validation():
    bad_cil = LayeredDiagram(2, (VECTOR,),
                             [(NVertex(SINK, 1, (1, 1)),)])
    assert any("ciliation" in p for p in validate_layered(bad_cil))
    bad_dir = LayeredDiagram(2, (VECTOR,),
                             [(NVertex("loop", 1, (1, 2)),)])
    assert any("sink/source" in p for p in validate_layered(bad_dir))
    source_needs_covectors = LayeredDiagram(
        2, (VECTOR, VECTOR), [(NVertex(SOURCE, 2, (1, 2)),)])
    assert any("covector" in p for p in validate_layered(source_needs_covectors))


def test_outputs_raises_on_invalid():
    d = LayeredDiagram(2, (), [(Id(),)])
    with pytest.raises(ValueError):
        d.outputs()


# -- graph validation --------------------------------------------------------

def test_single_loop_graph_is_valid():
    g = to_graph(loop_diagram(3))
    assert validate_graph(g) == []
    assert len(g.edges) == 1
    (edge,) = g.edges.values()
    assert edge.tail == ("loop",)
    assert edge.labels == ()


def test_degree_violation():
    g = Diagram(3, [GNode(SINK, ((0, "head"), (1, "head")))],
                {0: GEdge(("loop",), ("loop",)),
                 1: GEdge(("loop",), ("loop",))})
    # fabricate two edge-ends on a degree-3 vertex
    g.edges[0] = GEdge(("vertex", 0), ("vertex", 0))
    problems = validate_graph(g)
    assert any("degree" in p for p in problems)


def test_sink_source_violation():
    # one incoming and one outgoing end both claimed by a "sink"
    edges = {0: GEdge(("vertex", 1), ("vertex", 0)),
             1: GEdge(("vertex", 0), ("vertex", 2)),
             2: GEdge(("vertex", 3), ("vertex", 0))}
    vertices = [GNode(SINK, ((0, "head"), (1, "tail"), (2, "head"))),
                GInput(1), GOutput(1), GInput(2)]
    problems = validate_graph(Diagram(3, vertices, edges))
    assert any("sink/source" in p for p in problems)


def test_boundary_positions_must_be_complete():
    edges = {0: GEdge(("vertex", 0), ("vertex", 1))}
    vertices = [GInput(2), GOutput(1)]
    problems = validate_graph(Diagram(2, vertices, edges))
    assert any("input positions" in p for p in problems)


# -- conversion -------------------------------------------------------------

def test_trace_layering_converts_to_single_labeled_loop():
    g = to_graph(trace_loop(2, "A"))
    assert validate_graph(g) == []
    assert len(g.edges) == 1
    (edge,) = g.edges.values()
    assert edge.tail == ("loop",)
    assert edge.labels == (("A", False),)


def test_kink_converts_to_single_input_output_edge():
    kink = LayeredDiagram(2, (VECTOR,), [(Id(), Cup()), (Cap(), Id())])
    g = to_graph(kink)
    assert len(g.edges) == 1
    (edge,) = g.edges.values()
    assert isinstance(g.vertices[edge.tail[1]], GInput)
    assert isinstance(g.vertices[edge.head[1]], GOutput)
    assert edge.labels == ()


def test_conversion_preserves_vertices_and_label_multiset():
    rng = random.Random(5)
    for _ in range(60):
        d = random_layered_diagram(rng.choice((2, 3)), rng)
        vertex_count = sum(isinstance(p, NVertex)
                           for layer in d.layers for p in layer)
        labels = sorted(p.name for layer in d.layers for p in layer
                        if isinstance(p, Mat))
        g = to_graph(d)
        assert validate_graph(g) == []
        assert sum(isinstance(v, GNode) for v in g.vertices) == vertex_count
        graph_labels = sorted(name for e in g.edges.values()
                              for name, _ in e.labels)
        assert graph_labels == labels


def test_mat_label_order_along_edge():
    # two labels on one open strand: B above A means the product B A
    d = LayeredDiagram(2, (VECTOR,), [(Mat("A"),), (Mat("B"),)])
    g = to_graph(d)
    (edge,) = g.edges.values()
    assert edge.labels == (("A", False), ("B", False))
    t = eval_layered(d, {"A": A, "B": B}).tensor.to_matrix()
    assert t == B @ A


def test_mat_label_order_on_covector_strand():
    # the edge runs downward, so labels accumulate from the top: reading up
    # the page the strand applies A^T then B^T, i.e. (A B)^T overall
    d = LayeredDiagram(2, (COVECTOR,), [(Mat("A"),), (Mat("B"),)])
    g = to_graph(d)
    (edge,) = g.edges.values()
    assert edge.labels == (("B", False), ("A", False))
    assert isinstance(g.vertices[edge.head[1]], GInput)
    t = eval_layered(d, {"A": A, "B": B}).tensor.to_matrix()
    assert t == (A @ B).transpose()
    from tracediagrams.evaluate import eval_contraction
    assert eval_contraction(g, {"A": A, "B": B}).tensor.to_matrix() == \
        (A @ B).transpose()


# -- composition -------------------------------------------------------------

def test_compose_with_identity_slice_keeps_evaluation():
    d = LayeredDiagram(2, (VECTOR,), [(Mat("A"),)])
    ident = LayeredDiagram(2, (VECTOR,), [(Id(),)])
    composed = compose_vertical(ident, d)
    assert eval_layered(composed, {"A": A}).tensor.to_matrix() == A


def test_compose_mat_slices_is_matrix_product():
    bottom = LayeredDiagram(2, (VECTOR,), [(Mat("B"),)])
    top = LayeredDiagram(2, (VECTOR,), [(Mat("A"),)])
    composed = compose_vertical(top, bottom)
    got = eval_layered(composed, {"A": A, "B": B}).tensor.to_matrix()
    assert got == A @ B


def test_compose_trace_decomposition():
    cup = LayeredDiagram(2, (), [(Cup(),)])
    mat = LayeredDiagram(2, (COVECTOR, VECTOR), [(Id(), Mat("A"))])
    cap = LayeredDiagram(2, (COVECTOR, VECTOR), [(Cross(),), (Cap(),)])
    composed = compose_vertical(cap, compose_vertical(mat, cup))
    assert eval_layered(composed, {"A": A}).tensor.as_scalar() == A.trace()


def test_compose_boundary_mismatch():
    cup = LayeredDiagram(2, (), [(Cup(),)])
    with pytest.raises(ValueError):
        compose_vertical(cup, cup)


def test_juxtapose_loops_multiply():
    side = juxtapose_horizontal(loop_diagram(3), loop_diagram(3))
    assert eval_layered(side, {}).tensor.as_scalar() == 9


def test_juxtapose_identity_wires():
    ident = LayeredDiagram(2, (VECTOR,), [(Id(),)])
    side = juxtapose_horizontal(ident, ident)
    from tracediagrams.tensor import Tensor
    assert eval_layered(side, {}).tensor == Tensor.identity(2, 2)


def test_juxtapose_traces_multiply():
    side = juxtapose_horizontal(trace_loop(2, "A"), trace_loop(2, "B"))
    got = eval_layered(side, {"A": A, "B": B}).tensor.as_scalar()
    assert got == A.trace() * B.trace()


def test_juxtapose_pads_unequal_heights():
    tall = trace_loop(2, "A")
    short = LayeredDiagram(2, (VECTOR,), [(Mat("B"),)])
    side = juxtapose_horizontal(tall, short)
    assert validate_layered(side) == []
    got = eval_layered(side, {"A": A, "B": B}).tensor.to_matrix()
    assert got == B.scale(A.trace())


def test_juxtapose_dimension_mismatch():
    with pytest.raises(ValueError):
        juxtapose_horizontal(loop_diagram(2), loop_diagram(3))


def test_fuzzed_diagrams_validate_after_conversion():
    rng = random.Random(11)
    for _ in range(40):
        d = random_layered_diagram(rng.choice((2, 3)), rng)
        assert validate_layered(d) == []
        assert validate_graph(to_graph(d)) == []


def test_canonical_ciliation():
    assert canonical_ciliation(4, 2) == (1, 2, 4, 3)
    assert canonical_ciliation(3, 0) == (3, 2, 1)
    assert canonical_ciliation(3, 3) == (1, 2, 3)


def test_composition_is_associative_at_the_data_level():
    s1 = LayeredDiagram(2, (VECTOR,), [(Mat("A"),)])
    s2 = LayeredDiagram(2, (VECTOR,), [(Mat("B"),)])
    s3 = LayeredDiagram(2, (VECTOR,), [(Id(),)])
    left = compose_vertical(s3, compose_vertical(s2, s1))
    right = compose_vertical(compose_vertical(s3, s2), s1)
    assert left.layers == right.layers
    jl = juxtapose_horizontal(juxtapose_horizontal(s1, s2), s3)
    jr = juxtapose_horizontal(s1, juxtapose_horizontal(s2, s3))
    assert jl.layers == jr.layers and jl.inputs == jr.inputs


def test_vertex_pair_builder_structure():
    g = to_graph(vertex_pair(3, [["A"], [], ["A", "B"]]))
    assert validate_graph(g) == []
    assert sum(isinstance(v, GNode) for v in g.vertices) == 2
    label_lists = sorted(tuple(n for n, _ in e.labels)
                         for e in g.edges.values())
    assert label_lists == [(), ("A",), ("A", "B")]
