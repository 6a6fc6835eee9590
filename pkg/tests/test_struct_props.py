"""Structural invariants over generated graphs, driven by hypothesis.

The seeded proptest harness exercises the transfer laws; these are the
cheap algebraic facts every layer below relies on, so they get fuzzed
with free-form strategies instead of curated instances.
"""

import json

from hypothesis import given, settings, strategies as st

from shiftlab import io
from shiftlab.graph import (
    LabeledGraph,
    determinize,
    is_right_resolving,
    is_sublanguage,
    reverse,
    scc_components,
    trim,
    words_of_length,
)

SYMBOLS = ("a", "b", "c")
VERTS = ("p", "q", "r", "s")


@st.composite
def graphs(draw):
    n = draw(st.integers(min_value=1, max_value=4))
    vertices = list(VERTS[:n])
    k = draw(st.integers(min_value=1, max_value=3))
    alphabet = list(SYMBOLS[:k])
    m = draw(st.integers(min_value=1, max_value=8))
    edges = []
    for i in range(m):
        src = draw(st.sampled_from(vertices))
        dst = draw(st.sampled_from(vertices))
        label = draw(st.sampled_from(alphabet))
        edges.append((f"t{i}", src, dst, label))
    return LabeledGraph.make(alphabet, vertices, edges)


@given(graphs())
@settings(max_examples=120, deadline=None)
def test_json_round_trip_is_identity(g):
    blob = io.dumps(io.graph_to_json(g))
    back = io.graph_from_json(json.loads(blob))
    assert io.graph_to_json(back) == io.graph_to_json(g)
    assert io.dumps(io.graph_to_json(back)) == blob


@given(graphs())
@settings(max_examples=120, deadline=None)
def test_trim_is_idempotent_and_preserves_language(g):
    t = trim(g)
    assert trim(t).edges == t.edges
    for n in (1, 2, 3):
        assert words_of_length(t, n) == words_of_length(g, n)


@given(graphs())
@settings(max_examples=120, deadline=None)
def test_scc_components_partition_the_vertices(g):
    comps = scc_components(g)
    seen = [v for c in comps for v in c.vertices]
    assert sorted(seen) == sorted(g.vertices)
    assert len(seen) == len(set(seen))


@given(graphs())
@settings(max_examples=80, deadline=None)
def test_determinize_is_right_resolving_with_equal_language(g):
    d = determinize(g)
    assert is_right_resolving(d)
    assert is_sublanguage(g, d) and is_sublanguage(d, g)


@given(graphs())
@settings(max_examples=120, deadline=None)
def test_reverse_is_an_involution_on_the_language(g):
    r = reverse(g)
    assert {e.id for e in reverse(r).edges} == {e.id for e in g.edges}
    for n in (1, 2, 3):
        flipped = sorted(tuple(reversed(w)) for w in words_of_length(r, n))
        assert flipped == words_of_length(g, n)
