import re

import pytest
from hypothesis import given, strategies as st

from kgconflict.errors import EntityNotFoundError
from kgconflict.kgstore import (
    FilterConfig,
    KnowledgeGraph,
    SYMBOL_LABEL_PATTERN,
    Triplet,
    apply_filters,
    content_hash,
    deserialize_graph,
    load_graph,
    neighbors,
    read_graph_cache,
    serialize_graph,
    write_graph_cache,
)


def test_load_counts_problem_lines():
    lines = [
        "Q1\tP22\tQ2",
        "Q1\tP22",  # malformed: 2 columns
        "Q3\tP22\tQ3",  # self-loop
        "Q1\tP22\tQ2",  # duplicate
        "",
        "Q2\tP22\tQ3",
    ]
    graph, report = load_graph(lines)
    assert graph.triplet_count == 2
    assert report.malformed_lines == 1
    assert report.self_loops_dropped == 1
    assert report.duplicates_dropped == 1
    assert report.dangling_count == 0


def test_load_flags_dangling_against_alias_files():
    graph, report = load_graph(
        ["Q1\tP22\tQ2", "Q1\tP22\tQ9"],
        entity_alias_source=["Q1\ta", "Q2\tb"],
    )
    assert graph.triplet_count == 1
    assert report.dangling_count == 1
    assert report.dangling[0].object == "Q9"


def test_indexes_and_degree(tiny_graph):
    assert [t.object for t in tiny_graph.out_index["Q1"]] == ["Q2", "Q4"]
    assert [t.subject for t in tiny_graph.in_index["Q3"]] == ["Q2"]
    assert tiny_graph.degree["Q1"] == 2
    assert tiny_graph.degree["Q2"] == 2
    assert tiny_graph.degree["Q3"] == 1


def test_isolated_aliased_entity_present_with_no_neighbors(tiny_graph):
    assert tiny_graph.has_entity("Q5")
    assert neighbors(tiny_graph, "Q5") == []
    assert tiny_graph.degree["Q5"] == 0


def test_neighbors_unknown_entity_raises(tiny_graph):
    with pytest.raises(EntityNotFoundError):
        neighbors(tiny_graph, "Q99")


def test_neighbors_directions(tiny_graph):
    both = neighbors(tiny_graph, "Q2", "both")
    assert len(both) == 2
    assert neighbors(tiny_graph, "Q2", "out")[0].object == "Q3"
    assert neighbors(tiny_graph, "Q2", "in")[0].subject == "Q1"
    with pytest.raises(ValueError):
        neighbors(tiny_graph, "Q2", "sideways")


def test_neighbors_deterministic_order():
    g = KnowledgeGraph(
        [Triplet("A", "P2", "C"), Triplet("A", "P1", "B"), Triplet("Z", "P1", "A")]
    )
    order = [(t.relation, t.subject, t.object) for t in neighbors(g, "A")]
    # relation id first, then counterpart id
    assert order == [("P1", "A", "B"), ("P1", "Z", "A"), ("P2", "A", "C")]


def test_symbol_label_pattern():
    pat = re.compile(SYMBOL_LABEL_PATTERN)
    assert pat.match("***")
    assert pat.match("!!")
    assert pat.match("")
    assert not pat.match("a*b")
    assert not pat.match("42")


def test_apply_filters_denylist_and_pattern():
    g = KnowledgeGraph(
        [Triplet("Q1", "P22", "Q2"), Triplet("Q2", "P22", "Q3")],
        {"Q1": ["alan"], "Q2": ["**"], "Q3": ["carl"]},
    )
    filtered = apply_filters(
        g, FilterConfig(top_degree_cutoff=0, denylist_pattern=SYMBOL_LABEL_PATTERN)
    )
    assert filtered.triplet_count == 0
    assert not filtered.has_entity("Q2")  # pruned from aliases too
    assert filtered.has_entity("Q1")  # survives as an aliased isolated node


def test_apply_filters_top_degree_ties_break_lexicographically():
    # A and B both have degree 2; cutoff 1 must drop A (lexicographically first).
    g = KnowledgeGraph(
        [
            Triplet("A", "P1", "X"),
            Triplet("A", "P1", "Y"),
            Triplet("B", "P1", "X2"),
            Triplet("B", "P1", "Y2"),
        ]
    )
    filtered = apply_filters(g, FilterConfig(top_degree_cutoff=1))
    subjects = {t.subject for t in filtered.triplets}
    assert subjects == {"B"}


def test_apply_filters_relation_whitelist(tiny_graph):
    filtered = apply_filters(
        tiny_graph,
        FilterConfig(top_degree_cutoff=0, relation_whitelist=frozenset({"P25"})),
    )
    assert [t.relation for t in filtered.triplets] == ["P25"]


def test_serialize_round_trip(tiny_graph):
    again = deserialize_graph(serialize_graph(tiny_graph))
    assert again.triplets == tiny_graph.triplets
    assert again.entity_aliases == tiny_graph.entity_aliases


def test_graph_cache_round_trip(tiny_graph, tmp_path):
    key = content_hash(["Q1\tP22\tQ2"])
    path = write_graph_cache(tiny_graph, tmp_path, key)
    assert path.exists()
    cached = read_graph_cache(tmp_path, key)
    assert cached is not None and cached.triplets == tiny_graph.triplets
    assert read_graph_cache(tmp_path, "missing") is None


_ids = st.text(alphabet="ABCQ123", min_size=1, max_size=4)


@given(
    st.lists(
        st.tuples(_ids, _ids, _ids).filter(lambda t: t[0] != t[2]),
        min_size=0,
        max_size=30,
    )
)
def test_index_consistency_property(raw):
    """Every triplet appears in exactly its subject's out index and its
    object's in index; degree is the sum of both."""
    g = KnowledgeGraph(Triplet(*t) for t in dict.fromkeys(raw))
    for t in g.triplets:
        assert t in g.out_index[t.subject]
        assert t in g.in_index[t.object]
    for e in g.out_index:
        assert g.degree[e] == len(g.out_index[e]) + len(g.in_index[e])
    total = sum(len(v) for v in g.out_index.values())
    assert total == g.triplet_count
