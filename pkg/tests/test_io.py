import networkx as nx
import pytest
from hypothesis import given, settings

from helpers import DATA, dags
from scanwidth.exact import dp_solve
from scanwidth.graph import validate
from scanwidth.io import (
    CycleError,
    DuplicateArc,
    ParseError,
    SelfLoop,
    parse_edge_list,
    parse_enewick,
    read_graph,
    serialize_edge_list,
)
from scanwidth.netgen import GenConfig, generate
from scanwidth.reduce import network_level


def as_nx(g):
    h = nx.DiGraph()
    h.add_nodes_from(range(g.n))
    for u, v, w in g.arcs():
        h.add_edge(u, v, weight=w)
    return h


def isomorphic(a, b):
    return nx.is_isomorphic(as_nx(a), as_nx(b), edge_match=lambda x, y: x["weight"] == y["weight"])


def test_star():
    g = parse_edge_list("r a\nr b")
    assert list(g.labels) == ["r", "a", "b"] and g.m == 2


def test_fig1a_file():
    g = read_graph(str(DATA / "fig1a.el"))
    assert g.m == 12 and validate(g).ok
    assert dp_solve(g)[0] == 3


def test_weights_and_comments():
    g = parse_edge_list("# header\na b 3  # heavy\n\nb c\n")
    assert list(g.arcs()) == [(0, 1, 3), (1, 2, 1)]


@pytest.mark.parametrize("text, exc, line", [
    ("a a", SelfLoop, 1),
    ("a b\na b", DuplicateArc, 2),
    ("a b\nb c\nc a", CycleError, 3),
    ("a b x", ParseError, 1),
    ("a b 0", ParseError, 1),
    ("a", ParseError, 1),
])
def test_edge_list_errors(text, exc, line):
    with pytest.raises(exc) as info:
        parse_edge_list(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_newick_tree():
    g = parse_enewick("((a,b),c);")
    assert validate(g).ok
    lvs = [g.labels[v] for v in range(g.n) if not g.out_adj[v]]
    assert sorted(lvs) == ["a", "b", "c"]
    assert g.n == 5


def test_newick_hybrid():
    g = parse_enewick((DATA / "hybrid.nwk").read_text())
    retics = [v for v in range(g.n) if len(g.in_adj[v]) == 2]
    lvs = [v for v in range(g.n) if not g.out_adj[v]]
    assert len(retics) == 1 and len(lvs) == 3
    assert network_level(g) == 1


def test_newick_annotations():
    g = parse_enewick("(('x y':0.5,b:1[&note])#H1:2,(#H1:1,c));")
    assert "x y" in g.labels
    assert sum(len(g.in_adj[v]) == 2 for v in range(g.n)) == 1


@pytest.mark.parametrize("text, fragment", [
    ((DATA / "dangling.nwk").read_text(), "dangling"),
    ("((a,b),c;", "expected"),
    ("((a,b),c));", "unbalanced"),
    ("((a,a),c);", "duplicate"),
    ("((a)#H1,(b)#H1);", "two places"),
    ("", "empty"),
])
def test_newick_errors(text, fragment):
    with pytest.raises(ParseError) as info:
        parse_enewick(text)
    assert fragment in str(info.value)
    assert info.value.line == 1


def test_newick_cycle():
    with pytest.raises(ParseError):
        parse_enewick("((a)#H1,b)#H1;")


def test_round_trip_generated():
    for seed in range(5):
        g = generate(GenConfig(8, 3, seed=seed)).graph
        text = serialize_edge_list(g, {"seed": seed})
        assert text.startswith("# seed: ")
        assert isomorphic(parse_edge_list(text), g)


def test_round_trip_newick():
    g = parse_enewick("((a,(b,(c)#H2)#H1),(#H1,(#H2,d)));")
    assert isomorphic(parse_edge_list(serialize_edge_list(g)), g)


@settings(max_examples=80, deadline=None)
@given(dags(n_max=10, weighted=True))
def test_round_trip_property(g):
    if g.m == 0:
        return
    back = parse_edge_list(serialize_edge_list(g))
    assert isomorphic(back, g)


def test_newick_generated_names_stay_unique():
    g = parse_enewick("((H1,(b)#H1),(#H1,_3));")
    assert len(set(g.labels)) == g.n
    assert "H1" in g.labels and "_3" in g.labels
    assert isomorphic(parse_edge_list(serialize_edge_list(g)), g)


def test_serializer_rejects_unwritable_labels():
    from scanwidth.graph import Digraph
    with pytest.raises(ValueError):
        serialize_edge_list(Digraph(2, [(0, 1)], ["a b", "c"]))
