import numpy as np
import pytest

from treeshift import (
    PathSelector,
    TreeSpecError,
    build_tree,
    children_n,
    descendants,
    enumerate_paths,
    parse_tree_spec,
)

from oracles import children_n_brute


def test_bfs_relabeling_and_generations():
    # Input order deliberately scrambled; ids must come out breadth first.
    spec = {
        "vertices": ["c", "root", "a", "b", "d"],
        "edges": [[1, 2], [1, 3], [2, 0], [2, 4]],
    }
    t = build_tree(spec)
    assert t.labels[0] == "root"
    assert t.parent[0] is None
    assert t.depth == (0, 1, 1, 2, 2)
    assert t.generations == ((0,), (1, 2), (3, 4))
    for d, gen in enumerate(t.generations):
        assert list(gen) == sorted(gen)
        assert all(t.depth[v] == d for v in gen)
    # Generations occupy contiguous id ranges under BFS numbering.
    flat = [v for gen in t.generations for v in gen]
    assert flat == list(range(t.n_vertices))


def test_children_sorted_and_parent_consistency():
    t = build_tree({"family": "random", "depth": 5, "params": {"seed": 9, "branching": (1, 2, 3)}})
    for v in range(t.n_vertices):
        kids = t.children[v]
        assert list(kids) == sorted(kids)
        for w in kids:
            assert t.parent[w] == v
            assert t.depth[w] == t.depth[v] + 1


def test_family_shapes():
    chain = build_tree({"family": "unilateral", "depth": 5})
    assert chain.n_vertices == 6 and chain.max_depth == 5
    assert not chain.genuine_leaves

    broom = build_tree({"family": "broom", "params": {"arms": 4}})
    assert broom.n_vertices == 5 and broom.max_depth == 1
    assert broom.genuine_leaves == frozenset({1, 2, 3, 4})

    bl = build_tree({"family": "broom_leaf", "params": {"arms": 3}})
    assert bl.n_vertices == 5 and bl.max_depth == 2
    omega = bl.vertex_with_label("omega")
    assert bl.depth[omega] == 2
    assert bl.parent[omega] == bl.vertex_with_label("1")
    # Arms past the first are genuine leaves despite sitting above the cut.
    assert bl.genuine_leaves == frozenset({bl.vertex_with_label("2"), bl.vertex_with_label("3"), omega})

    t2 = build_tree({"family": "t2", "depth": 3})
    assert t2.n_vertices == 7
    assert t2.labels[0] == "(0,0)"
    v = t2.vertex_with_label("(2,3)")
    assert t2.depth[v] == 3
    assert t2.parent[v] == t2.vertex_with_label("(2,2)")


def test_random_family_determinism_and_branching_law():
    a = build_tree({"family": "random", "depth": 6, "params": {"seed": 3}})
    b = build_tree({"family": "random", "depth": 6, "params": {"seed": 3}})
    assert a == b
    c = build_tree({"family": "random", "depth": 6, "params": {"seed": 4}})
    assert a != c
    for v in range(a.n_vertices):
        if a.depth[v] < a.max_depth:
            assert len(a.children[v]) in (1, 2)


def test_children_n_matches_brute_force():
    rng = np.random.default_rng(20240814)
    for _ in range(20):
        seed = int(rng.integers(0, 10_000))
        t = build_tree({"family": "random", "depth": 5, "params": {"seed": seed, "branching": (1, 2, 3)}})
        for u in range(t.n_vertices):
            for n in range(0, t.max_depth - t.depth[u] + 2):
                assert children_n(t, u, n) == children_n_brute(t, u, n)


def test_descendants_contains_subtree():
    t = build_tree({"family": "t2", "depth": 4})
    v = t.vertex_with_label("(1,2)")
    expect = sorted(t.vertex_with_label(f"(1,{j})") for j in range(2, 5))
    assert descendants(t, v) == expect
    assert descendants(t, 0) == list(range(t.n_vertices))


def test_enumerate_paths_counts_and_flags():
    t2 = build_tree({"family": "t2", "depth": 4})
    paths = enumerate_paths(t2)
    assert len(paths) == 2
    assert all(len(p.vertices) == 5 for p in paths)
    assert not any(p.leaf_terminated for p in paths)

    bl = build_tree({"family": "broom_leaf", "params": {"arms": 3}})
    paths = enumerate_paths(bl)
    # One path per childless vertex: arms 2, 3 and omega.
    assert len(paths) == 3
    assert all(p.leaf_terminated for p in paths)


def test_path_selector_validation():
    t = build_tree({"family": "t2", "depth": 3})
    good = PathSelector.from_child_indices(t, [1, 0, 0])
    assert t.labels[good.terminal] == "(2,3)"
    assert PathSelector.from_vertices(t, good.vertices).vertices == good.vertices
    with pytest.raises(ValueError):
        PathSelector.from_vertices(t, [1, 3])
    with pytest.raises(ValueError):
        PathSelector.from_vertices(t, [0, t.vertex_with_label("(1,2)")])
    with pytest.raises(ValueError):
        PathSelector.from_child_indices(t, [2])
    with pytest.raises(ValueError):
        PathSelector.from_child_indices(t, [0, 0, 0, 0])


def test_spec_rejects_malformed_documents():
    with pytest.raises(TreeSpecError):
        build_tree({"vertices": [], "edges": []})
    with pytest.raises(TreeSpecError):
        build_tree({"vertices": ["a", "b", "c"], "edges": [[0, 2], [1, 2]]})
    with pytest.raises(TreeSpecError):
        build_tree({"vertices": ["a", "b"], "edges": [[0, 1], [1, 0]]})
    with pytest.raises(TreeSpecError):
        # Detached two-cycle: every vertex has a parent somewhere.
        build_tree({"vertices": ["a", "b", "c"], "edges": [[1, 2], [2, 1]]})
    with pytest.raises(TreeSpecError):
        build_tree({"vertices": ["a", "b", "c"], "edges": [[0, 1]]})
    with pytest.raises(TreeSpecError):
        build_tree({"vertices": ["a"], "edges": [], "color": "red"})
    with pytest.raises(TreeSpecError):
        build_tree({"family": "unilateral", "depth": 3, "weights": [1.0]})
    with pytest.raises(TreeSpecError):
        build_tree({"family": "no_such_family", "depth": 3})
    with pytest.raises(TreeSpecError):
        build_tree({"family": "mad"})
    with pytest.raises(TreeSpecError):
        build_tree({"family": "broom", "depth": 3, "params": {"arms": 2}})
    with pytest.raises(TreeSpecError):
        build_tree({"edges": [[0, 1]]})
    with pytest.raises(TreeSpecError):
        parse_tree_spec({"vertices": ["a", "b"], "edges": [[0, 1]], "weights": [1.0, 2.0]})


def test_explicit_weights_follow_relabeling():
    # Weights ride on edges; after BFS renumbering they key by child id.
    spec = {
        "vertices": ["b", "root", "a"],
        "edges": [[1, 2], [2, 0]],
        "weights": [0.25, 4.0],
    }
    t, weights = parse_tree_spec(spec)
    assert t.labels == ("root", "a", "b")
    assert weights == [0.25, 4.0]


def test_interior_and_leaf_queries():
    bl = build_tree({"family": "broom_leaf", "params": {"arms": 3}})
    assert bl.is_interior(0)
    assert not bl.is_interior(bl.vertex_with_label("omega"))
    arm2 = bl.vertex_with_label("2")
    assert bl.is_leaf(arm2) and bl.is_interior(arm2)
    assert set(bl.interior_vertices()) == {v for v in range(bl.n_vertices) if bl.depth[v] < 2}
