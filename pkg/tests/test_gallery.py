import json
import math

import numpy as np
import pytest

from treeshift import (
    GallerySpec,
    HorizonError,
    PathSelector,
    TreeSpecError,
    enumerate_paths,
    is_balanced,
    load_shift,
    mad_divergence_partial_sum,
    make,
    path_radius_estimate,
    path_restriction,
    power_norm,
    random_balanced,
    t2_expected_peel_coefficient,
)

from oracles import dense_shift_matrix


def test_mad_weight_rule():
    s = make(GallerySpec(family="mad", depth=6))
    assert s.weights.lam[1] == 1.0
    for v in range(2, 7):
        assert s.weights.lam[v] == v / (v - 1)
    assert s.norm_attained_within_depth == 1


def test_t2_weight_rule_and_validation():
    s = make(GallerySpec(family="t2", depth=4, params={"alpha": 0.25}))
    t = s.tree
    for j in range(1, 5):
        assert s.weights.lam[t.vertex_with_label(f"(1,{j})")] == 1.0
        assert s.weights.lam[t.vertex_with_label(f"(2,{j})")] == 0.25
    for bad in (0.0, 1.0, -0.5, 2.0):
        with pytest.raises(ValueError):
            make(GallerySpec(family="t2", depth=4, params={"alpha": bad}))
    with pytest.raises(ValueError):
        make(GallerySpec(family="t2", depth=4))
    with pytest.raises(ValueError):
        make(GallerySpec(family="t2", params={"alpha": 0.5}))


def test_t2_zero_weight_rule():
    s = make(GallerySpec(family="t2_zero", depth=4))
    t = s.tree
    for j in range(1, 5):
        up = s.weights.lam[t.vertex_with_label(f"(1,{j})")]
        low = s.weights.lam[t.vertex_with_label(f"(2,{j})")]
        if j == 2:
            assert up == 0.0 and low == 0.0
        else:
            assert up == 1.0 and low == 2.0
    assert s.norm_attained_within_depth == 2
    with pytest.raises(ValueError):
        make(GallerySpec(family="t2_zero", depth=2))


def test_broom_weight_rules():
    s = make(GallerySpec(family="broom", params={"arms": 4}))
    assert [s.weights.lam[n] for n in range(1, 5)] == [1.0, 0.5, 1.0 / 3.0, 0.25]
    custom = make(GallerySpec(family="broom", params={"arms": 2, "weights": [0.3, 0.4]}))
    assert custom.weights.lam == {1: 0.3, 2: 0.4}
    with pytest.raises(ValueError):
        make(GallerySpec(family="broom", params={"arms": 3, "weights": [1.0]}))
    with pytest.raises(ValueError):
        make(GallerySpec(family="broom", params={"arms": 2, "weights": [1.0, 0.0]}))

    bl = make(GallerySpec(family="broom_leaf", params={"arms": 3, "omega_weight": 2.5}))
    assert bl.weights.lam[bl.tree.vertex_with_label("omega")] == 2.5
    with pytest.raises(ValueError):
        make(GallerySpec(family="broom_leaf", params={"arms": 3, "omega_weight": 0.0}))


def test_unknown_family_and_stray_params():
    with pytest.raises(ValueError):
        make(GallerySpec(family="nope", depth=3))
    with pytest.raises(ValueError):
        make(GallerySpec(family="unilateral", depth=3, params={"alpha": 0.5}))
    with pytest.raises(ValueError):
        make(GallerySpec(family="mad"))


def test_random_weights_deterministic_and_in_range():
    a = make(GallerySpec(family="random", depth=6, params={"seed": 8}))
    b = make(GallerySpec(family="random", depth=6, params={"seed": 8}))
    assert a.weights.lam == b.weights.lam
    c = make(GallerySpec(family="random", depth=6, params={"seed": 9}))
    assert a.weights.lam != c.weights.lam
    for w in a.weights.lam.values():
        assert 0.5 <= w <= 2.0


def test_random_balanced_hits_generation_targets():
    norms = [1.5, 0.5, 1.0, 2.0, 0.75]
    s = random_balanced(seed=4, branching=(1, 2, 3), depth=5, generation_norms=norms)
    assert is_balanced(s).ok
    for d in range(5):
        for u in s.tree.generations[d]:
            assert abs(power_norm(s, u, 1) - norms[d]) <= 1e-12, (d, u)
    with pytest.raises(ValueError):
        random_balanced(seed=4, branching=(1, 2), depth=5, generation_norms=[1.0, 1.0])
    with pytest.raises(ValueError):
        random_balanced(seed=4, branching=(1, 2), depth=2, generation_norms=[1.0, -1.0])


def test_make_accepts_mapping_form():
    via_map = make({"family": "t2", "depth": 3, "params": {"alpha": 0.5}})
    via_spec = make(GallerySpec(family="t2", depth=3, params={"alpha": 0.5}))
    assert via_map.weights.lam == via_spec.weights.lam


def test_load_shift_documents(tmp_path):
    explicit = {
        "vertices": ["r", "x", "y"],
        "edges": [[0, 1], [1, 2]],
        "weights": [0.5, 2.0],
    }
    s = load_shift(explicit)
    assert s.weights.lam == {1: 0.5, 2: 2.0}

    defaulted = load_shift({"vertices": ["r", "x"], "edges": [[0, 1]]})
    assert defaulted.weights.lam == {1: 1.0}  # absent weights read as 1

    path = tmp_path / "spec.json"
    path.write_text(json.dumps({"family": "mad", "depth": 4}), encoding="utf-8")
    s = load_shift(str(path))
    assert s.weights.lam[4] == 4 / 3

    with pytest.raises(TreeSpecError):
        load_shift({"family": "mystery", "depth": 2})
    with pytest.raises(TreeSpecError):
        load_shift({"family": "mad", "depth": 2, "weights": [1.0, 1.0]})


def test_path_restriction_matches_compressed_operator():
    s = make(GallerySpec(family="t2", depth=5, params={"alpha": 0.5}))
    lower = PathSelector.from_child_indices(s.tree, [1, 0, 0, 0, 0])
    mu = path_restriction(s, lower).mu
    assert mu == (0.5,) * 5
    # Compress the dense operator to the path and compare weights.
    idx = list(lower.vertices)
    sub = dense_shift_matrix(s)[np.ix_(idx, idx)]
    for k in range(5):
        assert abs(sub[k + 1, k] - mu[k]) <= 1e-15
    assert np.count_nonzero(sub) == 5

    other_tree = make(GallerySpec(family="mad", depth=5))
    with pytest.raises(ValueError):
        path_restriction(other_tree, PathSelector(vertices=(0, 99)))


def test_path_radius_estimates():
    mad = make(GallerySpec(family="mad", depth=8))
    chain = enumerate_paths(mad.tree)[0]
    assert path_radius_estimate(mad, chain, 1) == 1.0
    # Products equal the depth, and k^(1/k) decreases from k=3 on.
    assert abs(path_radius_estimate(mad, chain, 4) - 8.0 ** (1 / 8)) <= 1e-13

    t2 = make(GallerySpec(family="t2", depth=6, params={"alpha": 0.5}))
    upper = PathSelector.from_child_indices(t2.tree, [0] * 6)
    lower = PathSelector.from_child_indices(t2.tree, [1] + [0] * 5)
    assert path_radius_estimate(t2, upper, 2) == 1.0
    assert abs(path_radius_estimate(t2, lower, 3) - 0.5) <= 1e-15

    with pytest.raises(ValueError):
        path_radius_estimate(mad, chain, -1)
    with pytest.raises(HorizonError):
        path_radius_estimate(mad, chain, 9)


def test_t2_peel_coefficient_closed_form():
    assert abs(t2_expected_peel_coefficient(0, 0.5) + 0.8) <= 1e-15
    assert abs(t2_expected_peel_coefficient(1, 0.5) + 0.8) <= 1e-15
    assert abs(t2_expected_peel_coefficient(2, 0.5) + 16.0 / 15.0) <= 1e-15
    assert abs(t2_expected_peel_coefficient(16, 0.5) * 0.5) > 1e3
    with pytest.raises(ValueError):
        t2_expected_peel_coefficient(-1, 0.5)
    with pytest.raises(ValueError):
        t2_expected_peel_coefficient(2, 1.5)


def test_divergence_partial_sums_track_harmonic_numbers():
    assert abs(mad_divergence_partial_sum(1) - 1.0) <= 1e-12
    assert abs(mad_divergence_partial_sum(4) - 25.0 / 12.0) <= 1e-10
    h200 = sum(1.0 / k for k in range(1, 201))
    assert abs(mad_divergence_partial_sum(200) - h200) <= 1e-10
    assert mad_divergence_partial_sum(200) > 5.0

    host = make(GallerySpec(family="mad", depth=10))
    assert abs(mad_divergence_partial_sum(6, host) - sum(1.0 / k for k in range(1, 7))) <= 1e-10
    with pytest.raises(HorizonError):
        mad_divergence_partial_sum(11, host)
    with pytest.raises(ValueError):
        mad_divergence_partial_sum(0)
