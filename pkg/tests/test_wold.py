import math

import numpy as np
import pytest
import scipy.linalg

from treeshift import (
    GallerySpec,
    HorizonError,
    TreeVector,
    apply_adjoint,
    apply_shift,
    image_dim,
    image_intersection_dim,
    is_balanced,
    is_locally_power_balanced,
    kernel_basis,
    make,
    peel,
    project_kernel,
    random_balanced,
    reconstruct,
    t2_expected_peel_coefficient,
    wold_gram,
)

from oracles import dense_shift_matrix, random_vector

ALPHA = 0.5


def _t2(depth=8):
    return make(GallerySpec(family="t2", depth=depth, params={"alpha": ALPHA}))


def _random_shift(seed, depth=6):
    return make(GallerySpec(family="random", depth=depth, params={"seed": seed, "branching": (1, 2)}))


def test_kernel_basis_shapes():
    chain = make(GallerySpec(family="unilateral", depth=6))
    kb = kernel_basis(chain)
    assert kb.total_dim == 1 and kb.blocks[0].parent is None

    t2 = _t2()
    kb = kernel_basis(t2)
    assert [b.dim for b in kb.blocks] == [1, 1]
    direction = kb.blocks[1].vectors[0]
    up = t2.tree.vertex_with_label("(1,1)")
    low = t2.tree.vertex_with_label("(2,1)")
    scale = math.sqrt(1 + ALPHA ** 2)
    assert abs(direction.get(up) - ALPHA / scale) <= 1e-15
    assert abs(direction.get(low) + 1.0 / scale) <= 1e-15

    broom = make(GallerySpec(family="broom", params={"arms": 5}))
    interior = kernel_basis(broom)
    assert interior.total_dim == 1  # boundary sibling block excluded
    full = kernel_basis(broom, interior_only=False)
    assert interior.interior_only and not full.interior_only
    assert full.total_dim == 1 + 4
    assert full.support_depths(broom.tree) == [0, 1]


def test_kernel_basis_zero_weight_blocks():
    s = make(GallerySpec(family="t2_zero", depth=4))
    kb = kernel_basis(s)
    dims = {(None if b.parent is None else s.tree.labels[b.parent]): b.dim for b in kb.blocks}
    # Vanishing child weights make the whole sibling span kernel.
    assert dims == {None: 1, "(0,0)": 1, "(1,1)": 1, "(2,1)": 1}
    assert kb.total_dim == 4


def test_kernel_vectors_annihilated():
    for s in (_t2(), make(GallerySpec(family="t2_zero", depth=4)), _random_shift(17)):
        for interior_only in (True, False):
            for b in kernel_basis(s, interior_only).vectors():
                assert apply_adjoint(s, b).norm() <= 1e-12
                assert abs(b.norm() - 1.0) <= 1e-13


def test_projection_idempotent_and_kills_range():
    rng = np.random.default_rng([30, 0])
    for trial in range(10):
        s = _random_shift(int(rng.integers(10_000)))
        f = random_vector(s.tree, rng, unit=True)
        pf = project_kernel(s, f)
        assert project_kernel(s, pf).minus(pf).norm() <= 1e-12, trial
        sg = apply_shift(s, f)
        assert project_kernel(s, sg).norm() <= 1e-12 * max(1.0, sg.norm()), trial


def test_projection_matches_dense_null_space():
    rng = np.random.default_rng([31, 0])
    for trial in range(6):
        s = _random_shift(int(rng.integers(10_000)), depth=4)
        adjoint = dense_shift_matrix(s).T
        basis = scipy.linalg.null_space(adjoint)
        f = random_vector(s.tree, rng)
        want = basis @ (basis.conj().T @ f.to_dense())
        got = project_kernel(s, f, kernel_basis(s, interior_only=False)).to_dense()
        assert np.max(np.abs(got - want)) <= 1e-10 * max(1.0, f.norm()), trial


def test_projection_coefficients_on_two_rays():
    s = _t2()
    low = s.tree.vertex_with_label("(2,1)")
    up = s.tree.vertex_with_label("(1,1)")
    p = project_kernel(s, TreeVector.basis(s.tree, low))
    assert abs(p.get(low) - 0.8) <= 1e-12
    assert abs(p.get(up) + 0.4) <= 1e-12


def test_peel_layer_coefficients_match_closed_form():
    s = _t2(depth=12)
    f = TreeVector(s.tree, {s.tree.vertex_with_label(f"(2,{j})"): 1.0 / j for j in range(1, 13)})
    comp = peel(s, f, 12)
    low = s.tree.vertex_with_label("(2,1)")
    for j in range(11):
        gamma = -comp.components[j].get(low).real
        assert abs(gamma - t2_expected_peel_coefficient(j, ALPHA)) <= 1e-10, j
    assert reconstruct(s, comp).minus(f).norm() <= 1e-10


def test_peel_roundtrip_and_interior_residual():
    rng = np.random.default_rng([32, 0])
    for trial in range(10):
        s = _random_shift(int(rng.integers(10_000)))
        f = random_vector(s.tree, rng, unit=True)
        comp = peel(s, f, s.max_depth)
        assert reconstruct(s, comp).minus(f).norm() <= 1e-10, trial
        interior = f.restricted(list(s.tree.interior_vertices()))
        comp2 = peel(s, interior, s.max_depth)
        assert comp2.residual.norm() <= 1e-10, trial
        assert reconstruct(s, comp2).minus(interior).norm() <= 1e-10, trial


def test_peel_inverts_assembled_components():
    # Build layers straight from kernel blocks, assemble, peel them back.
    rng = np.random.default_rng([33, 0])
    for trial in range(8):
        s = _random_shift(int(rng.integers(10_000)))
        basis = kernel_basis(s)
        depths = basis.support_depths(s.tree)
        horizon = s.max_depth
        layers = []
        for k in range(horizon + 1):
            coeffs = TreeVector.zero(s.tree)
            for b, d in zip(basis.blocks, depths):
                if d + k > s.max_depth:
                    continue  # the image would fall off the window
                for vec in b.vectors:
                    coeffs = coeffs.plus(vec.scaled(complex(rng.standard_normal(), rng.standard_normal())))
            layers.append(coeffs)
        f = TreeVector.zero(s.tree)
        for k in reversed(range(horizon + 1)):
            f = layers[k].plus(apply_shift(s, f))
        comp = peel(s, f, horizon)
        assert comp.residual.norm() <= 1e-10, trial
        for k in range(horizon + 1):
            assert comp.components[k].minus(layers[k]).norm() <= 1e-10, (trial, k)


def test_peel_refusals():
    broom = make(GallerySpec(family="broom", params={"arms": 3}))
    with pytest.raises(ValueError, match="genuine leaves"):
        peel(broom, TreeVector.basis(broom.tree, 0), 1)
    t2z = make(GallerySpec(family="t2_zero", depth=4))
    with pytest.raises(ValueError, match="norm 0.0"):
        peel(t2z, TreeVector.basis(t2z.tree, 0), 2)
    s = _t2(depth=4)
    with pytest.raises(HorizonError):
        peel(s, TreeVector.basis(s.tree, 0), 5)
    with pytest.raises(HorizonError):
        peel(s, TreeVector.basis(s.tree, 0), -1)


def test_balance_witnesses():
    s = _t2()
    res = is_balanced(s)
    assert not res.ok
    assert {res.u, res.v} == {s.tree.vertex_with_label("(1,1)"), s.tree.vertex_with_label("(2,1)")}
    assert res.power == 1
    assert sorted((res.norm_u, res.norm_v)) == [ALPHA, 1.0]

    assert is_balanced(make(GallerySpec(family="unilateral", depth=5))).ok
    assert is_balanced(make(GallerySpec(family="mad", depth=5))).ok


def test_locally_power_balanced_split():
    t2z = make(GallerySpec(family="t2_zero", depth=5))
    assert is_locally_power_balanced(t2z, 4).ok
    assert not is_balanced(t2z).ok

    s = _t2()
    res = is_locally_power_balanced(s, 3)
    assert not res.ok and res.power == 1

    with pytest.raises(ValueError):
        is_locally_power_balanced(s, 0)


def test_random_balanced_fixture_is_balanced():
    s = random_balanced(seed=11, branching=(1, 2, 3), depth=6)
    assert is_balanced(s).ok
    assert is_locally_power_balanced(s, 4).ok
    again = random_balanced(seed=11, branching=(1, 2, 3), depth=6)
    assert s.weights.lam == again.weights.lam


def test_gram_identity_at_zero_powers():
    s = _random_shift(21)
    basis = kernel_basis(s)
    g = wold_gram(s, 0, 0, basis)
    assert not g.exceeds_horizon
    assert np.max(np.abs(g.matrix - np.eye(basis.total_dim))) <= 1e-12


def test_gram_cross_pairing_on_two_rays():
    s = _t2(depth=6)
    basis = kernel_basis(s)
    g = wold_gram(s, 2, 1, basis)
    # Root-block image against the shifted kernel direction.
    want = (ALPHA - ALPHA ** 3) / math.sqrt(1 + ALPHA ** 2)
    assert abs(g.matrix[0, 1] - want) <= 1e-12
    assert abs(g.max_abs - want) <= 1e-12


def test_gram_orthogonality_for_balanced():
    s = random_balanced(seed=5, branching=(1, 2), depth=6)
    basis = kernel_basis(s)
    for n in range(0, 4):
        for m in range(n + 1, 5):
            g = wold_gram(s, n, m, basis)
            assert g.max_abs <= 1e-12, (n, m)


def test_gram_horizon_flag_and_strict_mode():
    s = random_balanced(seed=6, branching=(2,), depth=3)
    basis = kernel_basis(s)
    flagged = wold_gram(s, 2, 3, basis)
    assert flagged.exceeds_horizon
    assert flagged.max_abs <= 1e-12
    with pytest.raises(HorizonError):
        wold_gram(s, 2, 3, basis, strict=True)
    fine = wold_gram(s, 0, 1, basis, strict=True)
    assert not fine.exceeds_horizon


def test_image_dims_on_counterexample_fixtures():
    broom = make(GallerySpec(family="broom", params={"arms": 5}))
    kb = kernel_basis(broom)
    assert image_dim(broom, 1, kb) == 1
    assert image_dim(broom, 2, kb) == 0
    assert image_dim(broom, 3, kb) == 0

    bl = make(GallerySpec(family="broom_leaf", params={"arms": 5}))
    kb = kernel_basis(bl)
    assert image_intersection_dim(bl, 1, 2, kb) == 1

    t2 = _t2(depth=6)
    kb = kernel_basis(t2)
    assert image_intersection_dim(t2, 1, 2, kb) == 0
