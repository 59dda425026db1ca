"""Wold-type decomposition machinery for the truncated shift.

The kernel of the adjoint splits into blocks with pairwise disjoint
supports: the root direction, plus one block per parent vertex whose
children carry the single linear constraint sum of lam(v) * f(v) = 0 over
the siblings. Blocks supported on the boundary generation are exact for
the truncated operator but meaningless for the untruncated one, so kernel
queries exclude them by default (interior_only=True).

Peeling walks a vector down the orthogonal ladder: project onto the
kernel, left-invert the remainder through the diagonal of S* S, repeat.
Reconstruction re-applies the shift Horner style and is exact on the
truncated space (the residual carries the final remainder plus the
boundary-block part of the input).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from .ops import (
    HorizonError,
    TreeVector,
    TruncatedShift,
    _same_tree,
    apply_adjoint,
    apply_shift,
    is_injective,
)
from .tree import VertexId


@dataclass(frozen=True)
class KernelBlock:
    """Orthonormal vectors supported on one sibling set (or the root)."""

    parent: Optional[VertexId]
    vectors: tuple[TreeVector, ...]

    @property
    def dim(self) -> int:
        return len(self.vectors)


@dataclass(frozen=True)
class KernelBasis:
    blocks: tuple[KernelBlock, ...]
    interior_only: bool

    @property
    def total_dim(self) -> int:
        return sum(b.dim for b in self.blocks)

    def vectors(self) -> list[TreeVector]:
        return [v for b in self.blocks for v in b.vectors]

    def support_depths(self, tree) -> list[int]:
        """Depth of the generation each block lives on."""
        return [0 if b.parent is None else tree.depth[b.parent] + 1 for b in self.blocks]


@dataclass(frozen=True)
class WoldComponents:
    """Kernel-valued layers f_k with f = sum of S^k f_k plus residual."""

    components: tuple[TreeVector, ...]
    residual: TreeVector
    horizon: int


@dataclass(frozen=True)
class BalanceResult:
    ok: bool
    u: Optional[VertexId] = None
    v: Optional[VertexId] = None
    power: Optional[int] = None
    norm_u: Optional[float] = None
    norm_v: Optional[float] = None


@dataclass(frozen=True)
class GramResult:
    matrix: np.ndarray
    n: int
    m: int
    exceeds_horizon: bool

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.matrix))) if self.matrix.size else 0.0


def _sibling_block(s: TruncatedShift, u: VertexId) -> Optional[KernelBlock]:
    tree = s.tree
    kids = tree.children[u]
    if not kids:
        return None
    lam = s.weights.lam
    weights = [lam[v] for v in kids]
    if all(w == 0 for w in weights):
        # Vacuous constraint: every sibling direction lies in the kernel.
        vecs = tuple(TreeVector.basis(tree, v) for v in kids)
        return KernelBlock(parent=u, vectors=vecs)
    pivot_pos = next(i for i, w in enumerate(weights) if w != 0)
    pivot = kids[pivot_pos]
    candidates = []
    for i, v in enumerate(kids):
        if i == pivot_pos:
            continue
        # lam(v) e_pivot - lam(pivot) e_v is annihilated exactly.
        candidates.append(TreeVector(tree, {pivot: weights[i], v: -weights[pivot_pos]}))
    vecs: list[TreeVector] = []
    for cand in candidates:
        work = cand
        for b in vecs:
            work = work.minus(b.scaled(work.inner(b)))
        nrm = work.norm()
        if nrm > 1e-14:
            vecs.append(work.scaled(1.0 / nrm))
    if not vecs:
        return None
    return KernelBlock(parent=u, vectors=tuple(vecs))


def kernel_basis(s: TruncatedShift, interior_only: bool = True) -> KernelBasis:
    """Blocked orthonormal basis of the kernel of the adjoint.

    Per parent u the block has dimension (children count - 1) when some
    child weight is nonzero, and full dimension otherwise. Determinism
    comes from the fixed child order feeding a modified Gram-Schmidt pass.
    With interior_only the blocks supported on the boundary generation are
    dropped: their kernel membership is an artifact of cutting the tree.
    """
    tree = s.tree
    blocks = [KernelBlock(parent=None, vectors=(TreeVector.basis(tree, 0),))]
    deepest_parent = tree.max_depth - (2 if interior_only else 1)
    for gen in tree.generations[: deepest_parent + 1]:
        for u in gen:
            block = _sibling_block(s, u)
            if block is not None:
                blocks.append(block)
    return KernelBasis(blocks=tuple(blocks), interior_only=interior_only)


def _cached_basis(s: TruncatedShift, interior_only: bool) -> KernelBasis:
    cache = getattr(s, "_kernel_basis_cache", None)
    if cache is None:
        cache = {}
        s._kernel_basis_cache = cache
    if interior_only not in cache:
        cache[interior_only] = kernel_basis(s, interior_only)
    return cache[interior_only]


def project_kernel(s: TruncatedShift, f: TreeVector, basis: Optional[KernelBasis] = None) -> TreeVector:
    """Orthogonal projection of f onto the span of the kernel basis.

    Defaults to the interior basis. Blocks have disjoint supports, so the
    projection is a per-block expansion in the orthonormal vectors.
    """
    _same_tree(s, f)
    if basis is None:
        basis = _cached_basis(s, True)
    out: dict[VertexId, complex] = {}
    for block in basis.blocks:
        for b in block.vectors:
            coeff = f.inner(b)
            if coeff == 0:
                continue
            for v, c in b.items():
                out[v] = out.get(v, 0j) + coeff * c
    return TreeVector(s.tree, out)


def _boundary_projection(s: TruncatedShift, f: TreeVector) -> TreeVector:
    """Projection onto the kernel blocks supported at the deepest generation."""
    tree = s.tree
    if tree.max_depth == 0:
        return TreeVector.zero(tree)
    out: dict[VertexId, complex] = {}
    for u in tree.generations[tree.max_depth - 1]:
        block = _sibling_block(s, u)
        if block is None:
            continue
        for b in block.vectors:
            coeff = f.inner(b)
            if coeff == 0:
                continue
            for v, c in b.items():
                out[v] = out.get(v, 0j) + coeff * c
    return TreeVector(s.tree, out)


def peel(s: TruncatedShift, f: TreeVector, horizon: int) -> WoldComponents:
    """Split f into kernel-valued layers along powers of the shift.

    Requires the shift to be injective (interior columns nonvanishing and
    no genuine leaves); left inversion divides by the diagonal entries of
    S* S, which are the squared column norms. The residual collects the
    boundary-block part of f plus whatever survives ``horizon`` peels; for
    f supported strictly above the boundary and horizon = max_depth it
    vanishes identically.
    """
    _same_tree(s, f)
    if not 0 <= horizon <= s.max_depth:
        raise HorizonError(f"peel horizon {horizon} outside [0, {s.max_depth}]")
    inj = is_injective(s)
    if not inj.injective:
        reason = "tree has genuine leaves" if inj.interior_injective else (
            f"column at vertex {inj.witness} has norm {inj.min_column_norm}"
        )
        raise ValueError(f"peel needs an injective shift: {reason}")
    basis = _cached_basis(s, True)
    boundary_part = _boundary_projection(s, f)
    layer = project_kernel(s, f, basis)
    components = [layer]
    remainder = f.minus(layer).minus(boundary_part)
    for _ in range(horizon):
        lifted = _left_invert(s, remainder)
        layer = project_kernel(s, lifted, basis)
        components.append(layer)
        remainder = lifted.minus(layer)
    tail = remainder
    for _ in range(horizon):
        if not tail.coeffs:
            break
        tail = apply_shift(s, tail)
    return WoldComponents(
        components=tuple(components), residual=boundary_part.plus(tail), horizon=horizon
    )


def _left_invert(s: TruncatedShift, r: TreeVector) -> TreeVector:
    """Apply the diagonal left inverse (S* S)^(-1) S* to a range vector."""
    up = apply_adjoint(s, r)
    out = {}
    for u, c in up.items():
        d = s.power_norm_sq(u, 1)
        if d > 0:
            out[u] = c / d
    return TreeVector(s.tree, out)


def reconstruct(s: TruncatedShift, comp: WoldComponents) -> TreeVector:
    """Sum of S^k components[k] plus the residual, Horner style."""
    acc = TreeVector.zero(s.tree)
    for layer in reversed(comp.components):
        acc = layer.plus(apply_shift(s, acc)) if acc.coeffs else layer
    return acc.plus(comp.residual)


def is_balanced(s: TruncatedShift, rel_tol: float = 1e-10, abs_tol: float = 1e-12) -> BalanceResult:
    """Are the interior column norms constant within each generation?"""
    for gen in s.tree.generations[:-1]:
        ref: Optional[float] = None
        ref_u: Optional[VertexId] = None
        for u in gen:
            val = math.sqrt(s.power_norm_sq(u, 1))
            if ref is None:
                ref, ref_u = val, u
            elif abs(val - ref) > max(abs_tol, rel_tol * max(abs(val), ref)):
                return BalanceResult(ok=False, u=ref_u, v=u, power=1, norm_u=ref, norm_v=val)
    return BalanceResult(ok=True)


def is_locally_power_balanced(
    s: TruncatedShift, max_n: int, rel_tol: float = 1e-10, abs_tol: float = 1e-12
) -> BalanceResult:
    """Do all sibling pairs share power-column norms up to order max_n?

    Orders are capped at each sibling set's horizon, so every compared
    value is exact for the untruncated tree.
    """
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    tree = s.tree
    for u in range(tree.n_vertices):
        kids = tree.children[u]
        if len(kids) < 2:
            continue
        reach = min(max_n, tree.max_depth - tree.depth[kids[0]])
        first = kids[0]
        for n in range(1, reach + 1):
            ref = math.sqrt(s.power_norm_sq(first, n))
            for v in kids[1:]:
                val = math.sqrt(s.power_norm_sq(v, n))
                if abs(val - ref) > max(abs_tol, rel_tol * max(abs(val), ref)):
                    return BalanceResult(ok=False, u=first, v=v, power=n, norm_u=ref, norm_v=val)
    return BalanceResult(ok=True)


def _dense_images(s: TruncatedShift, n: int, basis: KernelBasis) -> np.ndarray:
    cols = []
    for b in basis.vectors():
        img = b
        for _ in range(n):
            img = apply_shift(s, img)
        cols.append(img.to_dense())
    if not cols:
        return np.zeros((s.tree.n_vertices, 0), dtype=complex)
    return np.column_stack(cols)


def wold_gram(
    s: TruncatedShift, n: int, m: int, basis: KernelBasis, strict: bool = False
) -> GramResult:
    """Pairings <S^n g_i, S^m h_j> over the flattened kernel basis.

    A block whose support depth plus max(n, m) passes the horizon is
    mapped to exact zero by the truncated powers; entries against it are
    therefore exact zeros of the truncated operator but say nothing about
    the untruncated one. Such gram matrices are flagged, and rejected when
    strict=True.
    """
    if n < 0 or m < 0:
        raise ValueError("powers must be nonnegative")
    depths = basis.support_depths(s.tree)
    exceeds = any(d + max(n, m) > s.max_depth for d in depths)
    if strict and exceeds:
        raise HorizonError(
            f"gram orders ({n}, {m}) pass the horizon for a block at depth {max(depths)}"
        )
    a = _dense_images(s, n, basis)
    b = _dense_images(s, m, basis) if m != n else a
    return GramResult(matrix=a.T @ np.conj(b), n=n, m=m, exceeds_horizon=exceeds)


def image_dim(s: TruncatedShift, n: int, basis: KernelBasis, tol: Optional[float] = None) -> int:
    """Numerical rank of S^n applied to the kernel-basis span."""
    a = _dense_images(s, n, basis)
    if a.size == 0:
        return 0
    return int(np.linalg.matrix_rank(a, tol=tol))


def image_intersection_dim(
    s: TruncatedShift, n: int, m: int, basis: KernelBasis, tol: float = 1e-8
) -> int:
    """Dimension of the intersection of the n-th and m-th power images.

    Orthonormalizes both images and counts principal-angle cosines at
    least 1 - tol.
    """
    a = scipy.linalg.orth(_dense_images(s, n, basis))
    b = scipy.linalg.orth(_dense_images(s, m, basis))
    if a.shape[1] == 0 or b.shape[1] == 0:
        return 0
    cosines = scipy.linalg.svdvals(a.conj().T @ b)
    cosines = np.clip(cosines, 0.0, 1.0)
    return int(np.sum(cosines >= 1.0 - tol))
