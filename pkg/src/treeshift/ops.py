"""The weighted shift on a truncated tree as a sparse linear operator.

The shift sends the basis vector at a vertex u to the weighted sum of the
basis vectors at the children of u. Its matrix is sealed implicitly at
construction through two caches: a triangular table of squared power-column
norms and, per vertex, the cumulative weight products along the ancestor
chain. Both caches make the operator layers O(edges * depth) overall.

Truncation contract: applying the shift to mass sitting at the deepest
generation drops that mass (its image lives past the horizon). The dropped
input norm is available through ``boundary_mass``. Quantities whose exact
value would need vertices past the horizon raise ``HorizonError`` instead
of silently degrading.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Union

import numpy as np

from .tree import DirectedTree, VertexId

DEFAULT_ABS_TOL = 1e-10
DEFAULT_REL_TOL = 1e-9


class HorizonError(ValueError):
    """The requested quantity would be contaminated by the truncation."""


def close(a: float, b: float, abs_tol: float = DEFAULT_ABS_TOL, rel_tol: float = DEFAULT_REL_TOL) -> bool:
    """Combined absolute/relative comparison used across the package."""
    return abs(a - b) <= max(abs_tol, rel_tol * max(abs(a), abs(b)))


@dataclass(frozen=True)
class WeightSystem:
    """Nonnegative edge weights keyed by the child endpoint."""

    lam: Mapping[VertexId, float]
    strictly_positive: bool

    @classmethod
    def from_mapping(cls, tree: DirectedTree, mapping: Mapping[VertexId, float]) -> "WeightSystem":
        lam: dict[VertexId, float] = {}
        for v in range(1, tree.n_vertices):
            if v not in mapping:
                raise ValueError(f"missing weight for vertex {v}")
            w = float(mapping[v])
            if w < 0 or not math.isfinite(w):
                raise ValueError(f"weight at vertex {v} must be finite and >= 0, got {w}")
            lam[v] = w
        extra = set(mapping) - set(lam)
        if extra:
            raise ValueError(f"weights given for unknown vertices {sorted(extra)}")
        return cls(lam=lam, strictly_positive=all(w > 0 for w in lam.values()))

    def of(self, v: VertexId) -> float:
        return self.lam[v]


class TreeVector:
    """A sparse vector over the vertex set, coefficients complex.

    Exact-zero coefficients are pruned at construction so the stored
    support is the true support.
    """

    __slots__ = ("tree", "coeffs")

    def __init__(self, tree: DirectedTree, coeffs: Optional[Mapping[VertexId, complex]] = None):
        self.tree = tree
        clean: dict[VertexId, complex] = {}
        if coeffs:
            n = tree.n_vertices
            for v, c in coeffs.items():
                if not 0 <= v < n:
                    raise ValueError(f"invalid vertex id {v!r}")
                c = complex(c)
                if c != 0:
                    clean[v] = c
        self.coeffs = clean

    @classmethod
    def zero(cls, tree: DirectedTree) -> "TreeVector":
        return cls(tree)

    @classmethod
    def basis(cls, tree: DirectedTree, u: VertexId) -> "TreeVector":
        tree.check_vertex(u)
        return cls(tree, {u: 1.0})

    def get(self, v: VertexId) -> complex:
        return self.coeffs.get(v, 0j)

    def items(self):
        return self.coeffs.items()

    @property
    def support(self) -> list[VertexId]:
        return sorted(self.coeffs)

    def norm(self) -> float:
        return math.sqrt(sum((c * c.conjugate()).real for c in self.coeffs.values()))

    def inner(self, other: "TreeVector") -> complex:
        """<self, other> = sum of self(v) * conj(other(v))."""
        _same_tree(self, other)
        a, b = self.coeffs, other.coeffs
        if len(b) < len(a):
            return sum(c.conjugate() * a[v] for v, c in b.items() if v in a)
        return sum(c * b[v].conjugate() for v, c in a.items() if v in b)

    def plus(self, other: "TreeVector") -> "TreeVector":
        _same_tree(self, other)
        out = dict(self.coeffs)
        for v, c in other.coeffs.items():
            out[v] = out.get(v, 0j) + c
        return TreeVector(self.tree, out)

    def minus(self, other: "TreeVector") -> "TreeVector":
        return self.plus(other.scaled(-1.0))

    def scaled(self, c: complex) -> "TreeVector":
        return TreeVector(self.tree, {v: c * x for v, x in self.coeffs.items()})

    def restricted(self, vertices: Iterable[VertexId]) -> "TreeVector":
        keep = set(vertices)
        return TreeVector(self.tree, {v: c for v, c in self.coeffs.items() if v in keep})

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.tree.n_vertices, dtype=complex)
        for v, c in self.coeffs.items():
            out[v] = c
        return out

    def __repr__(self) -> str:
        return f"TreeVector(support={len(self.coeffs)}, norm={self.norm():.6g})"


def _same_tree(a, b) -> None:
    ta = a.tree
    tb = b.tree
    if ta is not tb and ta != tb:
        raise ValueError("tree mismatch between operands")


class TruncatedShift:
    """The weighted shift operator attached to one tree and weight system.

    Power-column norms obey the bottom-up recursion

        norm(S^n e_u)^2 = sum over children w of u of
                          lam(w)^2 * norm(S^(n-1) e_w)^2

    and the full triangular table (u, n) for depth(u) + n <= max_depth is
    sealed eagerly at construction, as are the per-vertex ancestor chains
    with cumulative weight products. Instances are immutable afterwards.
    """

    def __init__(
        self,
        tree: DirectedTree,
        weights: Union[WeightSystem, Mapping[VertexId, float]],
        norm_attained_within_depth: Optional[int] = None,
    ):
        if not isinstance(weights, WeightSystem):
            weights = WeightSystem.from_mapping(tree, weights)
        else:
            WeightSystem.from_mapping(tree, weights.lam)  # revalidate against this tree
        self.tree = tree
        self.weights = weights
        self.norm_attained_within_depth = norm_attained_within_depth
        self._pn2 = self._seal_power_table()
        self._anc = self._seal_ancestor_products()
        interior = [self._pn2[u][1] for u in tree.interior_vertices()]
        self.column_bound = max(interior, default=0.0)

    def _seal_power_table(self) -> list[list[float]]:
        tree = self.tree
        lam = self.weights.lam
        table: list[list[float]] = [[] for _ in range(tree.n_vertices)]
        for gen in reversed(tree.generations):
            for u in gen:
                horizon = tree.max_depth - tree.depth[u]
                row = [1.0]
                for n in range(1, horizon + 1):
                    row.append(sum(lam[w] * lam[w] * table[w][n - 1] for w in tree.children[u]))
                table[u] = row
        return table

    def _seal_ancestor_products(self) -> list[tuple[tuple[VertexId, float], ...]]:
        tree = self.tree
        lam = self.weights.lam
        anc: list[tuple[tuple[VertexId, float], ...]] = [((0, 1.0),)] * tree.n_vertices
        anc[0] = ((0, 1.0),)
        for v in range(1, tree.n_vertices):
            p = tree.parent[v]
            w = lam[v]
            anc[v] = ((v, 1.0),) + tuple((u, prod * w) for u, prod in anc[p])
        return anc

    @property
    def max_depth(self) -> int:
        return self.tree.max_depth

    def horizon(self, u: VertexId) -> int:
        self.tree.check_vertex(u)
        return self.tree.max_depth - self.tree.depth[u]

    def ancestor_products(self, v: VertexId) -> tuple[tuple[VertexId, float], ...]:
        """Pairs (k-th ancestor of v, weight product down from it to v)."""
        self.tree.check_vertex(v)
        return self._anc[v]

    def power_norm_sq(self, u: VertexId, n: int) -> float:
        self.tree.check_vertex(u)
        if n < 0:
            raise ValueError("n must be nonnegative")
        if n >= len(self._pn2[u]):
            raise HorizonError(
                f"norm(S^{n} e_{u}) needs vertices past depth {self.tree.max_depth}"
            )
        return self._pn2[u][n]


@dataclass(frozen=True)
class PowerNormEstimate:
    """Largest power-column norm visible within the truncation window."""

    value: float
    attained_at: VertexId
    may_grow_beyond_horizon: bool


@dataclass(frozen=True)
class InjectivityResult:
    interior_injective: bool
    witness: Optional[VertexId]
    min_column_norm: Optional[float]
    has_genuine_leaves: bool

    @property
    def injective(self) -> bool:
        """Injectivity of the full operator: a genuine leaf kills a column."""
        return self.interior_injective and not self.has_genuine_leaves


def lambda_path(s: TruncatedShift, u: VertexId, v: VertexId) -> float:
    """Product of edge weights along the unique path from u down to v.

    Equals 1 when u == v; raises when v does not lie below u.
    """
    tree = s.tree
    tree.check_vertex(u)
    tree.check_vertex(v)
    prod = 1.0
    x = v
    while x != u:
        p = tree.parent[x]
        if p is None:
            raise ValueError(f"vertex {v} is not a descendant of {u}")
        prod *= s.weights.lam[x]
        x = p
    return prod


def apply_shift(s: TruncatedShift, f: TreeVector) -> TreeVector:
    """(S f)(v) = lam(v) * f(parent(v)), zero at the root.

    Input mass at the deepest generation has no representable image and is
    dropped; ``boundary_mass`` measures how much.
    """
    _same_tree(s, f)
    lam = s.weights.lam
    out: dict[VertexId, complex] = {}
    children = s.tree.children
    for u, c in f.coeffs.items():
        for w in children[u]:
            out[w] = lam[w] * c
    return TreeVector(s.tree, out)


def apply_adjoint(s: TruncatedShift, f: TreeVector) -> TreeVector:
    """(S* f)(u) = sum over children v of u of lam(v) * f(v).

    Exact matrix adjoint of ``apply_shift`` on the truncated space; the
    weights are real so no conjugation appears.
    """
    _same_tree(s, f)
    lam = s.weights.lam
    parent = s.tree.parent
    out: dict[VertexId, complex] = {}
    for v, c in f.coeffs.items():
        p = parent[v]
        if p is not None:
            out[p] = out.get(p, 0j) + lam[v] * c
    return TreeVector(s.tree, out)


def boundary_mass(s: TruncatedShift, f: TreeVector) -> float:
    """Norm of the part of f sitting at the deepest generation."""
    _same_tree(s, f)
    deepest = s.tree.depth
    d = s.tree.max_depth
    return math.sqrt(
        sum((c * c.conjugate()).real for v, c in f.coeffs.items() if deepest[v] == d)
    )


def power_norm(s: TruncatedShift, u: VertexId, n: int) -> float:
    """norm(S^n e_u), exact whenever depth(u) + n <= max_depth."""
    return math.sqrt(s.power_norm_sq(u, n))


def operator_norm_power(s: TruncatedShift, n: int) -> PowerNormEstimate:
    """sup of norm(S^n e_u) over the columns visible in the window.

    The shift's n-th power has pairwise disjoint column supports, so this
    sup is the exact operator norm of the truncated power. Whether columns
    past the horizon could be larger is reported via the flag; generator
    families that know where the sup is attained clear it.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > s.max_depth:
        raise HorizonError(f"no column survives {n} shifts at depth {s.max_depth}")
    best = -1.0
    best_u = 0
    for gen in s.tree.generations[: s.max_depth - n + 1]:
        for u in gen:
            val = s._pn2[u][n]
            if val > best:
                best = val
                best_u = u
    bound = s.norm_attained_within_depth
    if n == 0:
        may_grow = False
    else:
        may_grow = bound is None or bound + n > s.max_depth
    return PowerNormEstimate(value=math.sqrt(best), attained_at=best_u, may_grow_beyond_horizon=may_grow)


def spectral_radius_estimate(s: TruncatedShift, n: int) -> float:
    """The finite surrogate norm(S^n)^(1/n); an upper-envelope sequence
    whose limit (over the untruncated operator) is the spectral radius."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return operator_norm_power(s, n).value ** (1.0 / n)


def is_injective(s: TruncatedShift) -> InjectivityResult:
    """Scan interior columns for a vanishing norm.

    The scan cannot see boundary columns, but a genuine leaf anywhere
    already kills its column on the untruncated tree, so the combined
    ``injective`` property folds that flag in.
    """
    best: Optional[float] = None
    witness: Optional[VertexId] = None
    for u in s.tree.interior_vertices():
        val = math.sqrt(s._pn2[u][1])
        if best is None or val < best:
            best = val
            witness = u
    ok = best is None or best > 0.0
    return InjectivityResult(
        interior_injective=ok,
        witness=witness,
        min_column_norm=best,
        has_genuine_leaves=bool(s.tree.genuine_leaves),
    )
