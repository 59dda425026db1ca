"""Independent dense reference implementations for the test suite.

Everything here is built directly from parent pointers, edge weights, and
symbol coefficients, bypassing the package's caches, so agreement is a
two-route check rather than a tautology.
"""

import numpy as np

from treeshift import TreeVector


def dense_shift_matrix(s):
    """Matrix with lam(v) at (v, parent(v)); the operator's full matrix."""
    n = s.tree.n_vertices
    mat = np.zeros((n, n))
    for v in range(1, n):
        mat[v, s.tree.parent[v]] = s.weights.lam[v]
    return mat


def dense_mult_matrix(s, phi):
    """Multiplication operator assembled by per-vertex ancestor walks."""
    n = s.tree.n_vertices
    out = np.zeros((n, n), dtype=complex)
    for v in range(n):
        u, prod, k = v, 1.0, 0
        while True:
            out[v, u] += prod * phi.value(k)
            p = s.tree.parent[u]
            if p is None:
                break
            prod *= s.weights.lam[u]
            u, k = p, k + 1
    return out


def children_n_brute(tree, u, n):
    """Depth filter plus ancestor walk, no frontier bookkeeping."""
    target = tree.depth[u] + n
    out = []
    for v in range(tree.n_vertices):
        if tree.depth[v] != target:
            continue
        x = v
        for _ in range(n):
            x = tree.parent[x]
        if x == u:
            out.append(v)
    return out


def random_vector(tree, rng, unit=False):
    re = rng.standard_normal(tree.n_vertices)
    im = rng.standard_normal(tree.n_vertices)
    f = TreeVector(tree, {v: complex(re[v], im[v]) for v in range(tree.n_vertices)})
    return f.scaled(1.0 / f.norm()) if unit else f


def vector_from_dense(tree, arr):
    return TreeVector(tree, {v: complex(arr[v]) for v in range(tree.n_vertices)})
