"""Multiplication operators built from one-sided coefficient symbols.

A symbol assigns a complex coefficient to each shift order k >= 0. The
induced operator adds up, at every vertex v, contributions from all
ancestors u of v: the coefficient at order k multiplies the weight product
from the k-th ancestor down to v. Columns of the same operator walk the
descendant side instead; the two routes are kept independent so they can
check each other.

Rule-based symbols with infinite support are always paired with an
explicit truncation degree K and are materialized on [0, K] up front, so
the rule is never evaluated past its declared range. All results for such
symbols are understood at truncation level K.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence

from .ops import TreeVector, TruncatedShift, _same_tree
from .tree import VertexId

_RULES: dict[str, Callable[..., "Symbol"]] = {}


@dataclass(frozen=True)
class Symbol:
    """Coefficients phi(k) for k >= 0, zero past ``degree``.

    ``values`` holds the nonzero coefficients. For finite-support symbols
    ``degree`` is the largest stored order; for materialized rules it is
    the declared truncation bound K (coefficients past it read as zero).
    """

    values: Mapping[int, complex]
    degree: int
    rule_name: Optional[str] = None
    rule_params: tuple = ()

    def value(self, k: int) -> complex:
        if k < 0:
            raise ValueError("symbol orders are nonnegative")
        return self.values.get(k, 0j)

    def values_upto(self, k_max: int) -> list[complex]:
        return [self.value(k) for k in range(k_max + 1)]

    @property
    def is_rule(self) -> bool:
        return self.rule_name is not None

    @classmethod
    def from_support(cls, entries) -> "Symbol":
        """Build from {k: value} or an iterable of (k, value) pairs."""
        if isinstance(entries, Mapping):
            items = entries.items()
        else:
            items = entries
        vals: dict[int, complex] = {}
        for k, c in items:
            k = int(k)
            if k < 0:
                raise ValueError("symbol orders are nonnegative")
            c = complex(c)
            if c != 0:
                vals[k] = c
        return cls(values=vals, degree=max(vals) if vals else 0)

    @classmethod
    def from_rule(cls, fn: Callable[[int], complex], k_max: int, name: Optional[str] = None,
                  params: tuple = ()) -> "Symbol":
        if k_max < 0:
            raise ValueError("truncation degree must be nonnegative")
        vals = {}
        for k in range(k_max + 1):
            c = complex(fn(k))
            if c != 0:
                vals[k] = c
        return cls(values=vals, degree=k_max, rule_name=name, rule_params=params)

    @classmethod
    def indicator(cls, k: int) -> "Symbol":
        if k < 0:
            raise ValueError("symbol orders are nonnegative")
        return cls(values={k: 1.0 + 0j}, degree=k, rule_name="indicator", rule_params=(k,))

    @classmethod
    def ones(cls, k_max: int) -> "Symbol":
        return cls.from_rule(lambda k: 1.0, k_max, name="ones", params=(k_max,))

    @classmethod
    def power_law(cls, exponent: float, k_max: int) -> "Symbol":
        """phi(k) = k**exponent for k >= 1 and phi(0) = 0."""
        return cls.from_rule(
            lambda k: 0.0 if k == 0 else float(k) ** exponent,
            k_max,
            name="power_law",
            params=(float(exponent), k_max),
        )

    def to_json(self) -> dict:
        if self.rule_name == "ones":
            return {"rule": "ones", "K": self.rule_params[0]}
        if self.rule_name == "indicator":
            return {"rule": "indicator", "k": self.rule_params[0]}
        if self.rule_name == "power_law":
            return {"rule": "power_law", "exponent": self.rule_params[0], "K": self.rule_params[1]}
        return {"support": [[k, self.values[k].real, self.values[k].imag] for k in sorted(self.values)]}

    @classmethod
    def from_json(cls, doc: Mapping) -> "Symbol":
        keys = set(doc)
        if "support" in keys:
            if keys != {"support"}:
                raise ValueError(f"unknown keys in symbol spec: {sorted(keys - {'support'})}")
            return cls.from_support((int(k), complex(re, im)) for k, re, im in doc["support"])
        if "rule" in keys:
            name = doc["rule"]
            if name == "ones":
                _expect_keys(keys, {"rule", "K"})
                return cls.ones(int(doc["K"]))
            if name == "indicator":
                _expect_keys(keys, {"rule", "k"})
                return cls.indicator(int(doc["k"]))
            if name == "power_law":
                _expect_keys(keys, {"rule", "exponent", "K"})
                return cls.power_law(float(doc["exponent"]), int(doc["K"]))
            raise ValueError(f"unknown symbol rule {name!r}")
        raise ValueError("symbol spec needs either 'support' or 'rule'")


def _expect_keys(keys: set, allowed: set) -> None:
    if keys != allowed:
        raise ValueError(f"symbol spec keys {sorted(keys)} do not match {sorted(allowed)}")


@dataclass(frozen=True)
class TrigPoly:
    """A trigonometric polynomial sum of c_k w^k over k in [-degree, degree]."""

    coeffs: Mapping[int, complex]
    degree: int

    @classmethod
    def from_coeffs(cls, entries) -> "TrigPoly":
        if isinstance(entries, Mapping):
            items = entries.items()
        else:
            items = entries
        vals: dict[int, complex] = {}
        for k, c in items:
            c = complex(c)
            if c != 0:
                vals[int(k)] = c
        deg = max((abs(k) for k in vals), default=0)
        return cls(coeffs=vals, degree=deg)

    @classmethod
    def monomial(cls, k: int, c: complex = 1.0) -> "TrigPoly":
        return cls.from_coeffs({k: c})

    def hat(self, k: int) -> complex:
        """Nonnegative-order coefficient extraction; zero off support."""
        if k < 0:
            raise ValueError("hat extraction is defined for k >= 0")
        return self.coeffs.get(k, 0j)

    def __call__(self, w: complex) -> complex:
        total = 0j
        for k, c in self.coeffs.items():
            total += c * w ** k
        return total

    def reflected(self) -> "TrigPoly":
        """The polynomial w -> p(conj(w)) on the unit circle (k -> -k)."""
        return TrigPoly.from_coeffs({-k: c for k, c in self.coeffs.items()})


def fejer_symbol(n: int) -> TrigPoly:
    """The degree-n Cesaro averaging kernel with hat(k) = 1 - |k|/(n+1).

    Nonnegative on the circle with unit mean.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    return TrigPoly.from_coeffs({k: 1.0 - abs(k) / (n + 1) for k in range(-n, n + 1)})


def hadamard(p: TrigPoly, phi: Symbol) -> Symbol:
    """Entrywise product of the hat coefficients: k -> p.hat(k) * phi(k)."""
    out = {}
    for k in range(0, min(p.degree, phi.degree) + 1):
        c = p.hat(k) * phi.value(k)
        if c != 0:
            out[k] = c
    return Symbol(values=out, degree=max(out) if out else 0)


def gamma_apply(s: TruncatedShift, phi: Symbol, f: TreeVector) -> TreeVector:
    """Apply the multiplication operator by its ancestor-sum formula.

    output(v) = sum over 0 <= k <= depth(v) of
                (weight product from the k-th ancestor of v down to v)
                * phi(k) * f(k-th ancestor of v).
    """
    _same_tree(s, f)
    vals = phi.values_upto(min(phi.degree, s.max_depth))
    reach = len(vals)
    get = f.coeffs.get
    out: dict[VertexId, complex] = {}
    for v in range(s.tree.n_vertices):
        acc = 0j
        for k, (u, prod) in enumerate(s.ancestor_products(v)):
            if k >= reach:
                break
            pk = vals[k]
            if pk == 0:
                continue
            c = get(u)
            if c is not None:
                acc += prod * pk * c
        if acc != 0:
            out[v] = acc
    return TreeVector(s.tree, out)


def mult_column(s: TruncatedShift, phi: Symbol, u: VertexId) -> TreeVector:
    """Column of the multiplication operator at the basis vector of u.

    Walks the descendant side: the coefficient at a vertex v exactly k
    generations below u is (weight product u down to v) * phi(k). Kept
    independent of the ancestor-sum route on purpose.
    """
    s.tree.check_vertex(u)
    lam = s.weights.lam
    children = s.tree.children
    out: dict[VertexId, complex] = {}
    frontier: list[tuple[VertexId, float]] = [(u, 1.0)]
    k = 0
    k_max = min(phi.degree, s.max_depth - s.tree.depth[u])
    while frontier and k <= k_max:
        pk = phi.value(k)
        if pk != 0:
            for v, prod in frontier:
                out[v] = prod * pk
        frontier = [(w, prod * lam[w]) for v, prod in frontier for w in children[v]]
        k += 1
    return TreeVector(s.tree, out)


def rotate_vector(f: TreeVector, w: complex) -> TreeVector:
    """Generation-graded rotation f(v) -> w**depth(v) * f(v), |w| = 1."""
    w = _check_unimodular(w)
    depth = f.tree.depth
    powers = _powers(w, f.tree.max_depth)
    return TreeVector(f.tree, {v: powers[depth[v]] * c for v, c in f.coeffs.items()})


def rotate_symbol(phi: Symbol, w: complex) -> Symbol:
    """Order-graded rotation phi(k) -> w**k * phi(k), |w| = 1."""
    w = _check_unimodular(w)
    powers = _powers(w, phi.degree)
    return Symbol(values={k: powers[k] * c for k, c in phi.values.items()}, degree=phi.degree)


def _check_unimodular(w: complex) -> complex:
    w = complex(w)
    if abs(abs(w) - 1.0) > 1e-12:
        raise ValueError(f"rotation parameter must lie on the unit circle, |w| = {abs(w)}")
    return w


def _powers(w: complex, k_max: int) -> list[complex]:
    out = [1.0 + 0j]
    for _ in range(k_max):
        out.append(out[-1] * w)
    return out


def circle_pair_integral(
    s: TruncatedShift,
    q: TrigPoly,
    phi: Symbol,
    f: TreeVector,
    g: TreeVector,
    n_points: Optional[int] = None,
) -> complex:
    """Mean over the unit circle of q(w) * <M_{rotated phi at w} f, g>.

    Evaluated by an N-point roots-of-unity rule. The integrand is a
    trigonometric polynomial with orders in [-deg q, deg q + min(K, D)],
    so any N past that band is exact; the default takes
    N = 2 * (deg q + K + D) + 1 with K the symbol degree and D the tree
    depth. A caller-supplied N below the safe band is rejected.
    """
    _same_tree(s, f)
    _same_tree(s, g)
    needed = q.degree + min(phi.degree, s.max_depth)
    if n_points is None:
        n_points = 2 * (q.degree + phi.degree + s.max_depth) + 1
    if n_points <= needed:
        raise ValueError(
            f"quadrature with {n_points} points cannot integrate orders up to {needed}"
        )
    total = 0j
    for j in range(n_points):
        w = cmath.exp(2j * math.pi * j / n_points)
        phi_w = rotate_symbol(phi, w)
        total += q(w) * gamma_apply(s, phi_w, f).inner(g)
    return total / n_points


@dataclass(frozen=True)
class SotRow:
    n: int
    probe_index: int
    error: float
    bound: float


@dataclass(frozen=True)
class SotProfile:
    rows: tuple[SotRow, ...]
    monotone: bool
    support_bound: int

    def errors_for_probe(self, probe_index: int) -> list[float]:
        return [r.error for r in self.rows if r.probe_index == probe_index]


def sot_error_profile(
    s: TruncatedShift,
    phi: Symbol,
    approximants: Sequence[int],
    probes: Sequence[TreeVector],
) -> SotProfile:
    """Cesaro approximation errors per kernel level and probe vector.

    error(n, f) is the norm of (M with hat coefficients damped by the
    level-n kernel minus M itself) applied to f. Each row also carries the
    a priori bound

        (K / (n + 1)) * sum over u in supp f of |f(u)| * norm(column at u)

    with K the symbol support bound; for a basis-vector probe this
    collapses to (K / (n + 1)) * norm(M e_u). The profile records whether
    every probe's error decays monotonically (1e-12 slack) in n.
    """
    levels = sorted(set(int(n) for n in approximants))
    if any(n < 0 for n in levels):
        raise ValueError("approximant levels must be nonnegative")
    k_bound = phi.degree
    rows = []
    monotone = True
    for i, f in enumerate(probes):
        _same_tree(s, f)
        reference = gamma_apply(s, phi, f)
        col_mass = sum(abs(c) * mult_column(s, phi, u).norm() for u, c in f.coeffs.items())
        prev = None
        for n in levels:
            damped = hadamard(fejer_symbol(n), phi)
            err = gamma_apply(s, damped, f).minus(reference).norm()
            if prev is not None and err > prev + 1e-12:
                monotone = False
            prev = err
            rows.append(SotRow(n=n, probe_index=i, error=err, bound=k_bound / (n + 1) * col_mass))
    return SotProfile(rows=tuple(rows), monotone=monotone, support_bound=k_bound)


def multiplier_norm_lower_bound(s: TruncatedShift, phi: Symbol) -> float:
    """Largest column norm; a certified lower bound for the operator norm."""
    return max(mult_column(s, phi, u).norm() for u in range(s.tree.n_vertices))


def kernel_l1_norm(p: TrigPoly, n_points: int = 4096) -> float:
    """Numerical circle mean of |p|; equals 1 for the Cesaro kernels.

    |p| is not a trigonometric polynomial, so this is a grid estimate,
    reported for user-supplied kernels whose averaging quality depends on
    this constant.
    """
    total = 0.0
    for j in range(n_points):
        w = cmath.exp(2j * math.pi * j / n_points)
        total += abs(p(w))
    return total / n_points
