"""Semi-coherent systems: structure trees, minimal signatures, and the
efficiency Gini machinery built on the cumulative information generating
function (CIGF).

A system is carried in two equivalent forms.  The structure tree (a min/max
expression over component lifetimes) drives simulation; the minimal signature
a = (a_1, ..., a_n), the coefficients of the reliability polynomial
h(q) = sum a_i q^i, drives the analytics: the efficiency mean difference of an
i.i.d. system is sum a_i K(i) - K(n) with K(b) = int F_bar(t)^b dt.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .copulas import Fgm4Diagonal
from .marginals import Exponential, MarginalDistribution, Uniform
from .quadrature import (
    NonConvergenceError,
    QuadratureConfig,
    integrate_halfline,
)

__all__ = [
    "CatalogIntegrityError",
    "SystemSpec",
    "Signature",
    "parse_structure",
    "structure_evaluate",
    "minimal_signature_from_structure",
    "series_system",
    "parallel_system",
    "k_out_of_n_system",
    "order_statistic_signature",
    "load_catalog",
    "cigf",
    "k_measure",
    "eff_gmd_iid",
    "eff_gmd_exchangeable",
    "eff_gmd_signature",
    "eff_gini",
    "markov_efficiency_bound",
    "table1",
    "table2",
]

_CATALOG_RESOURCE = "data/system_catalog_v1.json"


class CatalogIntegrityError(RuntimeError):
    """The shipped system catalog is internally inconsistent."""


def parse_structure(text: str):
    """Parse a prefix min/max expression like ``(max (min x1 x2) x3)``.

    Returns a nested tuple tree: ``("x", i)`` for component leaves and
    ``("min"|"max", children)`` for gates.  Only min/max gates exist, so every
    parsed tree is monotone with the right boundary behavior by construction.
    """
    if not isinstance(text, str) or not text.strip():
        raise ValueError("structure expression must be a nonempty string")
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def parse_node():
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError("structure expression ended unexpectedly")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            if pos >= len(tokens) or tokens[pos] not in ("min", "max"):
                raise ValueError("every gate must start with 'min' or 'max'")
            op = tokens[pos]
            pos += 1
            children = []
            while pos < len(tokens) and tokens[pos] != ")":
                children.append(parse_node())
            if pos >= len(tokens):
                raise ValueError("unbalanced parentheses in structure expression")
            pos += 1
            if not children:
                raise ValueError("a gate needs at least one child")
            return (op, tuple(children))
        if tok == ")":
            raise ValueError("unexpected ')' in structure expression")
        if tok.startswith("x") and tok[1:].isdigit() and int(tok[1:]) >= 1:
            return ("x", int(tok[1:]))
        raise ValueError(f"unrecognized token {tok!r} in structure expression")

    tree = parse_node()
    if pos != len(tokens):
        raise ValueError("trailing tokens after structure expression")
    return tree


def _max_leaf(node) -> int:
    if node[0] == "x":
        return node[1]
    return max(_max_leaf(child) for child in node[1])


def _eval_node(node, arr):
    if node[0] == "x":
        return arr[..., node[1] - 1]
    vals = [_eval_node(child, arr) for child in node[1]]
    out = vals[0]
    combine = np.minimum if node[0] == "min" else np.maximum
    for v in vals[1:]:
        out = combine(out, v)
    return out


def _as_tree(system):
    if isinstance(system, SystemSpec):
        return parse_structure(system.structure)
    if isinstance(system, str):
        return parse_structure(system)
    return system


def structure_evaluate(system, lifetimes):
    """System lifetime from component lifetimes (last axis = components)."""
    tree = _as_tree(system)
    arr = np.asarray(lifetimes, dtype=float)
    k = _max_leaf(tree)
    if arr.ndim == 0 or arr.shape[-1] < k:
        raise ValueError(
            f"structure uses component x{k} but only "
            f"{0 if arr.ndim == 0 else arr.shape[-1]} lifetimes were supplied"
        )
    out = _eval_node(tree, arr)
    return float(out) if np.ndim(out) == 0 else out


def minimal_signature_from_structure(structure, k: int | None = None,
                                     order: int | None = None) -> tuple:
    """Expand the reliability polynomial of a min/max structure into its power
    basis h(q) = sum a_i q^i, exactly, by enumerating the 2^k component states.

    ``order`` pads the coefficient vector with zeros on the right, so a
    structure touching fewer components can live inside a larger design.
    """
    tree = _as_tree(structure)
    leaves = _max_leaf(tree)
    if k is None:
        k = leaves
    if k < leaves:
        raise ValueError(f"k={k} but the structure references component x{leaves}")
    if k > 20:
        raise ValueError("state enumeration is limited to 20 components")
    if order is None:
        order = k
    if order < k:
        raise ValueError("order must be at least the component count")

    # N[s] = number of working states with exactly s working components
    working = [0] * (k + 1)
    for state in itertools.product((0.0, 1.0), repeat=k):
        if _eval_node(tree, np.array(state)) == 1.0:
            working[int(sum(state))] += 1
    if working[0]:
        raise ValueError("structure must fail when every component has failed")
    if not working[k]:
        raise ValueError("structure must work when every component works")

    coeffs = [0] * (k + 1)
    for s in range(1, k + 1):
        n_s = working[s]
        if n_s == 0:
            continue
        for j in range(k - s + 1):
            coeffs[s + j] += n_s * math.comb(k - s, j) * (-1) ** j
    return tuple(coeffs[1:]) + (0,) * (order - k)


@dataclass(frozen=True)
class SystemSpec:
    """A semi-coherent system: structure tree plus minimal signature.

    ``k`` is the number of components the structure touches; ``order`` is the
    length of the signature vector (the design size n, at least k).
    """

    id: int
    name: str
    k: int
    order: int
    minimal_signature: tuple
    structure: str

    def __post_init__(self):
        object.__setattr__(
            self, "minimal_signature",
            tuple(int(c) for c in self.minimal_signature),
        )
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.order < self.k:
            raise ValueError("order must be at least k")
        if len(self.minimal_signature) != self.order:
            raise ValueError("minimal signature length must equal the order")
        if sum(self.minimal_signature) != 1:
            raise ValueError("minimal signature coefficients must sum to 1")
        tree = parse_structure(self.structure)
        if _max_leaf(tree) > self.k:
            raise ValueError("structure references more components than k")

    @classmethod
    def from_structure(cls, structure: str, order: int | None = None,
                       id: int = 0, name: str | None = None) -> "SystemSpec":
        tree = parse_structure(structure)
        k = _max_leaf(tree)
        if order is None:
            order = k
        signature = minimal_signature_from_structure(tree, k=k, order=order)
        return cls(
            id=id,
            name=name if name is not None else structure,
            k=k,
            order=order,
            minimal_signature=signature,
            structure=structure,
        )


def series_system(n: int, order: int | None = None) -> SystemSpec:
    if n < 1:
        raise ValueError("n must be at least 1")
    expr = "(min " + " ".join(f"x{i}" for i in range(1, n + 1)) + ")" if n > 1 else "x1"
    return SystemSpec.from_structure(expr, order=order, name=f"{n}-series")


def parallel_system(n: int, order: int | None = None) -> SystemSpec:
    if n < 1:
        raise ValueError("n must be at least 1")
    expr = "(max " + " ".join(f"x{i}" for i in range(1, n + 1)) + ")" if n > 1 else "x1"
    return SystemSpec.from_structure(expr, order=order, name=f"{n}-parallel")


def k_out_of_n_system(k: int, n: int, order: int | None = None) -> SystemSpec:
    """System that works while at least k of its n components work."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    if k == n:
        return series_system(n, order=order)
    if k == 1:
        return parallel_system(n, order=order)
    minima = (
        "(min " + " ".join(f"x{i}" for i in subset) + ")"
        for subset in itertools.combinations(range(1, n + 1), k)
    )
    expr = "(max " + " ".join(minima) + ")"
    return SystemSpec.from_structure(expr, order=order, name=f"{k}-out-of-{n}")


def load_catalog() -> tuple:
    """Load the shipped 28-system catalog, re-deriving every signature from
    its structure tree and refusing to return a catalog that disagrees."""
    text = (
        resources.files("copulagini").joinpath(_CATALOG_RESOURCE).read_text("utf-8")
    )
    doc = json.loads(text)
    if doc.get("version") != 1:
        raise CatalogIntegrityError(f"unsupported catalog version {doc.get('version')!r}")
    order = doc.get("order")
    specs = []
    for row in doc.get("systems", ()):
        try:
            spec = SystemSpec(
                id=int(row["id"]),
                name=str(row["name"]),
                k=int(row["k"]),
                order=int(order),
                minimal_signature=tuple(row["a4"]),
                structure=str(row["structure"]),
            )
        except (KeyError, ValueError) as exc:
            raise CatalogIntegrityError(f"bad catalog row {row!r}: {exc}") from exc
        derived = minimal_signature_from_structure(
            spec.structure, k=spec.k, order=spec.order
        )
        if derived != spec.minimal_signature:
            raise CatalogIntegrityError(
                f"system {spec.id}: stored signature {spec.minimal_signature} "
                f"does not match the structure-derived {derived}"
            )
        specs.append(spec)
    return tuple(specs)


@dataclass(frozen=True)
class Signature:
    """Samaniego signature: probabilities s_i = Pr(T = X_{i:n})."""

    probabilities: tuple

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probabilities)
        object.__setattr__(self, "probabilities", probs)
        if len(probs) < 1:
            raise ValueError("signature needs at least one entry")
        if any(p < -1e-12 for p in probs):
            raise ValueError("signature probabilities must be nonnegative")
        if abs(math.fsum(probs) - 1.0) > 1e-9:
            raise ValueError("signature probabilities must sum to 1")

    @property
    def n(self) -> int:
        return len(self.probabilities)

    def tail(self, j: int) -> float:
        """S_j = Pr(T >= X_{j:n}) = sum of s_i over i >= j (1-indexed)."""
        if not 1 <= j <= self.n:
            raise ValueError(f"j must be within 1..{self.n}")
        return math.fsum(self.probabilities[j - 1:])


def order_statistic_signature(n: int, k: int) -> Signature:
    """Signature of the k-out-of-n system: all mass on X_{n-k+1:n}."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    probs = [0.0] * n
    probs[n - k] = 1.0
    return Signature(tuple(probs))


def cigf(m: MarginalDistribution, alpha: float, beta: float,
         config: QuadratureConfig | None = None) -> float:
    """Cumulative information generating function int F(t)^alpha F_bar(t)^beta dt."""
    if not (math.isfinite(alpha) and alpha >= 0.0):
        raise ValueError("alpha must be nonnegative")
    if not (math.isfinite(beta) and beta > 0.0):
        raise ValueError("beta must be positive")
    if alpha == 0.0:
        integrand = lambda t: m.sf(t) ** beta
    else:
        integrand = lambda t: m.cdf(t) ** alpha * m.sf(t) ** beta
    res = integrate_halfline(integrand, config, quantile_map=m)
    if not res.converged:
        raise NonConvergenceError(
            f"CIGF({alpha}, {beta}) integral did not converge "
            f"(error estimate {res.error_estimate:.3e})"
        )
    return res.value


def k_measure(m: MarginalDistribution, beta: float,
              config: QuadratureConfig | None = None) -> float:
    """K(beta) = int F_bar(t)^beta dt, the survival-power measure."""
    return cigf(m, 0.0, beta, config)


def eff_gmd_iid(sys: SystemSpec, m: MarginalDistribution,
                config: QuadratureConfig | None = None) -> float:
    """Efficiency mean difference E(T) - E(X_{1:n}) for i.i.d. components:
    sum a_i K(i) - K(n)."""
    a = sys.minimal_signature
    n = sys.order
    cache = {}

    def k_of(i: int) -> float:
        if i not in cache:
            cache[i] = k_measure(m, float(i), config)
        return cache[i]

    total = math.fsum(a[i - 1] * k_of(i) for i in range(1, n + 1) if a[i - 1] != 0)
    return total - k_of(n)


def _check_diagonals(diagonals, order: int):
    if getattr(diagonals, "order", None) != order:
        raise ValueError(
            "diagonal family order must match the system order "
            f"({getattr(diagonals, 'order', None)!r} != {order})"
        )
    grid = np.linspace(0.0, 1.0, 33)
    first = np.asarray(diagonals.diagonal(1, grid), dtype=float)
    if float(np.max(np.abs(first - grid))) > 1e-10:
        raise ValueError("the first survival diagonal must be the identity")
    prev = first
    for i in range(2, order + 1):
        cur = np.asarray(diagonals.diagonal(i, grid), dtype=float)
        if np.any(cur > prev + 1e-12):
            raise ValueError(
                "survival diagonals must be pointwise nonincreasing in the index"
            )
        prev = cur


def eff_gmd_exchangeable(sys: SystemSpec, diagonals, m: MarginalDistribution,
                         config: QuadratureConfig | None = None) -> float:
    """Efficiency mean difference for exchangeable components described by
    their survival diagonal sections: sum a_i int diag_i(F_bar) dt - int diag_n(F_bar) dt."""
    _check_diagonals(diagonals, sys.order)
    a = sys.minimal_signature
    n = sys.order
    cache = {}

    def d_of(i: int) -> float:
        if i not in cache:
            res = integrate_halfline(
                lambda t: diagonals.diagonal(i, m.sf(t)), config, quantile_map=m
            )
            if not res.converged:
                raise NonConvergenceError(
                    f"survival-diagonal integral {i} did not converge"
                )
            cache[i] = res.value
        return cache[i]

    total = math.fsum(a[i - 1] * d_of(i) for i in range(1, n + 1) if a[i - 1] != 0)
    return total - d_of(n)


def eff_gmd_signature(sig: Signature, m: MarginalDistribution,
                      config: QuadratureConfig | None = None) -> float:
    """Efficiency mean difference from a Samaniego signature:
    sum over i < n of S_{n-i+1} C(n, i) cigf(m, n-i, i)."""
    if not isinstance(sig, Signature):
        sig = Signature(tuple(sig))
    n = sig.n
    total = 0.0
    for i in range(1, n):
        tail = sig.tail(n - i + 1)
        if tail == 0.0:
            continue
        total += tail * math.comb(n, i) * cigf(m, float(n - i), float(i), config)
    return total


def _parallel_gmd(order: int, m: MarginalDistribution, diagonals,
                  config: QuadratureConfig | None) -> float:
    parallel = parallel_system(order)
    if diagonals is None:
        return eff_gmd_iid(parallel, m, config)
    return eff_gmd_exchangeable(parallel, diagonals, m, config)


def eff_gini(sys: SystemSpec, m: MarginalDistribution, diagonals=None,
             config: QuadratureConfig | None = None) -> float:
    """Efficiency Gini index: the system's mean difference normalized by the
    parallel system of the same order.  0 means T is the series lifetime,
    1 means T is the parallel lifetime."""
    if diagonals is None:
        numerator = eff_gmd_iid(sys, m, config)
    else:
        numerator = eff_gmd_exchangeable(sys, diagonals, m, config)
    denominator = _parallel_gmd(sys.order, m, diagonals, config)
    if not denominator > 0.0:
        raise ValueError("degenerate joint law: the parallel mean difference is zero")
    return numerator / denominator


def markov_efficiency_bound(sys: SystemSpec, m: MarginalDistribution, c: float,
                            diagonals=None,
                            config: QuadratureConfig | None = None) -> float:
    """Lower bound 1 - G_n(T)/c on Pr(T < X_{1:n} + c * GMD_n(X_{n:n}))."""
    if not (isinstance(c, (int, float)) and math.isfinite(c) and c > 0.0):
        raise ValueError("c must be a positive number")
    return 1.0 - eff_gini(sys, m, diagonals, config) / float(c)


def _table_rows(d_values: dict, config) -> list:
    """Shared table assembly: d_values maps column label -> {i: integral}."""
    catalog = load_catalog()
    denominators = {}
    for label, d in d_values.items():
        denominators[label] = math.fsum(
            (-1) ** (i + 1) * math.comb(4, i) * d[i] for i in range(1, 5)
        ) - d[4]
    rows = []
    for spec in catalog:
        row = {
            "id": spec.id,
            "name": spec.name,
            "signature": spec.minimal_signature,
        }
        for label, d in d_values.items():
            numerator = math.fsum(
                spec.minimal_signature[i - 1] * d[i]
                for i in range(1, 5)
                if spec.minimal_signature[i - 1] != 0
            ) - d[4]
            row[label] = numerator / denominators[label]
        rows.append(row)
    return rows


def table1(config: QuadratureConfig | None = None) -> list:
    """Efficiency Gini indices of the 28 catalog systems under i.i.d.
    Uniform(0,1) and Exponential(1) components (full precision)."""
    marginals = {"uniform": Uniform(0.0, 1.0), "exponential": Exponential(1.0)}
    d_values = {
        label: {i: k_measure(m, float(i), config) for i in range(1, 5)}
        for label, m in marginals.items()
    }
    return _table_rows(d_values, config)


def table2(theta: float, config: QuadratureConfig | None = None) -> list:
    """Efficiency Gini indices of the 28 catalog systems with exchangeable
    components coupled by the four-variate FGM survival diagonals."""
    diagonals = Fgm4Diagonal(theta)
    marginals = {"uniform": Uniform(0.0, 1.0), "exponential": Exponential(1.0)}
    d_values = {}
    for label, m in marginals.items():
        per = {}
        for i in range(1, 5):
            res = integrate_halfline(
                lambda t, i=i: diagonals.diagonal(i, m.sf(t)),
                config,
                quantile_map=m,
            )
            if not res.converged:
                raise NonConvergenceError(
                    f"survival-diagonal integral {i} did not converge"
                )
            per[i] = res.value
        d_values[label] = per
    return _table_rows(d_values, config)
