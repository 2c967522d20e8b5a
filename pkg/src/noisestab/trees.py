"""Greedy decision-tree constructions with certified depth and bad-leaf mass.

Three builders share one tree shape:
  - influence_tree: split the max-influence coordinate until every leaf has
    max influence <= tau; certified depth 2 + ceil(I(f)/(tau eps)).
  - correlated_tree: same rule jointly over l functions driven by a step law;
    q^l children per split, weighted by the law; depth 4 + ceil(I(F)/(tau eps)).
  - fourier_tree: expand on the smallest coordinate set T (|T| <= r) whose
    orthogonal component holds variance >= alpha^2; depth r(1 + ceil(1/(alpha^2 eps))).

Depth caps are also clipped at the arity: once every coordinate is pinned the
node function is constant, so nothing past depth n can ever need a split.
All certified bounds are rechecked on the finished tree and raise
BoundViolation if violated (they are theorems; a failure is a bug).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import BoundViolation, DomainError
from .fourier import (
    component_variances_from_moments,
    conditional_second_moments,
)
from .distributions import StepDistribution, marginals
from .tables import TableFunction, influences, restrict, total_influence

MASS_TOL = 1e-12


@dataclass
class LeafInfo:
    restriction_coords: tuple[int, ...]
    restriction_symbols: tuple[int, ...]
    leaf_function: TableFunction | list[TableFunction]
    flags: dict[str, bool]
    leaf_mean: float
    depth: int
    mass: float
    leaf_means: tuple[float, ...] | None = None


@dataclass
class TreeLeaf:
    info: LeafInfo


@dataclass
class TreeNode:
    split_coordinate: int
    child_labels: list
    children: list = field(default_factory=list)
    witness_set: tuple[int, ...] | None = None
    node_variance: float | None = None
    witness_variance: float | None = None
    node_function: TableFunction | None = None


class DecisionTree:
    def __init__(self, kind: str, params: dict, root, leaves: list[TreeLeaf]):
        self.kind = kind
        self.params = dict(params)
        self.root = root
        self.leaf_nodes = leaves
        self.support_verified: bool | None = None
        self.queried_coordinates: tuple[int, ...] = ()

    def leaves(self) -> list[LeafInfo]:
        return [lf.info for lf in self.leaf_nodes]

    def total_mass(self) -> float:
        return float(sum(lf.info.mass for lf in self.leaf_nodes))

    def max_depth(self) -> int:
        return max((lf.info.depth for lf in self.leaf_nodes), default=0)

    def bad_mass(self) -> float:
        flag = "resilient" if self.kind == "fourier" else "low_influence"
        return float(
            sum(lf.info.mass for lf in self.leaf_nodes if not lf.info.flags[flag])
        )

    def __repr__(self):
        return (
            f"DecisionTree(kind={self.kind!r}, leaves={len(self.leaf_nodes)}, "
            f"depth={self.max_depth()})"
        )


def _depth_cap(numerator: float, denominator: float, base: int) -> float:
    """base + ceil(numerator/denominator); inf on overflow, documented."""
    if numerator <= 0.0:
        return float(base)
    ratio = numerator / denominator
    if not math.isfinite(ratio):
        return math.inf
    return float(base + math.ceil(ratio))


def _check_mass_and_depth(tree: DecisionTree, cap: float, eps: float):
    total = tree.total_mass()
    if abs(total - 1.0) > MASS_TOL:
        raise BoundViolation(f"leaf masses sum to {total}, not 1")
    if tree.max_depth() > cap:
        raise BoundViolation(f"depth {tree.max_depth()} exceeds certified cap {cap}")
    bad = tree.bad_mass()
    if bad > eps + MASS_TOL:
        raise BoundViolation(f"bad-leaf mass {bad} exceeds epsilon {eps}")


# -- single-function influence tree ----------------------------------------


def influence_tree(f: TableFunction, tau: float, eps: float) -> DecisionTree:
    """Split the highest-influence coordinate (ties: lowest index) while the
    node's max influence exceeds tau; leaves reached at the depth cap with
    max influence still above tau are the bad leaves, mass <= eps.
    """
    tau = float(tau)
    eps = float(eps)
    if tau <= 0.0 or eps <= 0.0:
        raise DomainError("tau and eps must be positive")
    total_inf = total_influence(f)
    cap = _depth_cap(total_inf, tau * eps, 2)
    eff = int(min(cap, f.n))
    leaves: list[TreeLeaf] = []

    def build(g: TableFunction, remaining: list[int], coords, symbols, depth, mass):
        infs = influences(g) if g.n else np.zeros(0)
        max_inf = float(infs.max()) if g.n else 0.0
        if max_inf <= tau or depth >= eff:
            info = LeafInfo(
                restriction_coords=tuple(coords),
                restriction_symbols=tuple(symbols),
                leaf_function=g,
                flags={
                    "low_influence": max_inf <= tau,
                    "depth_truncated": max_inf > tau,
                },
                leaf_mean=g.expectation(),
                depth=depth,
                mass=mass,
            )
            leaf = TreeLeaf(info)
            leaves.append(leaf)
            return leaf
        k = int(np.argmax(infs))  # argmax takes the first max: lowest index
        coord = remaining[k]
        rest = remaining[:k] + remaining[k + 1 :]
        node = TreeNode(split_coordinate=coord, child_labels=list(range(g.q)))
        for z in range(g.q):
            child = restrict(g, [k + 1], [z])
            node.children.append(
                build(
                    child,
                    rest,
                    coords + [coord],
                    symbols + [z],
                    depth + 1,
                    mass * float(g.measure[z]),
                )
            )
        return node

    root = build(f, list(range(1, f.n + 1)), [], [], 0, 1.0)
    tree = DecisionTree(
        "influence",
        {"tau": tau, "eps": eps, "depth_cap": cap, "total_influence": total_inf},
        root,
        leaves,
    )
    _check_mass_and_depth(tree, cap, eps)
    return tree


# -- correlated multi-function tree ----------------------------------------


def correlated_tree(F, P: StepDistribution, tau: float, eps: float) -> DecisionTree:
    """Joint tree over l functions: one coordinate is revealed in all of them
    at once, children keyed by the q^l symbol tuples and weighted by the step
    law.  Influences are taken under each function's step marginal.  Children
    of probability zero are closed as leaves immediately.
    """
    tau = float(tau)
    eps = float(eps)
    if tau <= 0.0 or eps <= 0.0:
        raise DomainError("tau and eps must be positive")
    F = list(F)
    if len(F) != P.steps:
        raise DomainError(f"need {P.steps} functions, got {len(F)}")
    n = F[0].n
    for f in F:
        if f.q != P.q or f.n != n:
            raise DomainError("functions must share the distribution alphabet and one arity")
    margs = marginals(P)
    F = [f.with_measure(margs[j]) for j, f in enumerate(F)]
    total_inf = float(sum(total_influence(f) for f in F))
    cap = _depth_cap(total_inf, tau * eps, 4)
    eff = int(min(cap, n))
    l, q = P.steps, P.q
    leaves: list[TreeLeaf] = []
    tuple_labels = [tuple((t // q**j) % q for j in range(l)) for t in range(q**l)]

    def leaf_of(G, coords, symbols, depth, mass, max_inf):
        info = LeafInfo(
            restriction_coords=tuple(coords),
            restriction_symbols=tuple(symbols),
            leaf_function=list(G),
            flags={
                "low_influence": max_inf <= tau,
                "depth_truncated": max_inf > tau and depth >= eff,
            },
            leaf_mean=G[0].expectation(),
            depth=depth,
            mass=mass,
            leaf_means=tuple(g.expectation() for g in G),
        )
        leaf = TreeLeaf(info)
        leaves.append(leaf)
        return leaf

    def build(G, remaining: list[int], coords, symbols, depth, mass):
        if G[0].n:
            inf_matrix = np.stack([influences(g) for g in G])
            max_inf = float(inf_matrix.max())
        else:
            inf_matrix = None
            max_inf = 0.0
        if max_inf <= tau or depth >= eff or mass == 0.0:
            return leaf_of(G, coords, symbols, depth, mass, max_inf)
        k = int(np.argmax(inf_matrix.max(axis=0)))
        coord = remaining[k]
        rest = remaining[:k] + remaining[k + 1 :]
        node = TreeNode(split_coordinate=coord, child_labels=list(tuple_labels))
        for t, label in enumerate(tuple_labels):
            child_fns = [restrict(g, [k + 1], [label[j]]) for j, g in enumerate(G)]
            node.children.append(
                build(
                    child_fns,
                    rest,
                    coords + [coord],
                    symbols + [label],
                    depth + 1,
                    mass * float(P.table[t]),
                )
            )
        return node

    root = build(F, list(range(1, n + 1)), [], [], 0, 1.0)
    tree = DecisionTree(
        "correlated",
        {"tau": tau, "eps": eps, "depth_cap": cap, "total_influence": total_inf},
        root,
        leaves,
    )
    _check_mass_and_depth(tree, cap, eps)
    return tree


# -- variance-witness tree -------------------------------------------------


def _find_witness(g: TableFunction, r: int, alpha2: float):
    """Smallest T (then lexicographically least) with Var[g_T] >= alpha^2.

    Returns (coords 1-based in g's labeling, Var[g_T]) or None.  Moments are
    grown one size at a time so small witnesses stay cheap.
    """
    rmax = min(r, g.n)
    moments: dict[int, float] = {}
    if rmax >= 1:
        moments.update(conditional_second_moments(g, [0]))
    for size in range(1, rmax + 1):
        new_masks = []
        for combo in combinations(range(g.n), size):
            mask = 0
            for c in combo:
                mask |= 1 << c
            new_masks.append(mask)
        moments.update(conditional_second_moments(g, new_masks))
        for combo in combinations(range(g.n), size):
            mask = 0
            for c in combo:
                mask |= 1 << c
            var = component_variances_from_moments(moments, mask)
            if var >= alpha2:
                return tuple(c + 1 for c in combo), var
    return None


def fourier_tree(f: TableFunction, r: int, alpha: float, eps: float) -> DecisionTree:
    """Expand on low-arity coordinate sets holding at least alpha^2 of
    orthogonal-component variance; leaves without such a witness carry a
    variance certificate: no T with 0 < |T| <= r has Var[f_T] >= alpha^2.

    Each expansion pins the |T| coordinates of the witness over consecutive
    levels.  The certified bad mass (non-certified leaves) is <= eps for
    functions with Var[f] <= 1; the depth cap is r(1 + ceil(1/(alpha^2 eps))).
    """
    r = int(r)
    alpha = float(alpha)
    eps = float(eps)
    if r < 1:
        raise DomainError("r must be >= 1")
    if alpha <= 0.0 or eps <= 0.0:
        raise DomainError("alpha and eps must be positive")
    alpha2 = alpha * alpha
    ratio = 1.0 / (alpha2 * eps)
    cap = math.inf if not math.isfinite(ratio) else float(r * (1 + math.ceil(ratio)))
    eff = int(min(cap, f.n))
    leaves: list[TreeLeaf] = []
    queried: set[int] = set()

    def leaf_of(g, coords, symbols, depth, mass, resilient):
        info = LeafInfo(
            restriction_coords=tuple(coords),
            restriction_symbols=tuple(symbols),
            leaf_function=g,
            flags={
                "resilient": resilient,
                "depth_truncated": not resilient,
            },
            leaf_mean=g.expectation(),
            depth=depth,
            mass=mass,
        )
        leaf = TreeLeaf(info)
        leaves.append(leaf)
        return leaf

    def build(g: TableFunction, remaining: list[int], coords, symbols, depth, mass):
        witness = _find_witness(g, r, alpha2)
        if witness is None:
            return leaf_of(g, coords, symbols, depth, mass, True)
        T_local, wvar = witness
        if depth + len(T_local) > eff:
            return leaf_of(g, coords, symbols, depth, mass, False)
        T_orig = tuple(remaining[k - 1] for k in T_local)
        queried.update(T_orig)
        rest = [c for c in remaining if c not in T_orig]

        def chain(level: int, prefix: tuple[int, ...]):
            node = TreeNode(
                split_coordinate=T_orig[level], child_labels=list(range(g.q))
            )
            if level == 0:
                node.witness_set = T_orig
                node.node_variance = g.variance()
                node.witness_variance = wvar
                node.node_function = g
            for z in range(g.q):
                assignment = prefix + (z,)
                w = mass
                for sym in assignment:
                    w *= float(g.measure[sym])
                if level + 1 == len(T_local):
                    child_fn = restrict(g, list(T_local), list(assignment))
                    node.children.append(
                        build(
                            child_fn,
                            rest,
                            coords + list(T_orig),
                            symbols + list(assignment),
                            depth + len(T_local),
                            w,
                        )
                    )
                else:
                    node.children.append(chain(level + 1, assignment))
            return node

        return chain(0, ())

    root = build(f, list(range(1, f.n + 1)), [], [], 0, 1.0)
    tree = DecisionTree(
        "fourier",
        {"r": r, "alpha": alpha, "eps": eps, "depth_cap": cap},
        root,
        leaves,
    )
    scale = max(f.variance(), 1.0)
    _check_mass_and_depth(tree, cap, eps * scale)
    tree.queried_coordinates = tuple(sorted(queried))
    _verify_query_support(tree, f, eff, alpha)
    return tree


def _verify_query_support(tree: DecisionTree, f: TableFunction, eff: int, alpha: float):
    """Every queried coordinate must lie in the (d, pi_*^d 2^-d alpha) support."""
    from .resilience import COST_LIMIT, fourier_support, support_cost

    pos = f.measure[f.measure > 0.0]
    pi_star = float(pos.min())
    beta = (pi_star**eff) * (2.0**-eff) * alpha  # underflows to 0.0 for huge d
    if eff == 0 or support_cost(f.n, f.q, eff) > COST_LIMIT:
        tree.support_verified = None
        return
    supp = fourier_support(f, eff, beta)
    ok = set(tree.queried_coordinates) <= set(supp)
    tree.support_verified = bool(ok)
    if not ok:
        raise BoundViolation(
            f"queried coordinates {tree.queried_coordinates} escape the "
            f"({eff}, {beta:.3g}) variance support {tuple(supp)}"
        )


# -- statistics ------------------------------------------------------------


@dataclass
class LeafStatistics:
    leaf_count: int
    bad_leaf_mass: float
    max_depth: int
    expectation_drift: float
    flag_counts: dict[str, int]
    mixture_mean: float


def leaf_statistics(tree: DecisionTree) -> LeafStatistics:
    """Bad mass, depth, flag counts, and expectation drift.

    Drift is the largest |leaf mean - global mean| over positive-mass leaves;
    for correlated trees the max is also over the l functions.
    """
    infos = tree.leaves()
    flag_counts: dict[str, int] = {}
    for info in infos:
        for name, val in info.flags.items():
            if val:
                flag_counts[name] = flag_counts.get(name, 0) + 1
    mixture = sum(i.mass * i.leaf_mean for i in infos)
    if tree.kind == "correlated":
        per_fn = {}
        for info in infos:
            for j, m in enumerate(info.leaf_means or ()):
                per_fn.setdefault(j, []).append((info.mass, m))
        drift = 0.0
        for j, pairs in per_fn.items():
            mean_j = sum(w * m for w, m in pairs)
            drift = max(
                drift,
                max((abs(m - mean_j) for w, m in pairs if w > 0.0), default=0.0),
            )
    else:
        mean = mixture
        drift = max(
            (abs(i.leaf_mean - mean) for i in infos if i.mass > 0.0), default=0.0
        )
    return LeafStatistics(
        leaf_count=len(infos),
        bad_leaf_mass=tree.bad_mass(),
        max_depth=tree.max_depth(),
        expectation_drift=float(drift),
        flag_counts=flag_counts,
        mixture_mean=float(mixture),
    )


# -- JSON dump -------------------------------------------------------------


def tree_to_json_dict(tree: DecisionTree) -> dict:
    def walk(node):
        if isinstance(node, TreeLeaf):
            i = node.info
            return {
                "leaf": True,
                "depth": i.depth,
                "mass": i.mass,
                "mean": i.leaf_mean,
                "flags": dict(i.flags),
                "restriction": {
                    "coords": list(i.restriction_coords),
                    "symbols": [
                        list(s) if isinstance(s, tuple) else s
                        for s in i.restriction_symbols
                    ],
                },
            }
        out = {
            "leaf": False,
            "split_coordinate": node.split_coordinate,
            "child_labels": [
                list(lbl) if isinstance(lbl, tuple) else lbl
                for lbl in node.child_labels
            ],
            "children": [walk(c) for c in node.children],
        }
        if node.witness_set is not None:
            out["witness_set"] = list(node.witness_set)
        return out

    params = {
        k: (None if isinstance(v, float) and not math.isfinite(v) else v)
        for k, v in tree.params.items()
    }
    return {"kind": tree.kind, "params": params, "root": walk(tree.root)}
