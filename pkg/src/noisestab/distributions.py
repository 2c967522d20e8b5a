"""Correlated multi-step distributions on Omega^l and their diagnostics.

A StepDistribution stores the joint law of one tuple (X^(1), ..., X^(l));
n i.i.d. tuples make the product input to l table functions.  Table index
convention matches `tables`: step j is the j-th base-q digit (step 1 lowest).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DomainError, InvalidKernelError, PartitionError

PROB_TOL = 1e-12
DEGENERACY_THRESHOLD = 1.0 - 1e-9


class StepDistribution:
    def __init__(self, q, steps, table):
        q = int(q)
        steps = int(steps)
        if q < 2:
            raise DomainError(f"alphabet size must be >= 2, got {q}")
        if steps < 2:
            raise DomainError(f"step count must be >= 2, got {steps}")
        table = np.asarray(table, dtype=np.float64)
        if table.shape != (q**steps,):
            raise DomainError(
                f"table must have length q^l = {q ** steps}, got {table.shape}"
            )
        if table.min() < -PROB_TOL or abs(table.sum() - 1.0) > PROB_TOL:
            raise DomainError("table entries must be nonnegative and sum to 1")
        self.q = q
        self.steps = steps
        self.table = table.copy()
        self.table.setflags(write=False)

    def tensor(self) -> np.ndarray:
        return self.table.reshape((self.q,) * self.steps, order="F")

    def tuple_of(self, idx: int) -> tuple[int, ...]:
        return tuple((idx // self.q**j) % self.q for j in range(self.steps))

    @property
    def support(self) -> list[tuple[int, ...]]:
        return [self.tuple_of(i) for i in np.nonzero(self.table > 0.0)[0]]

    def min_table_atom(self) -> float:
        nz = self.table[self.table > 0.0]
        return float(nz.min())

    def __repr__(self):
        return (
            f"StepDistribution(q={self.q}, l={self.steps}, "
            f"support={int((self.table > 0).sum())})"
        )


@dataclass
class CorrelationReport:
    rho: float
    per_coordinate: list[float]
    degenerate: bool
    witness: tuple[list[int], list[tuple[int, ...]]] | None = None
    witness_step: int | None = None


@dataclass
class GaussianCounterpart:
    dimension: int
    mean: np.ndarray
    covariance: np.ndarray
    eigen_floor: float
    q: int = 0
    steps: int = 0


# -- marginals -------------------------------------------------------------


def marginals(P: StepDistribution) -> list[np.ndarray]:
    t = P.tensor()
    out = []
    for j in range(P.steps):
        axes = tuple(ax for ax in range(P.steps) if ax != j)
        out.append(t.sum(axis=axes))
    return out


def pair_marginal(P: StepDistribution, j: int, k: int) -> np.ndarray:
    """q x q joint law of (X^(j), X^(k)), 1-based steps."""
    if j == k or not (1 <= j <= P.steps and 1 <= k <= P.steps):
        raise DomainError("pair_marginal needs two distinct steps in range")
    t = P.tensor()
    axes = tuple(ax for ax in range(P.steps) if ax not in (j - 1, k - 1))
    m = t.sum(axis=axes)
    return m if j < k else m.T


def min_atom(P: StepDistribution) -> float:
    """pi_* = smallest positive single-step marginal probability."""
    lo = np.inf
    for pi in marginals(P):
        pos = pi[pi > 0.0]
        lo = min(lo, float(pos.min()))
    return lo


# -- maximal correlation ---------------------------------------------------


def _step_set(P: StepDistribution, S: Iterable[int], name: str) -> list[int]:
    S = list(S)
    if not S:
        raise PartitionError(f"{name} must be nonempty")
    if len(set(S)) != len(S):
        raise PartitionError(f"{name} has repeated steps")
    for j in S:
        if not 1 <= j <= P.steps:
            raise PartitionError(f"step {j} outside 1..{P.steps}")
    return sorted(S)


def _joint_matrix(P: StepDistribution, S: list[int], T: list[int]) -> np.ndarray:
    t = P.tensor()
    keep = set(S) | set(T)
    for ax in reversed(range(P.steps)):
        if ax + 1 not in keep:
            t = t.sum(axis=ax)
    remaining = sorted(keep)
    perm = [remaining.index(j) for j in S] + [remaining.index(j) for j in T]
    t = t.transpose(perm)
    return t.reshape(P.q ** len(S), P.q ** len(T))


def _second_singular_value(joint: np.ndarray) -> float:
    pa = joint.sum(axis=1)
    pb = joint.sum(axis=0)
    rows = np.nonzero(pa > 0.0)[0]
    cols = np.nonzero(pb > 0.0)[0]
    if len(rows) <= 1 or len(cols) <= 1:
        return 0.0
    M = joint[np.ix_(rows, cols)] / np.sqrt(np.outer(pa[rows], pb[cols]))
    sv = np.linalg.svd(M, compute_uv=False)
    return float(min(max(sv[1], 0.0), 1.0))


def rho(P: StepDistribution, S: Iterable[int], T: Iterable[int]) -> float:
    """Maximal correlation between the step blocks S and T (1-based labels).

    Second-largest singular value of P_{S,T}(a,b)/sqrt(pi_S(a) pi_T(b)) on the
    joint support; the top singular pair is the constants.
    """
    S = _step_set(P, S, "S")
    T = _step_set(P, T, "T")
    if set(S) & set(T):
        raise PartitionError("S and T must be disjoint")
    return _second_singular_value(_joint_matrix(P, S, T))


def _support_components(joint: np.ndarray):
    """Connected components of the bipartite support graph ({rows},{cols})."""
    rows = np.nonzero(joint.sum(axis=1) > 0.0)[0]
    cols = np.nonzero(joint.sum(axis=0) > 0.0)[0]
    row_comp = {int(a): -1 for a in rows}
    col_comp = {int(b): -1 for b in cols}
    comp = 0
    for a0 in rows:
        if row_comp[int(a0)] != -1:
            continue
        stack = [("r", int(a0))]
        row_comp[int(a0)] = comp
        while stack:
            side, v = stack.pop()
            if side == "r":
                for b in np.nonzero(joint[v] > 0.0)[0]:
                    if col_comp[int(b)] == -1:
                        col_comp[int(b)] = comp
                        stack.append(("c", int(b)))
            else:
                for a in np.nonzero(joint[:, v] > 0.0)[0]:
                    if row_comp[int(a)] == -1:
                        row_comp[int(a)] = comp
                        stack.append(("r", int(a)))
        comp += 1
    return row_comp, col_comp, comp


def rho_max(P: StepDistribution) -> CorrelationReport:
    """rho(P) = max over steps j of the correlation between step j and the rest.

    A degenerate distribution (rho >= 1 - 1e-9) gets a witness pair of
    indicator sets when the support graph splits: A a set of step-j symbols,
    B a set of tuples over the remaining steps (ascending step order), with
    1(X^(j) in A) = 1(rest in B) almost surely.
    """
    per = []
    for j in range(1, P.steps + 1):
        rest = [k for k in range(1, P.steps + 1) if k != j]
        per.append(rho(P, [j], rest))
    top = float(max(per))
    best = int(np.argmax(per)) + 1
    degenerate = top >= DEGENERACY_THRESHOLD
    witness = None
    witness_step = None
    if degenerate:
        rest = [k for k in range(1, P.steps + 1) if k != best]
        joint = _joint_matrix(P, [best], rest)
        row_comp, col_comp, ncomp = _support_components(joint)
        if ncomp > 1:
            A = sorted(a for a, c in row_comp.items() if c == 0)
            B_idx = sorted(b for b, c in col_comp.items() if c == 0)
            B = []
            for b in B_idx:
                B.append(tuple((b // P.q**t) % P.q for t in range(P.steps - 1)))
            witness = (A, B)
            witness_step = best
    return CorrelationReport(
        rho=top,
        per_coordinate=[float(r) for r in per],
        degenerate=degenerate,
        witness=witness,
        witness_step=witness_step,
    )


# -- Gaussian counterpart --------------------------------------------------


def gaussian_counterpart(P: StepDistribution) -> GaussianCounterpart:
    """Mean/covariance of the stacked indicator vector (1(X^(j)=a))_{j,a}.

    Component j*q + a (0-based j) is the indicator of step j+1 taking symbol a.
    The covariance is projected to PSD by clipping negative eigenvalues at 0;
    eigen_floor records the smallest eigenvalue seen before clipping.
    """
    l, q = P.steps, P.q
    dim = l * q
    margs = marginals(P)
    mean = np.concatenate(margs)
    second = np.zeros((dim, dim))
    for j in range(l):
        second[j * q : (j + 1) * q, j * q : (j + 1) * q] = np.diag(margs[j])
        for k in range(j + 1, l):
            pm = pair_marginal(P, j + 1, k + 1)
            second[j * q : (j + 1) * q, k * q : (k + 1) * q] = pm
            second[k * q : (k + 1) * q, j * q : (j + 1) * q] = pm.T
    cov = second - np.outer(mean, mean)
    cov = (cov + cov.T) / 2.0
    w, V = np.linalg.eigh(cov)
    floor = float(w.min())
    if floor < 0.0:
        cov = (V * np.clip(w, 0.0, None)) @ V.T
        cov = (cov + cov.T) / 2.0
    return GaussianCounterpart(
        dimension=dim, mean=mean, covariance=cov, eigen_floor=floor, q=q, steps=l
    )


# -- sampling --------------------------------------------------------------


def _as_generator(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample(P: StepDistribution, n: int, seed=0) -> np.ndarray:
    """l x n symbol matrix; column i is the i-th i.i.d. tuple from P."""
    if n < 1:
        raise DomainError("sample count must be >= 1")
    rng = _as_generator(seed)
    cdf = np.cumsum(P.table)
    cdf[-1] = 1.0
    idx = np.searchsorted(cdf, rng.random(int(n)), side="right")
    out = np.empty((P.steps, int(n)), dtype=np.int64)
    rem = idx.astype(np.int64)
    for j in range(P.steps):
        out[j] = rem % P.q
        rem //= P.q
    return out


def sample_gaussian(G: GaussianCounterpart, n: int, seed=0) -> np.ndarray:
    """dimension x n matrix of N(mean, covariance) draws via spectral factor."""
    if n < 1:
        raise DomainError("sample count must be >= 1")
    rng = _as_generator(seed)
    w, V = np.linalg.eigh(G.covariance)
    A = V * np.sqrt(np.clip(w, 0.0, None))
    Z = rng.standard_normal((G.dimension, int(n)))
    return G.mean[:, None] + A @ Z


# -- named builders --------------------------------------------------------


def correlated_bits(rho_param: float) -> StepDistribution:
    """Two +-1 steps with E[xy] = rho; symbol 0 is +1, symbol 1 is -1."""
    r = float(rho_param)
    if not -1.0 <= r <= 1.0:
        raise DomainError("correlation must lie in [-1,1]")
    same = (1.0 + r) / 4.0
    diff = (1.0 - r) / 4.0
    return StepDistribution(2, 2, [same, diff, diff, same])


def arrow3() -> StepDistribution:
    """Uniform on the 6 not-all-equal +-1 triples (indices 0 and 7 excluded)."""
    table = np.full(8, 1.0 / 6.0)
    table[0] = 0.0
    table[7] = 0.0
    return StepDistribution(2, 3, table)


def f3_chain() -> StepDistribution:
    """Three steps on F_3: X uniform, Y in {X, X+1}, Z in {Y, Y+1}, each half-half."""
    table = np.zeros(27)
    for x in range(3):
        for y in (x, (x + 1) % 3):
            for z in (y, (y + 1) % 3):
                table[x + 3 * y + 9 * z] += 1.0 / 12.0
    return StepDistribution(3, 3, table)


def from_kernel(pi, *kernels) -> StepDistribution:
    """Markov chain: X^(1) ~ pi, X^(j+1) | X^(j) ~ row of the j-th kernel."""
    pi = np.asarray(pi, dtype=np.float64)
    q = pi.shape[0]
    if pi.min() < -PROB_TOL or abs(pi.sum() - 1.0) > PROB_TOL:
        raise DomainError("initial law must be a probability vector")
    if not kernels:
        raise DomainError("need at least one kernel")
    Ks = []
    for K in kernels:
        K = np.asarray(K, dtype=np.float64)
        if K.shape != (q, q):
            raise InvalidKernelError(f"kernel must be {q}x{q}, got {K.shape}")
        if K.min() < -PROB_TOL or not np.allclose(K.sum(axis=1), 1.0, atol=PROB_TOL):
            raise InvalidKernelError("kernel rows must be probability vectors")
        Ks.append(K)
    steps = len(Ks) + 1
    t = pi.copy()
    for K in Ks:
        t = t[..., None] * K[(np.newaxis,) * (t.ndim - 1)]
    # t[a1, ..., al]: step 1 on axis 0, so axis order already matches tensor()
    return StepDistribution(q, steps, t.ravel(order="F"))


# -- JSON interchange ------------------------------------------------------


def distribution_to_json_dict(P: StepDistribution) -> dict:
    return {"q": P.q, "l": P.steps, "table": [float(p) for p in P.table]}


def distribution_from_json_dict(d: dict) -> StepDistribution:
    try:
        return StepDistribution(d["q"], d["l"], d["table"])
    except KeyError as exc:
        raise DomainError(f"distribution JSON missing field {exc.args[0]!r}") from exc


def load_distribution(path: str | os.PathLike) -> StepDistribution:
    with open(path) as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DomainError(f"{path}: malformed JSON ({exc})") from exc
    try:
        return distribution_from_json_dict(d)
    except DomainError as exc:
        raise DomainError(f"{path}: {exc}") from exc


def save_distribution(P: StepDistribution, path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        json.dump(distribution_to_json_dict(P), fh, sort_keys=True)
        fh.write("\n")
