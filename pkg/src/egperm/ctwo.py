"""The c2 invariant at small primes.

Point counts of the Kirchhoff polynomial over F_p by two independent
evaluators (spanning-tree sum and modified-Laplacian determinant), the
Dodgson-product route, and flow/Schwinger-solution counting.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .graphcore import GraphError, Multigraph, n_components
from .gperm import reduced_incidence

POINT_BUDGET = 10 ** 8
_CHUNK = 1 << 16


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class C2Entry:
    prime: int
    point_count: int
    c2: int


def spanning_trees(g: Multigraph) -> list[tuple[int, ...]]:
    """Edge-id sets of spanning trees, by exhaustion over edge subsets."""
    n, m = g.vertex_count, g.edge_count
    trees = []
    for subset in itertools.combinations(range(m), n - 1):
        parent = list(range(n))
        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x
        ok = True
        for i in subset:
            t, h = g.edges[i]
            rt, rh = find(t), find(h)
            if rt == rh:
                ok = False
                break
            parent[rt] = rh
        if ok and len({find(v) for v in range(n)}) == 1:
            trees.append(subset)
    return trees


def _check_budget(p: int, exponent: int):
    if p ** exponent > POINT_BUDGET:
        raise BudgetExceeded(f"{p}^{exponent} exceeds the point budget {POINT_BUDGET}")


def _point_grid(p: int, nvars: int, lo: int, hi: int) -> np.ndarray:
    """Rows lo..hi-1 of the base-p enumeration of F_p^nvars (int64, (hi-lo, nvars))."""
    idx = np.arange(lo, hi, dtype=np.int64)
    cols = [(idx // p ** j) % p for j in range(nvars)]
    return np.stack(cols, axis=1)


def kirchhoff_point_count(g: Multigraph, p: int, evaluator: str = "tree-sum") -> int:
    """Number of x in F_p^E with Psi_G(x) = 0."""
    if g.vertex_count < 3:
        raise GraphError("point count requires at least 3 vertices")
    _check_budget(p, g.edge_count)
    if evaluator == "tree-sum":
        return _count_tree_sum(g, p)
    if evaluator == "laplacian-det":
        return _count_laplacian(g, p)
    raise ValueError(f"unknown evaluator {evaluator!r}")


def _count_tree_sum(g: Multigraph, p: int) -> int:
    trees = spanning_trees(g)
    m = g.edge_count
    complements = [tuple(e for e in range(m) if e not in t) for t in trees]
    total = 0
    npts = p ** m
    for lo in range(0, npts, _CHUNK):
        hi = min(lo + _CHUNK, npts)
        grid = _point_grid(p, m, lo, hi)
        acc = np.zeros(hi - lo, dtype=np.int64)
        for comp in complements:
            term = np.ones(hi - lo, dtype=np.int64)
            for e in comp:
                term = term * grid[:, e] % p
            acc = (acc + term) % p
        total += int((acc == 0).sum())
    return total


def _modified_laplacian_template(g: Multigraph) -> np.ndarray:
    """K_G with zeros on the Schwinger diagonal; callers fill the x entries."""
    m_inc = reduced_incidence(g, g.vertex_count - 1)
    e, r = g.edge_count, g.vertex_count - 1
    k = np.zeros((e + r, e + r), dtype=np.int64)
    for i in range(r):
        for j in range(e):
            k[j, e + i] = m_inc.at(i, j)      # M^T block
            k[e + i, j] = -m_inc.at(i, j)     # -M block
    return k


def _batched_det_mod(mats: np.ndarray, p: int) -> np.ndarray:
    """Determinants mod p of a (N, d, d) int64 batch.

    Branch-free forward elimination: zero pivots are repaired by adding lower
    rows (determinant-preserving); once a pivot stays zero its determinant
    factor is zero forever, so the garbage a unit pivot substitute spreads in
    those rows cannot surface.
    """
    a = mats % p
    n, d, _ = a.shape
    det = np.ones(n, dtype=np.int64)
    for k in range(d):
        for j in range(k + 1, d):
            bad = (a[:, k, k] == 0) & (a[:, j, k] != 0)
            if not bad.any():
                if not (a[:, k, k] == 0).any():
                    break
                continue
            a[:, k, :] = (a[:, k, :] + bad[:, None] * a[:, j, :]) % p
        piv = a[:, k, k]
        det = det * piv % p
        inv = _pow_mod(np.where(piv == 0, 1, piv), p - 2, p)
        factors = a[:, k + 1:, k] * inv[:, None] % p
        a[:, k + 1:, :] = (a[:, k + 1:, :] - factors[:, :, None] * a[:, None, k, :]) % p
    return det % p


def _pow_mod(base: np.ndarray, exp: int, p: int) -> np.ndarray:
    out = np.ones_like(base)
    b = base % p
    e = exp
    while e:
        if e & 1:
            out = out * b % p
        b = b * b % p
        e >>= 1
    return out


def _count_laplacian(g: Multigraph, p: int) -> int:
    template = _modified_laplacian_template(g)
    m = g.edge_count
    total = 0
    npts = p ** m
    step = max(1, _CHUNK // 8)
    for lo in range(0, npts, step):
        hi = min(lo + step, npts)
        grid = _point_grid(p, m, lo, hi)
        mats = np.broadcast_to(template, (hi - lo,) + template.shape).copy()
        for e in range(m):
            mats[:, e, e] = grid[:, e]
        dets = _batched_det_mod(mats, p)
        total += int((dets == 0).sum())
    return total


def c2_at_prime(g: Multigraph, p: int, evaluator: str = "tree-sum") -> C2Entry:
    """c2(G)_p = [Psi_G]_p / p^2 mod p; the division must be exact."""
    count = kirchhoff_point_count(g, p, evaluator)
    if count % (p * p) != 0:
        raise AssertionError(f"[Psi]_p = {count} is not divisible by {p}^2")
    return C2Entry(p, count, (count // (p * p)) % p)


# ---------------------------------------------------------------------------
# Dodgson route
# ---------------------------------------------------------------------------

def dodgson_c2(g: Multigraph, p: int, a: int, b: int, c: int) -> int:
    """c2 via -[Psi^{ac,bc} Psi^{a,b}_{G,c}]_p, both determinants numeric.

    The two Dodgson determinants are evaluated per point of
    F_p^(E - {a,b,c}); zero sets are independent of the overall sign
    ambiguity of the determinant representation.
    """
    if len({a, b, c}) != 3:
        raise GraphError("edges a, b, c must be distinct")
    m = g.edge_count
    _check_budget(p, m - 3)
    template = _modified_laplacian_template(g)
    free = [e for e in range(m) if e not in (a, b, c)]
    # Psi^{ac,bc}: delete rows a,c and columns b,c
    r1 = [i for i in range(template.shape[0]) if i not in (a, c)]
    c1 = [j for j in range(template.shape[1]) if j not in (b, c)]
    # Psi^{a,b}_{G,c}: delete row a, column b, set x_c = 0
    r2 = [i for i in range(template.shape[0]) if i != a]
    c2_idx = [j for j in range(template.shape[1]) if j != b]
    npts = p ** len(free)
    count = 0
    step = max(1, _CHUNK // 8)
    for lo in range(0, npts, step):
        hi = min(lo + step, npts)
        grid = _point_grid(p, len(free), lo, hi)
        mats = np.broadcast_to(template, (hi - lo,) + template.shape).copy()
        for gi, e in enumerate(free):
            mats[:, e, e] = grid[:, gi]
        # x_a, x_b never sit in a surviving diagonal cell; x_c is zeroed
        d1 = _batched_det_mod(mats[:, r1][:, :, c1], p)
        d2 = _batched_det_mod(mats[:, r2][:, :, c2_idx], p)
        count += int(((d1 * d2) % p == 0).sum())
    return (-count) % p


def dodgson_common_trees(g: Multigraph, I: set[int], J: set[int], H: set[int]) -> list[tuple[int, ...]]:
    """Edge sets inducing spanning trees in both Dodgson minors (spot checks)."""
    def minor_trees(delete: set[int], contract: set[int]):
        keep = [e for e in range(g.edge_count) if e not in delete | contract]
        parent = list(range(g.vertex_count))
        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x
        for e in contract:
            t, h = g.edges[e]
            parent[find(t)] = find(h)
        classes = {find(v) for v in range(g.vertex_count)}
        n_eff = len(classes)
        out = set()
        for subset in itertools.combinations(keep, n_eff - 1):
            par2 = {cl: cl for cl in classes}
            def find2(x):
                while par2[x] != x:
                    par2[x] = par2[par2[x]]
                    x = par2[x]
                return x
            ok = True
            for e in subset:
                t, h = g.edges[e]
                rt, rh = find2(find(t)), find2(find(h))
                if rt == rh:
                    ok = False
                    break
                par2[rt] = rh
            if ok:
                out.add(subset)
        return out
    t1 = minor_trees(I, (J - I) | (H - I))
    t2 = minor_trees(J, (I - J) | (H - J))
    return sorted(t1 & t2)


# ---------------------------------------------------------------------------
# Flows and Schwinger solutions
# ---------------------------------------------------------------------------

def count_flows(g: Multigraph, p: int) -> int:
    """Brute-force number of F_p flows; equals p^h1 for connected graphs."""
    if not g.is_connected():
        raise GraphError("flow counting requires a connected graph")
    _check_budget(p, g.edge_count)
    m = g.edge_count
    count = 0
    for weights in itertools.product(range(p), repeat=m):
        boundary = [0] * g.vertex_count
        for w, (t, h) in zip(weights, g.edges):
            boundary[h] += w
            boundary[t] -= w
        if all(x % p == 0 for x in boundary):
            count += 1
    return count


def is_tension(g: Multigraph, tau: list[int], p: int) -> bool:
    """tau is a coboundary: some potential theta has tau_e = theta_h - theta_t."""
    theta = [None] * g.vertex_count
    theta[0] = 0
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.vertex_count)]
    for i, (t, h) in enumerate(g.edges):
        adj[t].append((h, i))
        adj[h].append((t, i))
    stack = [0]
    while stack:
        v = stack.pop()
        for w, i in adj[v]:
            t, h = g.edges[i]
            delta = tau[i] if v == t else -tau[i]
            want = (theta[v] + delta) % p
            if theta[w] is None:
                theta[w] = want
                stack.append(w)
            elif theta[w] != want:
                return False
    return True


def schwinger_solution_count(g: Multigraph, p: int, flow: list[int]) -> int:
    """Number of x with e -> x_e * flow_e a tension; equals p^k, where k is
    the size of a minimum connected spanning subgraph containing all
    zero-weight edges of the flow."""
    boundary = [0] * g.vertex_count
    for w, (t, h) in zip(flow, g.edges):
        boundary[h] += w
        boundary[t] -= w
    if any(x % p for x in boundary):
        raise GraphError("not an F_p flow")
    _check_budget(p, g.edge_count)
    count = 0
    for x in itertools.product(range(p), repeat=g.edge_count):
        tau = [x[i] * flow[i] % p for i in range(g.edge_count)]
        if is_tension(g, tau, p):
            count += 1
    return count


def min_connected_spanning_with(g: Multigraph, zero_edges: list[int]) -> int:
    """k = |Z| + components(V, Z) - 1: edges of a minimum connected spanning
    subgraph containing Z."""
    sub = Multigraph(g.vertex_count, tuple(g.edges[i] for i in zero_edges))
    return len(zero_edges) + n_components(sub) - 1
