"""Exact Hepp bound via maximal chains of bridgeless subgraphs.

A subgraph is an edge subset with its incident vertices; gamma_0 is empty.
H(G) sums over maximal chains the product of edge increments divided by the
superficial degrees omega(gamma) = |E(gamma)| - 2 h1(gamma) of the proper
chain elements.  Chains are aggregated by dynamic programming over the
strata, so nothing is ever listed explicitly except on demand.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .graphcore import GraphError, Multigraph

EDGE_LIMIT = 14


class NotPrimitiveError(ValueError):
    """A proper bridgeless subgraph has omega = 0 (a subdivergence)."""


@dataclass(frozen=True)
class BridgelessLattice:
    """Bridgeless edge subsets stratified by loop number, as bitmasks."""
    graph: Multigraph
    strata: tuple[tuple[int, ...], ...]

    def stratum_subsets(self, i: int) -> list[frozenset[int]]:
        return [frozenset(_bits(m)) for m in self.strata[i]]


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def _subgraph_stats(g: Multigraph, mask: int) -> tuple[int, int, int]:
    """(|E|, |V(gamma)|, components) of the edge subset."""
    edges = [g.edges[i] for i in _bits(mask)]
    verts = {v for e in edges for v in e}
    parent = {v: v for v in verts}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for t, h in edges:
        parent[find(t)] = find(h)
    comps = len({find(v) for v in verts})
    return len(edges), len(verts), comps


def _is_bridgeless(g: Multigraph, mask: int) -> bool:
    ids = list(_bits(mask))
    if not ids:
        return True
    _, nv, nc = _subgraph_stats(g, mask)
    for e in ids:
        t, h = g.edges[e]
        if t == h:
            continue
        _, nv2, nc2 = _subgraph_stats(g, mask & ~(1 << e))
        # e is a bridge iff deleting it raises the component count on the
        # same vertex set (an endpoint going isolated still counts)
        comps_before = nc
        comps_after = nc2 + (nv - nv2)
        if comps_after > comps_before:
            return False
    return True


def loop_number(g: Multigraph, mask: int) -> int:
    ne, nv, nc = _subgraph_stats(g, mask)
    return ne - nv + nc


def bridgeless_lattice(g: Multigraph) -> BridgelessLattice:
    """All bridgeless edge subsets, stratified by loop number."""
    if g.edge_count > EDGE_LIMIT:
        raise GraphError(f"bridgeless lattice capped at {EDGE_LIMIT} edges")
    full = (1 << g.edge_count) - 1
    if not _is_bridgeless(g, full):
        raise GraphError("graph has a bridge: Hepp bound undefined")
    h_top = loop_number(g, full)
    strata: list[list[int]] = [[] for _ in range(h_top + 1)]
    for mask in range(full + 1):
        if _is_bridgeless(g, mask):
            h = loop_number(g, mask)
            if h <= h_top:
                strata[h].append(mask)
    return BridgelessLattice(g, tuple(tuple(s) for s in strata))


def _omega(g: Multigraph, mask: int, h: int) -> int:
    return bin(mask).count("1") - 2 * h


def hepp_bound(g: Multigraph) -> Fraction:
    """Exact rational Hepp bound of a bridgeless primitive-checkable graph."""
    lat = bridgeless_lattice(g)
    h_top = len(lat.strata) - 1
    if h_top == 0:
        raise GraphError("graph has no cycles")
    # f[mask] = sum over chains reaching mask of (increments / omegas so far)
    f: dict[int, Fraction] = {m: Fraction(bin(m).count("1")) for m in lat.strata[1]}
    for i in range(2, h_top + 1):
        nxt: dict[int, Fraction] = {}
        for big in lat.strata[i]:
            total = Fraction(0)
            nbig = bin(big).count("1")
            for small, val in f.items():
                if small & big == small and val:
                    om = _omega(g, small, i - 1)
                    if om == 0:
                        raise NotPrimitiveError(
                            "omega = 0 on a proper bridgeless subgraph: not primitive")
                    total += val * Fraction(nbig - bin(small).count("1"), om)
            nxt[big] = total
        f = nxt
    full = (1 << g.edge_count) - 1
    return f[full]


def maximal_chains(g: Multigraph):
    """Explicit maximal chains with their contributions (small graphs only)."""
    lat = bridgeless_lattice(g)
    h_top = len(lat.strata) - 1
    full = (1 << g.edge_count) - 1

    def rec(mask: int, h: int, increments: list[int], omegas: list[int]):
        if h == h_top:
            contrib = Fraction(1)
            for inc in increments:
                contrib *= inc
            for om in omegas:
                contrib /= om
            yield increments[:], contrib
            return
        for nxt in lat.strata[h + 1]:
            if mask & nxt == mask and nxt != mask:
                om = _omega(g, nxt, h + 1)
                inc = bin(nxt).count("1") - bin(mask).count("1")
                if h + 1 == h_top:
                    yield from rec(nxt, h + 1, increments + [inc], omegas)
                else:
                    yield from rec(nxt, h + 1, increments + [inc], omegas + [om])

    yield from rec(0, 0, [], [])


def hepp_zigzag_regression() -> list[Fraction]:
    """Hepp bounds of the zig-zag family at circulant sizes 5..8."""
    from .graphcore import zigzag
    return [hepp_bound(zigzag(m)) for m in (5, 6, 7, 8)]
