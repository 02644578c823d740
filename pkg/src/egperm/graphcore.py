"""Multigraphs, rotation systems, the named-graph catalog, and graph surgery.

Vertices are dense integers 0..n-1 and edges are ordered (tail, head) pairs
with dense ids 0..m-1.  Graphs built by this library use the canonical
orientation tail <= head; graphs parsed from files keep the file orientation.
All graph values are immutable after construction.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence


class GraphError(ValueError):
    """Malformed graph input or an operation precondition violation."""


@dataclass(frozen=True)
class Multigraph:
    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for t, h in self.edges:
            if not (0 <= t < self.vertex_count and 0 <= h < self.vertex_count):
                raise GraphError(f"edge ({t},{h}) out of range for {self.vertex_count} vertices")

    @staticmethod
    def build(vertex_count: int, edges: Iterable[tuple[int, int]], canonical: bool = True) -> "Multigraph":
        """Construct a graph; with canonical=True each edge is oriented tail <= head."""
        es = []
        for t, h in edges:
            if canonical and t > h:
                t, h = h, t
            es.append((t, h))
        return Multigraph(vertex_count, tuple(es))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        d = 0
        for t, h in self.edges:
            d += (t == v) + (h == v)
        return d

    def degrees(self) -> list[int]:
        d = [0] * self.vertex_count
        for t, h in self.edges:
            d[t] += 1
            d[h] += 1
        return d

    def has_loop(self) -> bool:
        return any(t == h for t, h in self.edges)

    def incident_edges(self, v: int) -> list[int]:
        return [i for i, (t, h) in enumerate(self.edges) if t == v or h == v]

    def is_connected(self) -> bool:
        if self.vertex_count == 0:
            return True
        seen = {0}
        stack = [0]
        adj = self.adjacency()
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.vertex_count

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for t, h in self.edges:
            adj[t].append(h)
            if t != h:
                adj[h].append(t)
        return adj

    def loop_number(self) -> int:
        """|E| - |V| + number of connected components."""
        return self.edge_count - self.vertex_count + n_components(self)

    def edge_multiset(self) -> dict[tuple[int, int], int]:
        mult: dict[tuple[int, int], int] = {}
        for t, h in self.edges:
            key = (min(t, h), max(t, h))
            mult[key] = mult.get(key, 0) + 1
        return mult


@dataclass(frozen=True)
class Embedding:
    """Rotation system: for each vertex, a cyclic ordering of incident edge-ends.

    An edge-end is (edge id, end) with end 0 = tail, end 1 = head; a loop
    contributes both of its ends at the same vertex.
    """
    rotations: tuple[tuple[tuple[int, int], ...], ...]

    def validate(self, g: Multigraph) -> None:
        if len(self.rotations) != g.vertex_count:
            raise GraphError("rotation system has wrong vertex count")
        seen: set[tuple[int, int]] = set()
        for v, rot in enumerate(self.rotations):
            for eid, end in rot:
                if not (0 <= eid < g.edge_count) or end not in (0, 1):
                    raise GraphError(f"bad edge-end ({eid},{end}) at vertex {v}")
                t, h = g.edges[eid]
                if (t, h)[end] != v:
                    raise GraphError(f"edge-end ({eid},{end}) not incident to vertex {v}")
                if (eid, end) in seen:
                    raise GraphError(f"duplicate edge-end ({eid},{end})")
                seen.add((eid, end))
        if len(seen) != 2 * g.edge_count:
            raise GraphError("rotation system does not cover every edge-end exactly once")


def n_components(g: Multigraph) -> int:
    parent = list(range(g.vertex_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for t, h in g.edges:
        rt, rh = find(t), find(h)
        if rt != rh:
            parent[rt] = rh
    return len({find(v) for v in range(g.vertex_count)})


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def parse_graph(text: str) -> tuple[Multigraph, Embedding | None]:
    """Parse the edge-list file format.

    Comment lines start '#'; first data line 'V <count>'; then 'E <tail> <head>'
    lines; optional 'EMB <vertex>: <edge-id list>' lines give a rotation system.
    Edge order and orientation follow the file.
    """
    vcount = None
    edges: list[tuple[int, int]] = []
    emb_lines: dict[int, list[int]] = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "V" and len(parts) == 2 and vcount is None:
            vcount = int(parts[1])
        elif parts[0] == "E" and len(parts) == 3:
            if vcount is None:
                raise GraphError(f"line {ln}: edge before V line")
            t, h = int(parts[1]), int(parts[2])
            if not (0 <= t < vcount and 0 <= h < vcount):
                raise GraphError(f"line {ln}: vertex index out of range")
            edges.append((t, h))
        elif parts[0] == "EMB" and len(parts) >= 2 and parts[1].endswith(":"):
            v = int(parts[1][:-1])
            emb_lines[v] = [int(x) for x in parts[2:]]
        else:
            raise GraphError(f"line {ln}: malformed line {raw!r}")
    if vcount is None:
        raise GraphError("missing V line")
    g = Multigraph(vcount, tuple(edges))
    emb = None
    if emb_lines:
        emb = _embedding_from_edge_lists(g, emb_lines)
    return g, emb


def _embedding_from_edge_lists(g: Multigraph, emb_lines: dict[int, list[int]]) -> Embedding:
    """Build an Embedding from per-vertex edge-id rotations.

    A loop id appearing twice in its vertex's list covers both ends; a non-loop
    id resolves to whichever of its ends touches the vertex.
    """
    rotations = []
    for v in range(g.vertex_count):
        if v not in emb_lines:
            raise GraphError(f"rotation missing for vertex {v}")
        rot = []
        loops_seen: dict[int, int] = {}
        for eid in emb_lines[v]:
            t, h = g.edges[eid]
            if t == h:
                end = loops_seen.get(eid, 0)
                loops_seen[eid] = end + 1
                rot.append((eid, end))
            elif t == v:
                rot.append((eid, 0))
            elif h == v:
                rot.append((eid, 1))
            else:
                raise GraphError(f"edge {eid} not incident to vertex {v}")
        rotations.append(tuple(rot))
    emb = Embedding(tuple(rotations))
    emb.validate(g)
    return emb


def format_graph(g: Multigraph, emb: Embedding | None = None) -> str:
    lines = [f"V {g.vertex_count}"]
    lines += [f"E {t} {h}" for t, h in g.edges]
    if emb is not None:
        for v, rot in enumerate(emb.rotations):
            lines.append(f"EMB {v}: " + " ".join(str(eid) for eid, _ in rot))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Fundamental arithmetic (block shape and eligible primes)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FundamentalSpec:
    """Block arithmetic of a reduced incidence matrix with r rows and c columns.

    L = lcm(r, c); the fundamental matrix is L x L with v_mult copies of each
    row and e_mult copies of each column; residues live at primes v_mult*n + 1.
    """
    rows: int
    cols: int
    L: int
    v_mult: int
    e_mult: int

    def eligible(self, p: int) -> bool:
        return p > self.v_mult and (p - 1) % self.v_mult == 0 and is_prime(p)

    def eligible_primes(self, max_prime: int) -> list[int]:
        return [p for p in range(2, max_prime + 1) if self.eligible(p)]

    def n_for(self, p: int) -> int:
        if not self.eligible(p):
            raise GraphError(f"prime {p} not of the form {self.v_mult}n+1")
        return (p - 1) // self.v_mult

    def flippable(self, p: int) -> bool:
        """True when the expansion at p duplicates each column an odd number of times."""
        return (self.n_for(p) * self.e_mult) % 2 == 1


def matrix_fundamental_spec(rows: int, cols: int) -> FundamentalSpec:
    L = math.lcm(rows, cols)
    return FundamentalSpec(rows, cols, L, L // rows, L // cols)


def fundamental_spec(g: Multigraph) -> FundamentalSpec:
    """(L, v-multiplicity, e-multiplicity) for a connected graph with >= 2 vertices."""
    if g.vertex_count < 2 or g.edge_count < 1:
        raise GraphError("fundamental spec needs at least 2 vertices and 1 edge")
    if not g.is_connected():
        raise GraphError("disconnected graph: the permanent vanishes at every prime")
    return matrix_fundamental_spec(g.vertex_count - 1, g.edge_count)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    # deterministic Miller-Rabin for 64-bit inputs
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------

def banana(k: int = 2) -> Multigraph:
    """Two vertices joined by k parallel edges."""
    return Multigraph.build(2, [(0, 1)] * k)


def path_graph(k: int) -> Multigraph:
    """Path on k vertices (k-1 edges)."""
    if k < 2:
        raise GraphError("path needs at least 2 vertices")
    return Multigraph.build(k, [(i, i + 1) for i in range(k - 1)])


def tree_graph(edges: Sequence[tuple[int, int]]) -> Multigraph:
    n = max(max(e) for e in edges) + 1
    g = Multigraph.build(n, edges)
    if not g.is_connected() or g.edge_count != n - 1:
        raise GraphError("edge list is not a tree")
    return g


def wheel(w: int) -> Multigraph:
    """Cycle 0..w-1 plus apex vertex w."""
    if w < 3:
        raise GraphError("wheel needs at least 3 rim vertices")
    rim = [(i, i + 1) for i in range(w - 1)] + [(0, w - 1)]
    spokes = [(i, w) for i in range(w)]
    return Multigraph.build(w + 1, rim + spokes)


def complete_graph(n: int) -> Multigraph:
    return Multigraph.build(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def complete_bipartite(a: int, b: int) -> Multigraph:
    return Multigraph.build(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def circulant(m: int, a: int, b: int) -> Multigraph:
    """Simple graph on 0..m-1 with edges {i,j} when |i-j| is a or b mod m."""
    if m < 3 or not (0 < a) or not (0 < b):
        raise GraphError("bad circulant parameters")
    diffs = {a % m, (-a) % m, b % m, (-b) % m}
    edges = [(i, j) for i in range(m) for j in range(i + 1, m) if (j - i) % m in diffs]
    return Multigraph.build(m, edges)


def zigzag(m: int) -> Multigraph:
    """Decompletion of circulant(m,1,2) at vertex m-1."""
    if m < 5:
        raise GraphError("zigzag needs m >= 5")
    return delete_vertex(circulant(m, 1, 2), m - 1)


def didntwork_g() -> Multigraph:
    """The glued graph of the two-cut counterexample: K_{2,4}.

    Two diamonds lose their chords and are identified along the chord
    endpoints {0, 1}; residues live at primes 8n+1.
    """
    return complete_bipartite(2, 4)


def didntwork_g1() -> Multigraph:
    """Its minor: the diamond K4 - e, chord (0,1) as edge 0; primes 5n+1."""
    return Multigraph.build(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])


_CATALOG_BUILDERS = {
    "banana": lambda: banana(2),
    "K4": lambda: complete_graph(4),
    "K3_4": lambda: complete_bipartite(3, 4),
    "didntwork_G": didntwork_g,
    "didntwork_G1": didntwork_g1,
}


def catalog(name: str) -> Multigraph:
    """Deterministic construction of a named graph.

    Accepted names: banana, K4, K3_4, wheel(w), zigzag(m), circulant(m,a,b),
    path(k), didntwork_G, didntwork_G1, and bundled completions P_i_j.
    """
    name = name.strip()
    if name in _CATALOG_BUILDERS:
        return _CATALOG_BUILDERS[name]()
    if name.startswith("wheel(") and name.endswith(")"):
        return wheel(int(name[6:-1]))
    if name.startswith("zigzag(") and name.endswith(")"):
        return zigzag(int(name[7:-1]))
    if name.startswith("path(") and name.endswith(")"):
        return path_graph(int(name[5:-1]))
    if name.startswith("circulant(") and name.endswith(")"):
        m, a, b = (int(x) for x in name[10:-1].split(","))
        return circulant(m, a, b)
    if name.startswith("P_"):
        from .bundle import bundled_completion
        return bundled_completion(name)
    raise GraphError(f"unknown graph name {name!r}")


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def delete_vertex(g: Multigraph, v: int) -> Multigraph:
    """Delete v and its incident edges, renumbering the rest densely."""
    if not (0 <= v < g.vertex_count):
        raise GraphError("vertex out of range")
    remap = {}
    for u in range(g.vertex_count):
        if u != v:
            remap[u] = len(remap)
    edges = [(remap[t], remap[h]) for t, h in g.edges if t != v and h != v]
    return Multigraph.build(g.vertex_count - 1, edges)


def decompletions(g: Multigraph) -> list[Multigraph]:
    """All single-vertex deletions of a 4-regular graph."""
    if any(d != 4 for d in g.degrees()):
        raise GraphError("decompletion requires a 4-regular graph")
    return [delete_vertex(g, v) for v in range(g.vertex_count)]


def duplicate_edges(g: Multigraph, n: int) -> Multigraph:
    """Replace each edge by n parallel copies with the same orientation, grouped by source edge."""
    if n <= 0:
        raise GraphError("duplication count must be positive")
    edges = [e for e in g.edges for _ in range(n)]
    return Multigraph(g.vertex_count, tuple(edges))


def schnetz_twist(g: Multigraph, cut: Sequence[int], side: Iterable[int]) -> Multigraph:
    """Reattach the side's edges at a 4-vertex cut, pairing v1<->v2 and v3<->v4.

    `cut` is (v1, v2, v3, v4) in pairing order; `side` is the vertex set on one
    shore.  Errors when the side touches the far shore other than through the
    cut, or when the result is not 4-regular.
    """
    v1, v2, v3, v4 = cut
    if len(set(cut)) != 4:
        raise GraphError("cut must list 4 distinct vertices")
    side_set = set(side)
    if side_set & set(cut):
        raise GraphError("side must be disjoint from the cut")
    swap = {v1: v2, v2: v1, v3: v4, v4: v3}
    other = set(range(g.vertex_count)) - side_set - set(cut)
    new_edges = []
    for t, h in g.edges:
        if (t in side_set and h in other) or (h in side_set and t in other):
            raise GraphError("side has an edge crossing the cut away from the cut vertices")
        if t in swap and h in side_set:
            t = swap[t]
        elif h in swap and t in side_set:
            h = swap[h]
        new_edges.append((min(t, h), max(t, h)))
    out = Multigraph(g.vertex_count, tuple(new_edges))
    if any(d != 4 for d in out.degrees()):
        raise GraphError("twist result is not 4-regular")
    return out


def planar_dual(g: Multigraph, emb: Embedding) -> Multigraph:
    """Geometric dual: one vertex per face, one edge per primal edge.

    The dual edge of e runs from the face right of e to the face left of e.
    Errors unless the rotation system has genus 0 (|V| - |E| + |F| = 2).
    """
    emb.validate(g)
    if not g.is_connected():
        raise GraphError("dual requires a connected graph")
    faces = trace_faces(g, emb)
    if g.vertex_count - g.edge_count + len(faces) != 2:
        raise GraphError("rotation system is not a planar (genus 0) embedding")
    face_of_arc = {}
    for fi, face in enumerate(faces):
        for arc in face:
            face_of_arc[arc] = fi
    # arc (eid, 0) walks the edge tail->head; its face lies left of the edge
    dual_edges = []
    for eid in range(g.edge_count):
        left = face_of_arc[(eid, 0)]
        right = face_of_arc[(eid, 1)]
        dual_edges.append((right, left))
    return Multigraph(len(faces), tuple(dual_edges))


def trace_faces(g: Multigraph, emb: Embedding) -> list[list[tuple[int, int]]]:
    """Face walks of a rotation system, each face a cyclic list of arcs.

    Arc (eid, 0) traverses tail->head, (eid, 1) head->tail.  The successor of
    an arc entering v through end `end` leaves v through the edge-end after
    (eid, 1-end) in the rotation at v.
    """
    nxt_end: dict[tuple[int, int], tuple[int, int]] = {}
    for rot in emb.rotations:
        for i, ee in enumerate(rot):
            nxt_end[ee] = rot[(i + 1) % len(rot)]

    def arc_head(arc):
        eid, d = arc
        t, h = g.edges[eid]
        return h if d == 0 else t

    def successor(arc):
        eid, d = arc
        v = arc_head(arc)
        # the arc enters v through end (1-d if not a loop; for loops both ends are at v)
        in_end = (eid, 1 - d) if d == 0 else (eid, 0)
        if g.edges[eid][0] == g.edges[eid][1]:
            in_end = (eid, 1 - d)
        ne, nend = nxt_end[in_end]
        # leave through (ne, nend): direction is 0 when nend is the tail end
        return (ne, 0 if nend == 0 else 1)

    unused = {(e, d) for e in range(g.edge_count) for d in (0, 1)}
    faces = []
    while unused:
        start = min(unused)
        walk = []
        arc = start
        while True:
            walk.append(arc)
            unused.discard(arc)
            arc = successor(arc)
            if arc == start:
                break
        faces.append(walk)
    return faces


def two_vertex_glue(g1: Multigraph, e1: int, g2: Multigraph, e2: int, flip: bool = False) -> Multigraph:
    """Delete e1 and e2 and identify their endpoints pairwise.

    flip=False maps tail->tail/head->head; flip=True crosses the pairing.
    g1 keeps its labels; g2's remaining vertices follow in index order.
    """
    a1, b1 = g1.edges[e1]
    a2, b2 = g2.edges[e2]
    if a1 == b1 or a2 == b2:
        raise GraphError("glue edges must not be loops")
    if flip:
        a2, b2 = b2, a2
    remap = {a2: a1, b2: b1}
    nxt = g1.vertex_count
    for v in range(g2.vertex_count):
        if v not in remap:
            remap[v] = nxt
            nxt += 1
    edges = [e for i, e in enumerate(g1.edges) if i != e1]
    edges += [(remap[t], remap[h]) for i, (t, h) in enumerate(g2.edges) if i != e2]
    return Multigraph.build(nxt, edges)


def whitney_flip(g: Multigraph, cutpair: tuple[int, int], side: Iterable[int]) -> Multigraph:
    """Swap the side's attachments between the two cut vertices."""
    u, v = cutpair
    side_set = set(side)
    if side_set & {u, v}:
        raise GraphError("side must exclude the cut pair")
    rest = set(range(g.vertex_count)) - side_set - {u, v}
    swap = {u: v, v: u}
    new_edges = []
    for t, h in g.edges:
        if (t in side_set and h in rest) or (h in side_set and t in rest):
            raise GraphError("side is not separated by the cut pair")
        if t in swap and h in side_set:
            t = swap[t]
        elif h in swap and t in side_set:
            h = swap[h]
        new_edges.append((min(t, h), max(t, h)))
    return Multigraph(g.vertex_count, tuple(new_edges))


# ---------------------------------------------------------------------------
# Brute-force isomorphism (test helper; |V| <= 10)
# ---------------------------------------------------------------------------

def are_isomorphic(g1: Multigraph, g2: Multigraph) -> bool:
    if g1.vertex_count != g2.vertex_count or g1.edge_count != g2.edge_count:
        return False
    if sorted(g1.degrees()) != sorted(g2.degrees()):
        return False
    if g1.vertex_count > 10:
        raise GraphError("brute-force isomorphism capped at 10 vertices")
    m1 = g1.edge_multiset()
    m2 = g2.edge_multiset()
    if sorted(m1.values()) != sorted(m2.values()):
        return False
    deg1, deg2 = g1.degrees(), g2.degrees()
    for perm in itertools.permutations(range(g1.vertex_count)):
        if any(deg1[v] != deg2[perm[v]] for v in range(g1.vertex_count)):
            continue
        mapped = {}
        for (a, b), k in m1.items():
            x, y = perm[a], perm[b]
            mapped[(min(x, y), max(x, y))] = k
        if mapped == m2:
            return True
    return False
