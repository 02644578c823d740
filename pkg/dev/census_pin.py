"""Pin the named seven-loop completions, find the twist datum and the planar
embedding realizing the dual pair, and write bundled .graph files."""
import itertools, random, sys
import networkx as nx

sys.path.insert(0, "src")
from egperm.graphcore import (Multigraph, delete_vertex, matrix_fundamental_spec,
                              schnetz_twist, are_isomorphic, format_graph,
                              planar_dual, Embedding, parse_graph)
from egperm.closedform import generate_closed_form, eval_formula
from egperm.gperm import sequences_match, sequence_from_values
from egperm.bundle import golden_table

PRIMES = [3, 5, 7, 11, 13]
gt = golden_table()
spec2 = matrix_fundamental_spec(3, 6)

def to_mg(G):
    nodes = sorted(G.nodes())
    idx = {v: i for i, v in enumerate(nodes)}
    edges = sorted((min(idx[a], idx[b]), max(idx[a], idx[b])) for a, b in G.edges())
    return Multigraph.build(len(nodes), edges)

def row_of(mg, primes=PRIMES, special=None):
    dec = delete_vertex(mg, mg.vertex_count - 1)
    f = generate_closed_form(dec, special)
    return {p: eval_formula(f, p) for p in primes}

def matches(row, name, primes=PRIMES):
    s1 = sequence_from_values("a", spec2, row)
    s2 = sequence_from_values("b", spec2, {p: gt.row(name)[p] for p in primes})
    return sequences_match(s1, s2)[0]

def nontrivial_4cut(G):
    nodes = list(G.nodes())
    n = len(nodes)
    for r in range(2, n - 1):
        for S in itertools.combinations(nodes, r):
            S = set(S)
            cut = sum(1 for a, b in G.edges() if (a in S) != (b in S))
            if cut <= 4:
                return True
    return False

random.seed(7)
found = []
stall = 0
while stall < 4000:
    G = nx.random_regular_graph(4, 9, seed=random.randrange(10**9))
    if not nx.is_connected(G):
        continue
    if any(nx.is_isomorphic(G, H) for H in found):
        stall += 1
        continue
    found.append(G)
    stall = 0
assert len(found) == 16

named = {}
for G in found:
    mg = to_mg(G)
    row = row_of(mg)
    names = [n for n in gt.names() if n.startswith("P_7") and matches(row, n)]
    if not names:
        continue
    prim = not nontrivial_4cut(G)
    tri = sum(nx.triangles(G).values()) // 3
    if names == ["P_7_11"]:
        named["P_7_11"] = mg
    if set(names) == {"P_7_4", "P_7_7"} and prim:
        named["P_7_4" if tri == 5 else "P_7_7"] = mg
    if set(names) == {"P_7_5", "P_7_10"} and prim:
        named.setdefault("dual_pair", []).append(mg)

print("named so far:", {k: v for k, v in named.items() if k != "dual_pair"}.keys(),
      "dual candidates:", len(named.get("dual_pair", [])))

# resolve the dual pair: P_7_5's decompletion is planar with independent
# degree-3 vertices; its geometric dual must be a decompletion of the partner
pair = named.pop("dual_pair")
assert len(pair) == 2, len(pair)

def planar_decs(mg):
    out = []
    for v in range(mg.vertex_count):
        dec = delete_vertex(mg, v)
        Gd = nx.MultiGraph()
        Gd.add_nodes_from(range(dec.vertex_count))
        Gd.add_edges_from(dec.edges)
        ok, emb = nx.check_planarity(Gd)
        if ok:
            out.append((v, dec, emb))
    return out

def rotation_from_nx(dec, emb):
    # networkx PlanarEmbedding: cyclic order of neighbor half-edges per node.
    # Rebuild as per-vertex edge-end lists; parallel edges are keyed.
    rot_lines = {}
    for v in range(dec.vertex_count):
        order = []
        nbrs = list(emb.neighbors_cw_order(v))  # may fail for multigraph
        for w in nbrs:
            cands = [i for i, (t, h) in enumerate(dec.edges) if {t, h} == {v, w}]
            order.extend(cands)  # fine only when simple
        rot_lines[v] = order
    return rot_lines

resolved = {}
for mg in pair:
    decs = planar_decs(mg)
    indep_any = False
    for v, dec, emb in decs:
        deg3 = [u for u in range(dec.vertex_count) if dec.degree(u) == 3]
        pairs = {(min(t, h), max(t, h)) for t, h in dec.edges}
        if all((min(a, b), max(a, b)) not in pairs for a, b in itertools.combinations(deg3, 2)):
            indep_any = True
    print("candidate: planar decs:", [v for v, _, _ in decs], "indep deg3 exists:", indep_any)
    resolved[indep_any] = mg

p75, p710 = resolved[True], resolved[False]
named["P_7_5"], named["P_7_10"] = p75, p710

# verify duality structurally: some planar decompletion of P_7_5, dualized,
# is isomorphic to some decompletion of P_7_10
hit = None
for v, dec, emb in planar_decs(p75):
    if dec.edge_multiset() and max(dec.edge_multiset().values()) > 1:
        continue
    rot = rotation_from_nx(dec, emb)
    embedding = parse_graph(format_graph(dec) + "".join(
        f"EMB {u}: " + " ".join(map(str, rot[u])) + "\n" for u in range(dec.vertex_count)))[1]
    try:
        dual = planar_dual(dec, embedding)
    except Exception as e:
        print("dual failed at", v, e)
        continue
    for w in range(p710.vertex_count):
        if are_isomorphic(dual, delete_vertex(p710, w)):
            hit = (v, dec, rot, w)
            break
    if hit:
        break
print("dual verification:", "ok" if hit else "FAILED", "decompleted at", hit[0], "-> matches P_7_10 -", hit[3])

# twist search: find cut+side+pairing with twist(P_7_4) iso P_7_7
import json
p74, p77 = named["P_7_4"], named["P_7_7"]
twist_datum = None
n = p74.vertex_count
for cut in itertools.combinations(range(n), 4):
    rest = [v for v in range(n) if v not in cut]
    # candidate sides: unions of connected components of G - cut
    Gm = nx.Graph()
    Gm.add_nodes_from(rest)
    Gm.add_edges_from((t, h) for t, h in p74.edges if t in rest and h in rest)
    comps = [sorted(c) for c in nx.connected_components(Gm)]
    if len(comps) < 2:
        continue
    for k in range(1, len(comps)):
        for chosen in itertools.combinations(range(len(comps)), k):
            side = sorted(v for i in chosen for v in comps[i])
            for pairing in ((0,1,2,3), (0,2,1,3), (0,3,1,2)):
                order = [cut[pairing[0]], cut[pairing[1]], cut[pairing[2]], cut[pairing[3]]]
                try:
                    tw = schnetz_twist(p74, order, side)
                except Exception:
                    continue
                if are_isomorphic(tw, p77):
                    twist_datum = {"cut": order, "side": side}
                    break
            if twist_datum: break
        if twist_datum: break
    if twist_datum: break
print("twist datum:", twist_datum)

# write bundles
import pathlib
droot = pathlib.Path("src/egperm/data/graphs")
for name in ("P_7_4", "P_7_5", "P_7_7", "P_7_10", "P_7_11"):
    (droot / f"{name.lower()}.graph").write_text(
        "# completed census graph, reconstructed from its residue row\n" + format_graph(named[name]))
if hit:
    v, dec, rot, w = hit
    text = "# planar decompletion of p_7_5 (deleted vertex %d) with rotation system\n" % v
    text += format_graph(dec)
    text += "".join(f"EMB {u}: " + " ".join(map(str, rot[u])) + "\n" for u in range(dec.vertex_count))
    (droot / "p_7_5_dec_planar.graph").write_text(text)
if twist_datum:
    pathlib.Path("src/egperm/data/twist_p_7_4.json").write_text(json.dumps(twist_datum) + "\n")
print("bundled.")
