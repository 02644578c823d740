"""Graph-to-formula compiler.

Symbolic cofactor expansion of the block permanent, tracked as weights on
vertices (remaining rows) and edges (remaining columns).  The expansion acts
on the special vertex's edges, then on a vertex set whose removal leaves a
forest (fresh bound variable per multinomial slot), then peels leaves.  Per
vertex the factorial ratios telescope to a single (v*n)!, so the result is
(v*n)!^(|V|-1) times a sum of binomials in e*n-forms and one sign term.

Implicit range constraints are preserved by the binomial convention
C(a,b) = 0 outside 0 <= b <= a; a component whose last vertex has a
non-trivially-zero weight w gets an explicit C(0, w) indicator.
"""
from __future__ import annotations

from .ast import Binomial, ClosedForm, Fact, FormulaError, LinForm, Sign
from ..graphcore import GraphError, Multigraph, fundamental_spec


def generate_closed_form(g: Multigraph, special: int | None = None,
                         order: list[int] | None = None) -> ClosedForm:
    """Compile a graph to a closed form equal to its residues up to sign class.

    `order` optionally fixes the cycle-breaking vertex set and its processing
    order; by default a greedy maximum-degree feedback set of G - special is
    used.  Orders only change the shape of the formula, never its residues.
    """
    if special is None:
        special = g.vertex_count - 1
    if g.has_loop():
        raise GraphError("closed-form generation forbids loops")
    if any(d == 1 for d in g.degrees()):
        raise GraphError("closed-form generation forbids pendant vertices")
    spec = fundamental_spec(g)
    vm, em = spec.v_mult, spec.e_mult

    state = _State(g, special, vm, em)
    for eid in g.incident_edges(special):
        state.act_edge(eid)
    state.reap()

    if order is None:
        order = _greedy_cycle_breakers(g, special)
    else:
        order = list(order)
    for v in order:
        if state.vertex_alive(v):
            state.act_vertex(v)
            state.cascade()

    while True:
        leaf = state.find_leaf()
        if leaf is None:
            break
        state.act_vertex(leaf)
        state.cascade()
    state.finish()

    prefactors: list[Fact | Sign] = [Fact(LinForm.n(vm), g.vertex_count - 1)]
    factors = list(state.factors)
    sign = state.sign_exponent.mod2()
    if not sign.is_zero():
        if sign.variables():
            factors.append(Sign(sign))
        else:
            prefactors.append(Sign(sign))
    variables = tuple((name, em) for name in state.variables)
    return ClosedForm(vm, tuple(prefactors), variables, tuple(factors))


def _greedy_cycle_breakers(g: Multigraph, special: int) -> list[int]:
    """Vertices whose removal (after the special vertex) leaves a forest.

    Greedy: repeatedly delete the highest-degree vertex lying on a cycle,
    tie-broken by index.  Parallel edges count as cycles.
    """
    alive = set(range(g.vertex_count)) - {special}
    chosen = []
    while True:
        cyc = _cycle_vertices(g, alive)
        if not cyc:
            return chosen
        deg = {v: sum(1 for t, h in g.edges if (t == v or h == v)
                      and t in alive and h in alive) for v in cyc}
        pick = max(cyc, key=lambda v: (deg[v], -v))
        chosen.append(pick)
        alive.discard(pick)


def _cycle_vertices(g: Multigraph, alive: set[int]) -> set[int]:
    """Vertices of the subgraph induced on `alive` that lie on some cycle."""
    mult: dict[tuple[int, int], int] = {}
    for t, h in g.edges:
        if t in alive and h in alive and t != h:
            k = (min(t, h), max(t, h))
            mult[k] = mult.get(k, 0) + 1
    core = {v for (a, b), m in mult.items() if m >= 2 for v in (a, b)}
    # repeatedly strip degree<=1 vertices of the simple skeleton; what's left is cyclic
    adj: dict[int, set[int]] = {v: set() for v in alive}
    for a, b in mult:
        adj[a].add(b)
        adj[b].add(a)
    changed = True
    alive2 = set(alive)
    while changed:
        changed = False
        for v in list(alive2):
            if len(adj[v] & alive2) <= 1:
                alive2.discard(v)
                changed = True
    return core | alive2


class _State:
    def __init__(self, g: Multigraph, special: int, vm: int, em: int):
        self.g = g
        self.vm, self.em = vm, em
        self.vertex_weight: list[LinForm | None] = [LinForm.n(vm)] * g.vertex_count
        self.vertex_weight[special] = None  # dead from the start
        self.edge_weight: list[LinForm | None] = [LinForm.n(em)] * g.edge_count
        self.factors: list[Binomial | Sign] = []
        self.sign_exponent = LinForm()
        self.variables: list[str] = []

    # -- queries ------------------------------------------------------------

    def vertex_alive(self, v: int) -> bool:
        return self.vertex_weight[v] is not None

    def live_edges_at(self, v: int) -> list[int]:
        return [i for i, w in enumerate(self.edge_weight)
                if w is not None and v in self.g.edges[i]]

    def live_degree(self, v: int) -> int:
        return len(self.live_edges_at(v))

    def find_leaf(self) -> int | None:
        live = [v for v in range(self.g.vertex_count) if self.vertex_alive(v)]
        for v in live:
            if self.live_degree(v) == 1:
                return v
        if any(self.live_degree(v) > 1 for v in live):
            raise FormulaError("cycle survived the breaker set")
        return None

    def _entry(self, eid: int, v: int) -> int:
        t, h = self.g.edges[eid]
        return 1 if h == v else -1

    def _fresh(self) -> LinForm:
        name = f"x{len(self.variables)}"
        self.variables.append(name)
        return LinForm.var(name)

    def _other(self, eid: int, v: int) -> int:
        t, h = self.g.edges[eid]
        return h if t == v else t

    # -- primitive steps ----------------------------------------------------

    def act_edge(self, eid: int) -> None:
        """Expand all columns of an edge with exactly one live endpoint."""
        w_e = self.edge_weight[eid]
        t, h = self.g.edges[eid]
        live = [v for v in (t, h) if self.vertex_alive(v)]
        if len(live) != 1:
            raise FormulaError("edge expansion needs exactly one live endpoint")
        u = live[0]
        if self._entry(eid, u) == -1:
            self.sign_exponent = self.sign_exponent + w_e
        self.vertex_weight[u] = self.vertex_weight[u] - w_e
        self.edge_weight[eid] = None

    def act_vertex(self, v: int) -> None:
        """Expand all rows of v as a multinomial over its live edges."""
        w_v = self.vertex_weight[v]
        eids = self.live_edges_at(v)
        remaining = w_v
        free: list[int] = []
        for eid in eids:
            if self.vertex_alive(self._other(eid, v)):
                free.append(eid)
            else:
                # both endpoints dead after this step: the edge must be used up
                k = self.edge_weight[eid]
                remaining = remaining - k
                if self._entry(eid, v) == -1:
                    self.sign_exponent = self.sign_exponent + k
                self.edge_weight[eid] = None
        for eid in free[:-1]:
            k = self._fresh()
            self.factors.append(Binomial(self.edge_weight[eid], k))
            if self._entry(eid, v) == -1:
                self.sign_exponent = self.sign_exponent + k
            self.edge_weight[eid] = self.edge_weight[eid] - k
            remaining = remaining - k
        if free:
            eid = free[-1]
            self.factors.append(Binomial(self.edge_weight[eid], remaining))
            if self._entry(eid, v) == -1:
                self.sign_exponent = self.sign_exponent + remaining
            self.edge_weight[eid] = self.edge_weight[eid] - remaining
        elif not remaining.is_zero():
            self.factors.append(Binomial(LinForm(), remaining))
        self.vertex_weight[v] = None

    def cascade(self) -> None:
        """Fire pending single-live-endpoint edge expansions, then reap."""
        progress = True
        while progress:
            progress = False
            for eid, w in enumerate(self.edge_weight):
                if w is None:
                    continue
                t, h = self.g.edges[eid]
                alive = [v for v in (t, h) if self.vertex_alive(v)]
                if len(alive) == 1:
                    self.act_edge(eid)
                    progress = True
                elif not alive:
                    raise FormulaError("edge stranded with no live endpoint")
        self.reap()

    def reap(self) -> None:
        """Close out live vertices with no live edges; C(0,w) pins w = 0."""
        for v in range(self.g.vertex_count):
            if self.vertex_alive(v) and self.live_degree(v) == 0:
                w = self.vertex_weight[v]
                if not w.is_zero():
                    self.factors.append(Binomial(LinForm(), w))
                self.vertex_weight[v] = None

    def finish(self) -> None:
        if any(w is not None for w in self.edge_weight):
            raise FormulaError("unconsumed edge columns remain")
        if any(w is not None for w in self.vertex_weight):
            raise FormulaError("unconsumed vertex rows remain")
