"""Optimal transport on finite metric spaces and coupled two-scale graphs.

Kantorovich distances are solved by successive shortest paths on the
complete transshipment digraph over the support union. With rational
inputs on at most 64 support points everything runs in Fractions and the
strong-duality gap is checked to be exactly zero; larger or float inputs
fall back to floats with a 1e-9 gap tolerance. The returned potentials
are 1-Lipschitz on the support and certify the optimum.

The coupled-graph half glues a fine prefractal level onto a coarse one
with cross edges of weight alpha and certifies how far any Dirac state
can sit from the opposite copy. Reported numbers are upper bounds from
measured Hausdorff quantities; premises are checked, not assumed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import isfinite

from .gasket import PrefractalComplex, build_gasket
from .metric import (EdgePoint, FiniteMetricSpace, MetricGraph, _is_exact_weight,
                     _resolve_point, _tighten, gasket_metric_graph,
                     gh_upper_bound, sample_parameters)

_FLOAT_MASS_TOL = 1e-12
_FLOAT_GAP_TOL = 1e-9
RATIONAL_SUPPORT_CAP = 64


def _as_float(value):
    if isinstance(value, float):
        return value
    return float(Fraction(value))


class DiscreteMeasure:
    """Probability measure with finite support, given by index -> weight.

    Weights must be nonnegative and sum to one: exactly when rational,
    within 1e-12 when float. Duplicate indices merge.
    """

    def __init__(self, weights):
        items = weights.items() if isinstance(weights, dict) else weights
        merged = {}
        exact = True
        for i, w in items:
            if not isinstance(i, int) or i < 0:
                raise ValueError("support index must be a nonnegative int, got %r" % (i,))
            if _is_exact_weight(w):
                w = Fraction(w)
            else:
                w = float(w)
                exact = False
                if not isfinite(w):
                    raise ValueError("weight at %d is not finite" % i)
            if w < 0:
                raise ValueError("negative weight %s at index %d" % (w, i))
            if w != 0:
                merged[i] = merged.get(i, Fraction(0) if exact else 0.0) + w
        if not merged:
            raise ValueError("measure needs at least one positive weight")
        if exact:
            total = sum(merged.values())
            if total != 1:
                raise ValueError("weights must sum to 1, got %s" % total)
        else:
            merged = {i: float(w) for i, w in merged.items()}
            total = sum(merged.values())
            if abs(total - 1.0) > _FLOAT_MASS_TOL:
                raise ValueError("weights must sum to 1 within %g, got %.17g"
                                 % (_FLOAT_MASS_TOL, total))
        self.weights = dict(sorted(merged.items()))
        self.exact = exact

    @classmethod
    def dirac(cls, index: int) -> "DiscreteMeasure":
        return cls({index: Fraction(1)})

    @classmethod
    def uniform(cls, indices) -> "DiscreteMeasure":
        idx = list(indices)
        return cls([(i, Fraction(1, len(idx))) for i in idx])

    @classmethod
    def random_mixture(cls, rng: random.Random, indices, k: int) -> "DiscreteMeasure":
        """Exact random mixture on k points drawn from `indices`."""
        chosen = rng.sample(list(indices), k)
        raw = [rng.randint(1, 9) for _ in chosen]
        total = sum(raw)
        return cls([(i, Fraction(r, total)) for i, r in zip(chosen, raw)])

    @property
    def support(self):
        return list(self.weights)

    def weight(self, index: int):
        return self.weights.get(index, Fraction(0) if self.exact else 0.0)

    def __len__(self):
        return len(self.weights)


@dataclass
class TransportResult:
    value: object
    plan: list            # (source index, target index, mass), marginal-exact
    potentials: dict      # index -> dual value, 1-Lipschitz on the support
    gap: object           # primal cost minus dual value
    exact: bool

    def to_dict(self) -> dict:
        return {
            "value": _as_float(self.value),
            "plan": [[i, j, _as_float(m)] for i, j, m in self.plan],
            "dual": [[i, _as_float(p)] for i, p in sorted(self.potentials.items())],
            "gap": _as_float(self.gap),
            "exact": self.exact,
        }


def _ssp_transshipment(cost, b, exact):
    """Min-cost flow for node imbalances b on a complete metric digraph.

    Returns (flow dict (i,j)->mass, potentials list). Potentials satisfy
    |pi_i - pi_j| <= cost[i][j] everywhere and complementary slackness,
    so sum(b*pi) equals the flow cost.
    """
    n = len(b)
    zero = Fraction(0) if exact else 0.0
    excess_floor = zero if exact else _FLOAT_MASS_TOL
    pi = [zero] * n
    flow = {}
    guard = 10 * n * n + 16

    for _ in range(guard):
        src = next((i for i in range(n) if b[i] > excess_floor), None)
        if src is None:
            break
        # Dijkstra under reduced costs; back arcs (cancelling existing
        # flow) are cheaper than forward ones, so they take precedence
        dist = [None] * n
        parent = [-1] * n
        back = [False] * n
        done = [False] * n
        dist[src] = zero
        while True:
            u = min((i for i in range(n) if not done[i] and dist[i] is not None),
                    key=lambda i: dist[i], default=None)
            if u is None:
                break
            done[u] = True
            for v in range(n):
                if v == u or done[v]:
                    continue
                if flow.get((v, u), zero) > zero:
                    arc_cost, via_back = -cost[v][u], True
                else:
                    arc_cost, via_back = cost[u][v], False
                cand = dist[u] + arc_cost - pi[u] + pi[v]
                if dist[v] is None or cand < dist[v]:
                    dist[v] = cand
                    parent[v] = u
                    back[v] = via_back
        sinks = [j for j in range(n) if b[j] < -excess_floor]
        if not sinks:
            break
        t = min(sinks, key=lambda j: (dist[j], j))
        for v in range(n):
            if dist[v] is not None:
                pi[v] -= dist[v]
        # augment along the parent path
        path = []
        v = t
        while v != src:
            path.append((parent[v], v, back[v]))
            v = parent[v]
        path.reverse()
        m = min(b[src], -b[t])
        for u, v, via_back in path:
            if via_back:
                m = min(m, flow[(v, u)])
        for u, v, via_back in path:
            if via_back:
                left = flow[(v, u)] - m
                if left > zero:
                    flow[(v, u)] = left
                else:
                    del flow[(v, u)]
            else:
                flow[(u, v)] = flow.get((u, v), zero) + m
        b[src] -= m
        b[t] += m
    else:
        raise RuntimeError("transshipment failed to settle within %d augmentations" % guard)
    return flow, pi


def _decompose_flow(flow, supply, demand, zero):
    """Split an acyclic flow into source-to-sink path masses."""
    adj = {}
    for (u, v), m in flow.items():
        adj.setdefault(u, {})[v] = m
    supply = dict(supply)
    demand = dict(demand)
    plan = {}
    guard = 4 * (len(flow) + len(supply) + len(demand)) + 16
    for _ in range(guard):
        s = next((i for i, m in sorted(supply.items()) if m > zero), None)
        if s is None:
            break
        node = s
        path = []
        while node in adj and adj[node]:
            nxt = min(adj[node])
            path.append((node, nxt))
            node = nxt
        if not path:
            raise RuntimeError("flow conservation violated at node %d" % s)
        t = node
        m = min(supply[s], demand[t], min(adj[u][v] for u, v in path))
        for u, v in path:
            left = adj[u][v] - m
            if left > zero:
                adj[u][v] = left
            else:
                del adj[u][v]
        supply[s] -= m
        demand[t] -= m
        plan[(s, t)] = plan.get((s, t), m * 0) + m
    else:
        raise RuntimeError("flow decomposition did not terminate")
    return plan


def kantorovich(space: FiniteMetricSpace, mu: DiscreteMeasure,
                nu: DiscreteMeasure) -> TransportResult:
    """Optimal transport cost between mu and nu on a finite metric space.

    Exact (Fraction) when the space and both measures are rational and
    the support union has at most RATIONAL_SUPPORT_CAP points; float with
    a checked duality gap <= 1e-9 otherwise.
    """
    n_pts = len(space)
    for meas, name in ((mu, "mu"), (nu, "nu")):
        top = max(meas.support)
        if top >= n_pts:
            raise ValueError("%s has support index %d but the space has %d points"
                             % (name, top, n_pts))
    nodes = sorted(set(mu.support) | set(nu.support))
    exact = (space.exact and mu.exact and nu.exact
             and len(nodes) <= RATIONAL_SUPPORT_CAP)
    pos = {p: k for k, p in enumerate(nodes)}

    def lift(w):
        return Fraction(w) if exact else _as_float(w)

    cost = [[lift(space.matrix[p][q]) for q in nodes] for p in nodes]
    mu_w = [lift(mu.weight(p)) for p in nodes]
    nu_w = [lift(nu.weight(p)) for p in nodes]
    b = [mw - nw for mw, nw in zip(mu_w, nu_w)]
    zero = Fraction(0) if exact else 0.0

    flow, pi = _ssp_transshipment(cost, list(b), exact)
    value = sum((m * cost[u][v] for (u, v), m in flow.items()), zero)
    dual = sum((bi * p for bi, p in zip(b, pi)), zero)
    gap = value - dual
    if exact:
        if gap != 0:
            raise RuntimeError("exact duality gap is nonzero: %s" % gap)
    elif abs(gap) > _FLOAT_GAP_TOL:
        raise RuntimeError("duality gap %.3g exceeds %g" % (gap, _FLOAT_GAP_TOL))

    supply = {i: bi for i, bi in enumerate(b) if bi > zero}
    demand = {i: -bi for i, bi in enumerate(b) if bi < zero}
    moved = _decompose_flow(flow, supply, demand, zero)
    plan = []
    for k, p in enumerate(nodes):
        stay = min(mu_w[k], nu_w[k])
        if stay > zero:
            plan.append((p, p, stay))
    for (u, v), m in sorted(moved.items()):
        plan.append((nodes[u], nodes[v], m))

    # the decomposed plan can only be cheaper than the flow (triangle
    # inequality), and no plan beats the optimum, so costs must agree
    plan_cost = sum((m * lift(space.matrix[i][j]) for i, j, m in plan), zero)
    if exact:
        if plan_cost != value:
            raise RuntimeError("plan cost %s disagrees with flow cost %s"
                               % (plan_cost, value))
    elif abs(plan_cost - value) > _FLOAT_GAP_TOL:
        raise RuntimeError("plan cost drifted from flow cost by %.3g"
                           % abs(plan_cost - value))
    _check_marginals(plan, mu_w, nu_w, nodes, exact)

    if exact:
        value = _tighten(value)
        plan = [(i, j, _tighten(m)) for i, j, m in plan]
        pots = {p: _tighten(pi[k]) for p, k in pos.items()}
    else:
        pots = {p: pi[k] for p, k in pos.items()}
    return TransportResult(value=value, plan=plan, potentials=pots,
                           gap=gap, exact=exact)


def _check_marginals(plan, mu_w, nu_w, nodes, exact):
    pos = {p: k for k, p in enumerate(nodes)}
    zero = Fraction(0) if exact else 0.0
    row = [zero] * len(nodes)
    col = [zero] * len(nodes)
    for i, j, m in plan:
        row[pos[i]] += m
        col[pos[j]] += m
    tol = 0 if exact else 2 * _FLOAT_MASS_TOL
    for k in range(len(nodes)):
        if abs(row[k] - mu_w[k]) > tol or abs(col[k] - nu_w[k]) > tol:
            raise RuntimeError("plan marginals disagree with the measures at "
                               "point %d" % nodes[k])


# -- Lipschitz calculus ---------------------------------------------------


def _seminorm_with_witness(space: FiniteMetricSpace, values, indices):
    best = None
    pair = None
    exact = space.exact and all(_is_exact_weight(v) for v in values)
    for a in range(len(indices)):
        for c in range(a + 1, len(indices)):
            i, j = indices[a], indices[c]
            d = space.matrix[i][j]
            num = values[a] - values[c]
            if num < 0:
                num = -num
            ratio = (Fraction(num) / Fraction(d)) if exact else _as_float(num) / _as_float(d)
            if best is None or ratio > best:
                best = ratio
                pair = (i, j)
    if best is None:
        best = Fraction(0) if exact else 0.0
    return best, pair, exact


def lipschitz_seminorm(space: FiniteMetricSpace, values, indices=None):
    """max |f(i) - f(j)| / d(i, j) over pairs; exact when inputs are."""
    if indices is None:
        indices = list(range(len(space)))
    else:
        indices = list(indices)
    values = list(values)
    if len(values) != len(indices):
        raise ValueError("need one value per point, got %d values for %d points"
                         % (len(values), len(indices)))
    semi, _, exact = _seminorm_with_witness(space, values, indices)
    return _tighten(semi) if exact and isinstance(semi, Fraction) else semi


def mcshane_extend(space: FiniteMetricSpace, indices, values, bound):
    """Largest L-Lipschitz extension g(x) = min_s (f(s) + L d(s, x)).

    Requires f to be L-Lipschitz on the subset already; otherwise raises
    naming a violating pair. Returns values on every point of the space,
    agreeing with f on the subset.
    """
    indices = list(indices)
    values = list(values)
    if len(values) != len(indices):
        raise ValueError("need one value per subset point")
    if not indices:
        raise ValueError("cannot extend from an empty subset")
    semi, pair, exact = _seminorm_with_witness(space, values, indices)
    lift = (lambda v: Fraction(v)) if exact and _is_exact_weight(bound) else _as_float
    bound_l = lift(bound)
    if semi > bound_l:
        raise ValueError(
            "data is not %s-Lipschitz on the subset: pair (%r, %r) has slope %s"
            % (bound, space.labels[pair[0]], space.labels[pair[1]], semi))
    out = []
    for x in range(len(space)):
        best = None
        for s, fs in zip(indices, values):
            cand = lift(fs) + bound_l * lift(space.matrix[s][x])
            if best is None or cand < best:
                best = cand
        out.append(_tighten(best) if isinstance(best, Fraction) else best)
    return out


# -- coupled two-scale graphs ---------------------------------------------


class CoupledGraph:
    """Two metric graphs glued by cross edges of weight alpha.

    Copy A keeps its vertex indices; copy B is shifted by A's vertex
    count. Shared pairs (a_index, b_index) get one cross edge each. The
    combined graph must come out connected, which MetricGraph checks.
    """

    def __init__(self, graph_a: MetricGraph, graph_b: MetricGraph,
                 shared, alpha, provenance="coupled"):
        alpha_f = Fraction(alpha) if _is_exact_weight(alpha) else float(alpha)
        if alpha_f <= 0:
            raise ValueError("cross-edge weight alpha must be positive, got %s" % alpha)
        shared = list(shared)
        if not shared:
            raise ValueError("coupling needs at least one shared vertex pair")
        self.alpha = alpha_f
        self.n_a = graph_a.vertex_count
        self.n_b = graph_b.vertex_count
        self.shared = shared
        edges = [(u, v, w) for u, v, w in graph_a.edges]
        edges += [(self.n_a + u, self.n_a + v, w) for u, v, w in graph_b.edges]
        for a_idx, b_idx in shared:
            if not (0 <= a_idx < self.n_a and 0 <= b_idx < self.n_b):
                raise ValueError("shared pair (%d, %d) out of range" % (a_idx, b_idx))
            edges.append((a_idx, self.n_a + b_idx, alpha_f))
        self.graph = MetricGraph(self.n_a + self.n_b, edges, provenance=provenance)

    @classmethod
    def from_gasket(cls, cx: PrefractalComplex, n: int, m: int, alpha,
                    harmonic_lengths=None) -> "CoupledGraph":
        """Couple the fine level-m graph (copy A) to the coarse level-n one."""
        if m < n:
            raise ValueError("fine level m=%d must be at least coarse level n=%d" % (m, n))
        g_m = gasket_metric_graph(cx, m, harmonic_lengths=harmonic_lengths)
        g_n = gasket_metric_graph(cx, n, harmonic_lengths=harmonic_lengths)
        shared = [(v, v) for v in range(g_n.vertex_count)]
        cg = cls(g_m, g_n, shared, alpha,
                 provenance="coupled levels %d/%d alpha=%s" % (n, m, alpha))
        cg.coarse_level = n
        cg.fine_level = m
        return cg

    def a_node(self, index: int) -> int:
        if not 0 <= index < self.n_a:
            raise ValueError("copy-A index %d out of range" % index)
        return index

    def b_node(self, index: int) -> int:
        if not 0 <= index < self.n_b:
            raise ValueError("copy-B index %d out of range" % index)
        return self.n_a + index

    def node(self, side: str, index: int) -> int:
        if side == "a":
            return self.a_node(index)
        if side == "b":
            return self.b_node(index)
        raise ValueError("side must be 'a' or 'b', got %r" % side)

    def distance(self, x, y):
        """Distance between (side, index) pairs in the coupled graph."""
        return self.graph.single_source(self.node(*x))[self.node(*y)]

    def nearest_opposite(self):
        """(per-A distance to copy B, per-B distance to copy A), two runs."""
        to_b = self.graph.multi_source(range(self.n_a, self.n_a + self.n_b))
        to_a = self.graph.multi_source(range(self.n_a))
        return to_b[:self.n_a], to_a[self.n_a:]


def tunnel_dirac_distance(cg: CoupledGraph, a_index: int, b_index: int):
    """Distance from a copy-A Dirac to a copy-B Dirac through the coupling.

    Equals sup f(x) - g(y) over pairs with coupled seminorm at most one,
    by the duality between shortest paths and difference constraints.
    """
    return cg.graph.single_source(cg.a_node(a_index))[cg.b_node(b_index)]


# -- extent certification -------------------------------------------------


@dataclass
class ExtentReport:
    n: int
    m: int
    alpha: object
    epsilon: object            # max of the two measured covering terms
    epsilon_sample: object     # on-edge sample term, cover slack included
    epsilon_vertex: object     # vertex-set term plus the 2^-m tail
    epsilon_apriori: object    # 2^-n + 2^-m, what the premises alone give
    samples_per_curve: int
    worst_a_to_b: object
    worst_b_to_a: object
    empirical_max: object
    per_dirac_bound: object    # alpha + epsilon
    bound: object              # 2*alpha + epsilon
    bound_apriori: object      # 2*alpha + epsilon_apriori
    mixture_trials: int
    mixture_max: object
    exact: bool

    def to_row(self) -> tuple:
        """(n, m, alpha, epsilon, bound, empiricalMax) as floats, for tables."""
        return (self.n, self.m, _as_float(self.alpha), _as_float(self.epsilon),
                _as_float(self.bound), _as_float(self.empirical_max))

    def as_floats(self) -> dict:
        out = {}
        for key, val in self.__dict__.items():
            out[key] = _as_float(val) if _is_exact_weight(val) and not isinstance(val, (int, bool)) else val
        return out


def _require_premises(n, m, eps_sample, eps_vertex):
    if eps_sample > Fraction(1, 2**n):
        raise ValueError(
            "sample-covering premise failed at level %d: the on-edge sample sits "
            "%s away from the vertex set, above the required %s"
            % (n, eps_sample, Fraction(1, 2**n)))
    if eps_vertex > Fraction(1, 2**n) + Fraction(1, 2**m):
        raise ValueError(
            "vertex-density premise failed between levels %d and %d: measured "
            "%s, above the required %s"
            % (n, m, eps_vertex, Fraction(1, 2**n) + Fraction(1, 2**m)))


def certify_extent(n: int, m: int, alpha=None, samples_per_curve: int = 3,
                   cx: PrefractalComplex | None = None, mixture_trials: int = 5,
                   seed: int = 0) -> ExtentReport:
    """Certify how far Dirac states on either scale sit from the other.

    Measures the covering radii (sample-to-vertices at level n, vertices
    n-to-m plus the 2^-m tail), takes epsilon as their max, couples the
    graphs with cross weight alpha (default epsilon/4), and reports the
    worst Dirac-to-opposite-copy distance against alpha + epsilon, with
    2*alpha + epsilon as the headline bound. Random small mixtures are
    spot-checked against the same bound, which convexity guarantees.
    """
    if m < n:
        raise ValueError("need m >= n, got n=%d m=%d" % (n, m))
    if cx is None:
        cx = build_gasket(m)
    rep = gh_upper_bound(n, m, samples_per_curve=samples_per_curve, cx=cx)
    eps_sample = Fraction(rep.haus_vertices_to_sample) + Fraction(rep.sampling_slack)
    eps_vertex = Fraction(rep.haus_vn_in_vm) + Fraction(rep.tail)
    _require_premises(n, m, eps_sample, eps_vertex)
    epsilon = max(eps_sample, eps_vertex)
    eps_apriori = Fraction(1, 2**n) + Fraction(1, 2**m)
    if alpha is None:
        alpha = epsilon / 4
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive, got %s" % alpha)

    cg = CoupledGraph.from_gasket(cx, n, m, alpha)
    to_b, to_a = cg.nearest_opposite()
    worst_a = max(Fraction(d) for d in to_b)
    worst_b = max(Fraction(d) for d in to_a)
    empirical = max(worst_a, worst_b)
    per_dirac = alpha + epsilon
    bound = 2 * alpha + epsilon
    if empirical > per_dirac:
        raise RuntimeError("a Dirac state sits %s from the opposite copy, above "
                           "alpha + epsilon = %s" % (empirical, per_dirac))

    rng = random.Random(seed)
    mixture_max = Fraction(0)
    for _ in range(mixture_trials):
        mu = DiscreteMeasure.random_mixture(rng, range(cg.n_a), min(4, cg.n_a))
        support = [cg.a_node(i) for i in mu.support]
        rows = {}
        transfer = {}
        for a_idx in mu.support:
            row = cg.graph.single_source(cg.a_node(a_idx))
            rows[cg.a_node(a_idx)] = row
            b_best = min(range(cg.n_b), key=lambda j: (row[cg.b_node(j)], j))
            transfer[a_idx] = b_best
        targets = sorted(set(cg.b_node(transfer[i]) for i in mu.support))
        for t in targets:
            if t not in rows:
                rows[t] = cg.graph.single_source(t)
        local = sorted(set(support) | set(targets))
        matrix = [[rows[p][q] if p in rows else rows[q][p] for q in local]
                  for p in local]
        space = FiniteMetricSpace(local, matrix, validate=False)
        pos = {p: k for k, p in enumerate(local)}
        mu_l = DiscreteMeasure([(pos[cg.a_node(i)], w) for i, w in mu.weights.items()])
        nu_l = DiscreteMeasure([(pos[cg.b_node(transfer[i])], w)
                                for i, w in mu.weights.items()])
        val = Fraction(kantorovich(space, mu_l, nu_l).value)
        if val > mixture_max:
            mixture_max = val
    if mixture_max > per_dirac:
        raise RuntimeError("mixture spot-check found transport cost %s above "
                           "alpha + epsilon = %s" % (mixture_max, per_dirac))

    return ExtentReport(
        n=n, m=m,
        alpha=_tighten(alpha),
        epsilon=_tighten(epsilon),
        epsilon_sample=_tighten(eps_sample),
        epsilon_vertex=_tighten(eps_vertex),
        epsilon_apriori=_tighten(eps_apriori),
        samples_per_curve=samples_per_curve,
        worst_a_to_b=_tighten(worst_a),
        worst_b_to_a=_tighten(worst_b),
        empirical_max=_tighten(empirical),
        per_dirac_bound=_tighten(per_dirac),
        bound=_tighten(2 * alpha + epsilon),
        bound_apriori=_tighten(2 * alpha + eps_apriori),
        mixture_trials=mixture_trials,
        mixture_max=_tighten(mixture_max),
        exact=True,
    )


# -- distance functions as Lipschitz witnesses ----------------------------


def sampled_metric_space(cx: PrefractalComplex, level: int,
                         samples_per_curve: int = 3, extra_points=()):
    """All level vertices plus on-edge samples, with the exact pair matrix.

    Returns (points, FiniteMetricSpace); points are vertex indices and
    EdgePoints. Quadratic in the point count, meant for small levels.
    """
    g = gasket_metric_graph(cx, level)
    nv = g.vertex_count
    points = list(range(nv))
    for c in cx.curves_at_level(level):
        for t in sample_parameters(samples_per_curve):
            points.append(EdgePoint(c.id, t))
    for p in extra_points:
        if p not in points:
            points.append(p)
    rows = g.internal_rows(range(nv))
    den = g.value_scale()

    def vdist(u, v):
        return Fraction(rows[u][v], den)

    resolved = [_resolve_point(g, p) for p in points]

    def pair(rx, ry):
        if rx[0] == "vertex" and ry[0] == "vertex":
            return vdist(rx[1], ry[1])
        if rx[0] == "vertex":
            rx, ry = ry, rx
        _, cid, u, v, lam, t = rx
        lam = Fraction(lam)
        t = Fraction(t)
        if ry[0] == "vertex":
            w = ry[1]
            return min(t * lam + vdist(u, w), (1 - t) * lam + vdist(v, w))
        _, cid2, u2, v2, lam2, s = ry
        lam2 = Fraction(lam2)
        s = Fraction(s)
        best = min(
            t * lam + vdist(u, u2) + s * lam2,
            t * lam + vdist(u, v2) + (1 - s) * lam2,
            (1 - t) * lam + vdist(v, u2) + s * lam2,
            (1 - t) * lam + vdist(v, v2) + (1 - s) * lam2,
        )
        if cid == cid2:
            best = min(best, abs(t - s) * lam)
        return best

    size = len(points)
    matrix = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        for j in range(i + 1, size):
            d = pair(resolved[i], resolved[j])
            matrix[i][j] = d
            matrix[j][i] = d
    space = FiniteMetricSpace(points, matrix, validate=False)
    return points, space


@dataclass
class IdentityRow:
    x: object
    y: object
    distance: object
    witness_seminorm: object
    attained: bool
    exact: bool


def verify_lipschitz_dirac_identity(n: int, pairs, cx: PrefractalComplex | None = None,
                                    samples_per_curve: int = 3) -> list:
    """Check sup {f(y) - f(x) : Lip(f) <= 1} = d(x, y) with f = d(x, .).

    Each pair (x, y) of vertices or on-edge points yields one row: the
    geodesic distance, the seminorm of the witness on the sampled space
    (never above one), and whether the witness attains the distance.
    """
    if cx is None:
        cx = build_gasket(n)
    points, space = sampled_metric_space(cx, n, samples_per_curve=samples_per_curve,
                                         extra_points=[p for pr in pairs for p in pr])
    index = {p: k for k, p in enumerate(points)}
    rows = []
    for x, y in pairs:
        ix, iy = index[x], index[y]
        f = [space.matrix[ix][k] for k in range(len(points))]
        semi = lipschitz_seminorm(space, f)
        d = space.matrix[ix][iy]
        attained = Fraction(semi) <= 1 and f[iy] - f[ix] == d
        rows.append(IdentityRow(x=x, y=y, distance=_tighten(Fraction(d)),
                                witness_seminorm=semi, attained=attained,
                                exact=True))
    return rows
