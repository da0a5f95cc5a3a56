"""Geodesic distances on prefractal metric graphs.

The level-n prefractal is, as a point set, the union of its level-n edges,
so its intrinsic metric restricted to vertices is the shortest-path metric
of the weighted graph on V_n whose edges are the level-n curves. Rational
edge weights are rescaled to a common integer denominator, so shortest
paths, Hausdorff distances and agreement certificates are computed in
exact integer arithmetic; harmonic graphs carry float weights.

Core claims exercised by the test suite:
  * d_n and d_m agree exactly on V_n for m >= n (Euclidean gasket);
  * every point of the level-n prefractal is within 2^-(n+1) of a vertex;
  * the certified two-sided bound for the coarse-to-limit comparison is
    (vertex density at level n) + 0 + (vertex density of V_n in V_m) + 2^-m.
"""

from __future__ import annotations

import heapq
import multiprocessing
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isfinite

from .dyadic import DyadicRational
from .gasket import PrefractalComplex, build_gasket, vertex_count


def _tighten(value: Fraction):
    """Return a DyadicRational when the denominator is a power of two."""
    den = value.denominator
    exp = den.bit_length() - 1
    if den == 1 << exp:
        return DyadicRational(value.numerator, exp)
    return value


def _is_exact_weight(w) -> bool:
    return isinstance(w, (int, DyadicRational, Fraction))


@dataclass(frozen=True)
class EdgePoint:
    """Point on a curve of the graph's own level, at parameter t in [0,1]."""

    curve_id: int
    t: object  # Fraction (exact) or float


class MetricGraph:
    """Undirected weighted graph with exact-or-float geodesic machinery.

    Weights must either all be rational (int, DyadicRational, Fraction),
    giving exact integer shortest paths over a common denominator, or
    floats. Construction verifies positivity and connectivity; instances
    are immutable by convention and safe to share across workers.
    """

    def __init__(self, n_vertices, edges, provenance="generic",
                 edge_ids=None, vertex_keys=None):
        if n_vertices <= 0:
            raise ValueError("graph needs at least one vertex")
        if vertex_keys is not None and len(vertex_keys) != n_vertices:
            raise ValueError("vertex_keys length does not match vertex count")
        if edge_ids is not None and len(edge_ids) != len(edges):
            raise ValueError("edge_ids length does not match edge count")
        self.vertex_count = n_vertices
        self.provenance = provenance
        self.vertex_keys = list(vertex_keys) if vertex_keys is not None else None
        self.edges = []
        exact = all(_is_exact_weight(w) for _, _, w in edges)
        self.exact = exact

        for u, v, w in edges:
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise ValueError("edge (%r,%r) references a vertex out of range" % (u, v))
            if exact:
                wf = Fraction(w)
                if wf <= 0:
                    raise ValueError("edge weights must be positive, got %s" % w)
            else:
                wf = float(w)
                if not (isfinite(wf) and wf > 0):
                    raise ValueError("edge weights must be positive finite, got %r" % w)
            self.edges.append((u, v, wf))

        if exact:
            den = 1
            for _, _, w in self.edges:
                den = den * w.denominator // gcd(den, w.denominator)
            self._den = den
            self._int_weights = [int(w * den) for _, _, w in self.edges]
            weights = self._int_weights
        else:
            self._den = None
            self._int_weights = None
            weights = [w for _, _, w in self.edges]

        self._uniform = exact and len(set(weights)) <= 1
        adj = [[] for _ in range(n_vertices)]
        for (u, v, _), w in zip(self.edges, weights):
            adj[u].append((v, w))
            adj[v].append((u, w))
        self._adj = adj

        # curve registry for EdgePoint lookups
        self._curves = {}
        if edge_ids is not None:
            for cid, (u, v, w) in zip(edge_ids, self.edges):
                self._curves[cid] = (u, v, w)

        self._check_connected()

    def _check_connected(self):
        seen = bytearray(self.vertex_count)
        seen[0] = 1
        stack = [0]
        while stack:
            u = stack.pop()
            for v, _ in self._adj[u]:
                if not seen[v]:
                    seen[v] = 1
                    stack.append(v)
        for v in range(self.vertex_count):
            if not seen[v]:
                raise ValueError(
                    "graph is disconnected: vertex %d is unreachable from vertex 0" % v
                )

    # -- internal single/multi source runs -----------------------------

    def _sssp(self, sources):
        """Internal distances from the nearest of `sources` to every vertex."""
        n = self.vertex_count
        adj = self._adj
        if self._uniform and self._int_weights:
            w0 = self._int_weights[0]
            dist = [-1] * n
            dq = deque()
            for s in sorted(sources):
                if dist[s] != 0:
                    dist[s] = 0
                    dq.append(s)
            while dq:
                u = dq.popleft()
                du = dist[u]
                for v, _ in adj[u]:
                    if dist[v] < 0:
                        dist[v] = du + 1
                        dq.append(v)
            return [d * w0 for d in dist]

        inf = float("inf")
        dist = [inf] * n
        heap = []
        for s in sorted(sources):
            dist[s] = 0
            heap.append((0, s))
        heapq.heapify(heap)
        pop = heapq.heappop
        push = heapq.heappush
        while heap:
            d, u = pop(heap)
            if d > dist[u]:
                continue
            for v, w in adj[u]:
                nd = d + w
                if nd < dist[v]:
                    dist[v] = nd
                    push(heap, (nd, v))
        return dist

    def _value(self, internal):
        if self.exact:
            return _tighten(Fraction(internal, self._den))
        return internal

    def value_scale(self) -> int | None:
        """Common denominator of exact internal distances (None for float)."""
        return self._den

    def single_source(self, source: int) -> list:
        """Distances from one vertex to all vertices, exact or float."""
        return [self._value(d) for d in self._sssp([source])]

    def multi_source(self, sources) -> list:
        """Distance from the nearest of `sources` to every vertex."""
        sources = list(sources)
        if not sources:
            raise ValueError("need at least one source vertex")
        return [self._value(d) for d in self._sssp(sources)]

    def internal_rows(self, sources, workers: int = 1):
        """Internal-unit distance rows per source (ints if exact)."""
        sources = list(sources)
        if workers > 1 and len(sources) > 1:
            ctx = multiprocessing.get_context("fork")
            with ctx.Pool(workers, _pool_init, (self,)) as pool:
                chunk = max(1, len(sources) // (4 * workers))
                return pool.map(_pool_sssp, sources, chunksize=chunk)
        return [self._sssp([s]) for s in sources]


_POOL_GRAPH = None


def _pool_init(graph):
    global _POOL_GRAPH
    _POOL_GRAPH = graph


def _pool_sssp(source):
    return _POOL_GRAPH._sssp([source])


def gasket_metric_graph(cx: PrefractalComplex, level: int | None = None,
                        harmonic_lengths=None) -> MetricGraph:
    """Metric graph of the level-`level` prefractal inside `cx`.

    Uses only the curves of that level: coarser curves are unions of
    level-`level` edges and add nothing to the metric. With
    harmonic_lengths (curve id -> float) the weights are the harmonic
    curve lengths instead of 2^-level.
    """
    if level is None:
        level = cx.max_level
    curves = cx.curves_at_level(level)
    nv = cx.level_vertex_counts[level]
    if harmonic_lengths is None:
        edges = [(c.endpoints[0], c.endpoints[1], c.length) for c in curves]
        tag = "euclidean-gasket level %d" % level
    else:
        edges = [(c.endpoints[0], c.endpoints[1], harmonic_lengths[c.id]) for c in curves]
        tag = "harmonic-gasket level %d" % level
    keys = [cx.vertices[i].key() for i in range(nv)]
    return MetricGraph(nv, edges, provenance=tag,
                       edge_ids=[c.id for c in curves], vertex_keys=keys)


def geodesic_vertex_distances(g: MetricGraph, sources=None, workers: int = 1):
    """Shortest-path distance rows from each source vertex (exact or float)."""
    if sources is None:
        sources = range(g.vertex_count)
    rows = g.internal_rows(sources, workers=workers)
    return [[g._value(d) for d in row] for row in rows]


def _resolve_point(g: MetricGraph, p):
    if isinstance(p, int):
        if not 0 <= p < g.vertex_count:
            raise ValueError("vertex index %d out of range" % p)
        return ("vertex", p)
    if not isinstance(p, EdgePoint):
        raise TypeError("expected vertex index or EdgePoint, got %r" % (p,))
    entry = g._curves.get(p.curve_id)
    if entry is None:
        raise ValueError(
            "curve id %d is not an edge of this graph (%s); points on coarser "
            "curves must be re-expressed at the graph's own level"
            % (p.curve_id, g.provenance)
        )
    t = Fraction(p.t) if g.exact and not isinstance(p.t, float) else float(p.t)
    if not 0 <= t <= 1:
        raise ValueError("edge parameter t=%s outside [0,1]" % p.t)
    u, v, lam = entry
    if t == 0:
        return ("vertex", u)
    if t == 1:
        return ("vertex", v)
    return ("edge", p.curve_id, u, v, lam, t)


def geodesic_point_distance(g: MetricGraph, x, y):
    """Geodesic distance between two vertices or on-edge points.

    Off-vertex points route through their edge endpoints (plus the direct
    arc when both lie on the same curve); this is exact for the prefractal
    because distinct edges meet only at vertices.
    """
    rx = _resolve_point(g, x)
    ry = _resolve_point(g, y)
    if rx[0] == "vertex" and ry[0] == "vertex":
        return g.single_source(rx[1])[ry[1]]

    def ends(r):
        if r[0] == "vertex":
            return ((r[1], 0),)
        _, _, u, v, lam, t = r
        return ((u, t * lam), (v, (1 - t) * lam))

    best = None
    for eu, cu in ends(rx):
        drow = g.single_source(eu)
        for ev, cv in ends(ry):
            cand = cu + drow[ev] + cv
            if best is None or cand < best:
                best = cand
    if rx[0] == "edge" and ry[0] == "edge" and rx[1] == ry[1]:
        direct = abs(rx[5] - ry[5]) * rx[4]
        if direct < best:
            best = direct
    if isinstance(best, Fraction):
        return _tighten(best)
    return best


# -- finite metric spaces ----------------------------------------------


class FiniteMetricSpace:
    """Labelled symmetric distance matrix with validated metric axioms.

    Triangle inequality is checked exhaustively up to 64 points and on a
    seeded sample of triples above that; float matrices get a 1e-9
    additive slack, exact ones none.
    """

    _TRIANGLE_SAMPLES = 200_000

    def __init__(self, labels, matrix, validate=True):
        self.labels = list(labels)
        self.matrix = [list(row) for row in matrix]
        n = len(self.labels)
        if len(self.matrix) != n or any(len(r) != n for r in self.matrix):
            raise ValueError("distance matrix shape does not match labels")
        self.exact = all(_is_exact_weight(e) for row in self.matrix for e in row)
        if validate:
            self._validate()

    def __len__(self):
        return len(self.labels)

    def distance(self, i: int, j: int):
        return self.matrix[i][j]

    def _validate(self):
        n = len(self.labels)
        m = self.matrix
        slack = 0 if self.exact else 1e-9
        for i in range(n):
            if m[i][i] != 0:
                raise ValueError("nonzero diagonal at %d" % i)
            for j in range(i + 1, n):
                if m[i][j] != m[j][i]:
                    raise ValueError("asymmetry at (%d,%d)" % (i, j))
                if not m[i][j] > 0:
                    raise ValueError(
                        "distinct points %d,%d at nonpositive distance %s"
                        % (i, j, m[i][j])
                    )
        if n <= 64:
            triples = (
                (i, j, k)
                for i in range(n)
                for j in range(n)
                for k in range(n)
            )
        else:
            rng = random.Random(20260815)
            triples = (
                (rng.randrange(n), rng.randrange(n), rng.randrange(n))
                for _ in range(self._TRIANGLE_SAMPLES)
            )
        for i, j, k in triples:
            if m[i][j] > m[i][k] + m[k][j] + slack:
                raise ValueError(
                    "triangle inequality fails: d(%d,%d) > d(%d,%d)+d(%d,%d)"
                    % (i, j, i, k, k, j)
                )

    @classmethod
    def from_graph(cls, g: MetricGraph, vertex_ids=None, workers: int = 1,
                   validate=True) -> "FiniteMetricSpace":
        """Distance matrix of a vertex subset (default: all vertices)."""
        ids = list(range(g.vertex_count)) if vertex_ids is None else list(vertex_ids)
        rows = g.internal_rows(ids, workers=workers)
        matrix = [[g._value(rows[i][ids[j]]) for j in range(len(ids))]
                  for i in range(len(ids))]
        return cls(ids, matrix, validate=validate)

    def to_dict(self) -> dict:
        def encode(e):
            if isinstance(e, DyadicRational):
                return list(e.to_pair())
            if isinstance(e, int):
                return [e, 0]
            if isinstance(e, Fraction):
                t = _tighten(e)
                if isinstance(t, DyadicRational):
                    return list(t.to_pair())
                return "%d/%d" % (e.numerator, e.denominator)
            return float(e)

        return {
            "labels": self.labels,
            "d": [[encode(e) for e in row] for row in self.matrix],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FiniteMetricSpace":
        def decode(e):
            if isinstance(e, list):
                return DyadicRational.from_pair(e)
            if isinstance(e, str):
                num, den = e.split("/")
                return Fraction(int(num), int(den))
            return float(e)

        matrix = [[decode(e) for e in row] for row in data["d"]]
        return cls(data["labels"], matrix)


def hausdorff(space: FiniteMetricSpace, a_indices, b_indices):
    """Two-sided Hausdorff distance between index subsets of the space."""
    a = list(a_indices)
    b = list(b_indices)
    if not a or not b:
        raise ValueError("hausdorff requires nonempty subsets")
    m = space.matrix
    d_ab = max(min(m[i][j] for j in b) for i in a)
    d_ba = max(min(m[i][j] for j in a) for i in b)
    return max(d_ab, d_ba)


def hausdorff_vertex_sets(g: MetricGraph, a_indices, b_indices):
    """Hausdorff distance between vertex subsets via two multi-source runs."""
    a = list(a_indices)
    b = list(b_indices)
    if not a or not b:
        raise ValueError("hausdorff requires nonempty subsets")
    from_b = g._sssp(b)
    from_a = g._sssp(a)
    return g._value(max(max(from_b[i] for i in a), max(from_a[j] for j in b)))


# -- agreement certification and the two-sided bound chain ---------------


@dataclass
class AgreementReport:
    n: int
    m: int
    vertices_compared: int
    max_discrepancy: object  # exact rational or float
    worst_pair: tuple[int, int] | None
    exact: bool


def certify_vertex_agreement(n: int, m: int, g_n: MetricGraph,
                             g_m: MetricGraph, workers: int = 1) -> AgreementReport:
    """Max over V_n pairs of |d_n(v,w) - d_m(v,w)|, exact when both graphs are.

    Requires the two graphs to enumerate V_n identically (vertex keys are
    compared when available); for the Euclidean gasket the result must be
    exactly zero.
    """
    if m < n:
        raise ValueError("need m >= n, got n=%d m=%d" % (n, m))
    nv = g_n.vertex_count
    if g_m.vertex_count < nv:
        raise ValueError(
            "vertex-indexing mismatch: finer graph has %d vertices, coarser has %d"
            % (g_m.vertex_count, nv)
        )
    if g_n.vertex_keys is not None and g_m.vertex_keys is not None:
        if g_n.vertex_keys != g_m.vertex_keys[:nv]:
            raise ValueError(
                "vertex-indexing mismatch: shared-prefix vertex keys differ"
            )
    elif g_n.vertex_keys is not None or g_m.vertex_keys is not None:
        raise ValueError("vertex-indexing mismatch: keys available on one graph only")

    sources = range(nv)
    rows_n = g_n.internal_rows(sources, workers=workers)
    rows_m = g_m.internal_rows(sources, workers=workers)

    both_exact = g_n.exact and g_m.exact
    worst = None
    worst_pair = None
    if both_exact:
        dn_den = g_n._den
        dm_den = g_m._den
        for i in range(nv):
            rn, rm = rows_n[i], rows_m[i]
            for j in range(i + 1, nv):
                diff = abs(rn[j] * dm_den - rm[j] * dn_den)
                if worst is None or diff > worst:
                    worst, worst_pair = diff, (i, j)
        value = _tighten(Fraction(worst, dn_den * dm_den)) if worst is not None else 0
    else:
        for i in range(nv):
            rn, rm = rows_n[i], rows_m[i]
            for j in range(i + 1, nv):
                diff = abs(float(rn[j]) / _den_or_one(g_n) - float(rm[j]) / _den_or_one(g_m))
                if worst is None or diff > worst:
                    worst, worst_pair = diff, (i, j)
        value = worst if worst is not None else 0.0
    return AgreementReport(n, m, nv, value, worst_pair, both_exact)


def _den_or_one(g: MetricGraph) -> float:
    return float(g._den) if g.exact else 1.0


def sample_parameters(k: int) -> list[Fraction]:
    """k equispaced interior parameters (2i+1)/(2k); cover radius 1/(2k)."""
    if k < 1:
        raise ValueError("need at least one sample per curve")
    return [Fraction(2 * i + 1, 2 * k) for i in range(k)]


@dataclass
class GHBoundReport:
    n: int
    m: int
    samples_per_curve: int
    haus_vertices_to_sample: object  # Haus_{d_n}(V_n, S_n)
    sampling_slack: object  # max curve length / (2k)
    haus_vn_in_vm: object  # Haus_{d_m}(V_n, V_m)
    tail: object  # 2^-m density of V_m in the limit set
    bound: object  # sum of the three certified terms
    bound_with_slack: object
    paper_bound: object  # 2^(1-n)

    def as_floats(self) -> dict:
        return {f: float(v) if f != "samples_per_curve" else v
                for f, v in self.__dict__.items()}


def gh_upper_bound(n: int, m: int, samples_per_curve: int = 3,
                   cx: PrefractalComplex | None = None) -> GHBoundReport:
    """Certified upper bound for the coarse-vs-limit comparison at level n.

    Chain: (level-n set vs V_n under d_n) + (exact vertex agreement, zero)
    + (V_n vs V_m under d_m, plus the 2^-m density of V_m in the limit).
    The first term is computed on the on-edge sample S_n; its cover-radius
    slack is reported separately, never folded in silently.
    """
    if m < n:
        raise ValueError("need m >= n, got n=%d m=%d" % (n, m))
    if cx is None:
        cx = build_gasket(m)
    if cx.max_level < m:
        raise ValueError("complex built to level %d, need %d" % (cx.max_level, m))

    g_n = gasket_metric_graph(cx, n)
    g_m = gasket_metric_graph(cx, m)
    params = sample_parameters(samples_per_curve)

    # directed distance from each on-edge sample to the nearest vertex of
    # V_n; the V_n -> S_n direction is zero since vertices are in the sample
    nearest_vertex = g_n._sssp(range(g_n.vertex_count))
    term1 = Fraction(0)
    for c in cx.curves_at_level(n):
        u, v = c.endpoints
        lam = Fraction(c.length)
        du = Fraction(nearest_vertex[u], g_n._den)
        dv = Fraction(nearest_vertex[v], g_n._den)
        for t in params:
            reach = min(t * lam + du, (1 - t) * lam + dv)
            if reach > term1:
                term1 = reach
    lam_max = Fraction(1, 2**n)
    slack = lam_max / (2 * samples_per_curve)

    term3 = Fraction(hausdorff_vertex_sets(g_m, range(g_n.vertex_count),
                                           range(g_m.vertex_count)))
    tail = Fraction(1, 2**m)
    bound = term1 + term3 + tail
    return GHBoundReport(
        n=n,
        m=m,
        samples_per_curve=samples_per_curve,
        haus_vertices_to_sample=_tighten(term1),
        sampling_slack=_tighten(slack),
        haus_vn_in_vm=_tighten(term3),
        tail=_tighten(tail),
        bound=_tighten(bound),
        bound_with_slack=_tighten(bound + slack),
        paper_bound=_tighten(Fraction(2, 2**n)),
    )
