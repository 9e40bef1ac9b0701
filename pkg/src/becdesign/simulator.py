"""Finite-length validation: graph sampling, peeling decoding, Monte Carlo.

Graphs come from the configuration model: node counts per degree are the
rounded node-perspective fractions, edge stubs on the variable side are
matched to check-side stubs by a random permutation, and parallel edges
are kept by default.  Two optional conditioning levels exist because small
structures dominate finite-length word-erasure rates:

  "simple"     remove parallel edges by endpoint swaps
  "expurgate"  additionally remove small stopping sets: short cycles in the
               subgraph spanned by degree-2 variables (each is a stopping
               set hit with probability eps^len) plus any other small set
               found by decoding-based screening; both set a word-erasure
               floor that masks the waterfall at practical block lengths

Erasure trials use counter-style per-trial RNG streams keyed by
(master_seed, point index, trial index), so parallel and serial execution
aggregate identically.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .ensemble import Ensemble, DegreeDistribution

TRIAL_CAP = 10_000_000
DEFAULT_GIRTH = 12
NOISE_TAG = 0
GRAPH_TAG = 1


@dataclass(frozen=True)
class TannerGraph:
    """Bipartite multigraph as parallel edge arrays (variable, check)."""

    n: int
    m: int
    edge_var: np.ndarray
    edge_chk: np.ndarray
    seed: object = None

    @property
    def edge_count(self) -> int:
        return len(self.edge_var)

    @property
    def adjacency(self):
        """Per-check lists of variable indices, multiplicity preserved."""
        order = np.argsort(self.edge_chk, kind="stable")
        counts = np.bincount(self.edge_chk, minlength=self.m)
        out = []
        pos = 0
        ev = self.edge_var[order]
        for c in counts:
            out.append(ev[pos:pos + c])
            pos += c
        return out

    def var_degree_histogram(self):
        degs = np.bincount(self.edge_var, minlength=self.n)
        return _hist_of(degs)

    def chk_degree_histogram(self):
        degs = np.bincount(self.edge_chk, minlength=self.m)
        return _hist_of(degs)

    @classmethod
    def from_adjacency(cls, n: int, adj) -> "TannerGraph":
        ev = []
        ec = []
        for c, vs in enumerate(adj):
            for v in vs:
                ev.append(v)
                ec.append(c)
        return cls(n, len(adj), np.asarray(ev, dtype=np.int64),
                   np.asarray(ec, dtype=np.int64))


def _hist_of(degs):
    out = {}
    for d in degs:
        d = int(d)
        out[d] = out.get(d, 0) + 1
    return out


def node_perspective(dist: DegreeDistribution, count: int, target_edges=None):
    """Integer node counts per degree for `count` nodes.

    Node fractions are proportional to coeff_i / i; rounding uses largest
    remainders.  When target_edges is given the histogram is repaired so
    its edge total matches exactly, moving nodes out of the top bucket one
    degree at a time.
    """
    if count < dist.max_degree:
        raise ValueError("count must be at least the maximum degree")
    s = dist.avg_inverse_degree()
    degs = sorted(dist.coeffs)
    raw = np.array([dist.coeffs[d] / d / s * count for d in degs])
    base = np.floor(raw).astype(np.int64)
    short = count - int(base.sum())
    order = np.argsort(-(raw - base))
    base[order[:short]] += 1
    hist = {d: int(c) for d, c in zip(degs, base) if c > 0}
    if target_edges is not None:
        hist = _repair_edges(hist, int(target_edges))
    return hist


def _repair_edges(hist, target_edges):
    hist = dict(hist)
    delta = target_edges - sum(d * c for d, c in hist.items())
    moved = 0
    while delta != 0:
        top = max(hist)
        if delta > 0:
            hist[top] -= 1
            hist[top + 1] = hist.get(top + 1, 0) + 1
            delta -= 1
        else:
            if top - 1 < 1:
                raise RuntimeError("edge repair would create degree-0 nodes")
            hist[top] -= 1
            hist[top - 1] = hist.get(top - 1, 0) + 1
            delta += 1
        if hist[top] == 0:
            del hist[top]
        moved += 1
        if moved > 10 * max(hist):
            raise RuntimeError("edge repair bound exceeded")
    return hist


def sample_graph(
    e: Ensemble,
    n: int,
    seed,
    conditioning: str = "none",
    girth: int = DEFAULT_GIRTH,
) -> TannerGraph:
    """Draw a graph from the ensemble; deterministic for a given seed."""
    if conditioning not in ("none", "simple", "expurgate"):
        raise ValueError(f"unknown conditioning {conditioning!r}")
    rng = np.random.default_rng(seed)
    m = round(n * (1.0 - e.design_rate))
    hv = node_perspective(e.lam, n)
    ev_total = sum(d * c for d, c in hv.items())
    hc = node_perspective(e.rho, m, target_edges=ev_total)

    var_deg = np.repeat(sorted(hv), [hv[d] for d in sorted(hv)])
    chk_deg = np.repeat(sorted(hc), [hc[d] for d in sorted(hc)])
    edge_var = np.repeat(np.arange(n, dtype=np.int64), var_deg)
    edge_chk = rng.permutation(
        np.repeat(np.arange(m, dtype=np.int64), chk_deg)
    )
    if ev_total != len(edge_chk):
        raise RuntimeError("edge-count mismatch after rounding repair")

    if conditioning in ("simple", "expurgate"):
        _make_simple(edge_var, edge_chk, m, rng)
    if conditioning == "expurgate":
        screen_eps = min(0.92 * (1.0 - e.design_rate), 0.95)
        _expurgate_small_sets(edge_var, edge_chk, var_deg, n, m, rng, girth,
                              screen_eps)
    return TannerGraph(n, m, edge_var, edge_chk, seed)


SCREEN_TRIALS = 1500
SCREEN_SIZE_CAP = 12


def _expurgate_small_sets(edge_var, edge_chk, var_deg, n, m, rng, girth,
                          screen_eps, max_rounds=12):
    """Remove small stopping sets by targeted endpoint swaps.

    Each round enforces the degree-2 girth condition, then screens the code
    with random erasures: any decoding residual of at most SCREEN_SIZE_CAP
    variables is a small stopping set (degree-3 variables bridging short
    degree-2 chains are the typical survivors), and one stub of one member
    is reassigned to break it.  Rounds repeat until a screening pass comes
    back clean or the round budget runs out (at short block lengths the
    waterfall itself produces small residuals, so a clean pass may not
    exist; the conditioning is best-effort by design).
    """
    E = len(edge_var)
    _expurgate_deg2_cycles(edge_var, edge_chk, var_deg, m, rng, girth)
    for _ in range(max_rounds):
        found = set()
        for _t in range(SCREEN_TRIALS):
            erased = rng.random(n) < screen_eps
            mask = _peel_mask(edge_var, edge_chk, m, erased)
            r = int(mask.sum())
            if 0 < r <= SCREEN_SIZE_CAP:
                found.add(frozenset(np.nonzero(mask)[0].tolist()))
        if not found:
            return
        for members in found:
            v = min(members)
            stubs = np.nonzero(edge_var == v)[0]
            stub = int(stubs[rng.integers(0, len(stubs))])
            partner = int(rng.integers(0, E))
            edge_chk[stub], edge_chk[partner] = (
                int(edge_chk[partner]), int(edge_chk[stub]))
        # swaps may have reintroduced parallel edges or short cycles
        _make_simple(edge_var, edge_chk, m, rng)
        _expurgate_deg2_cycles(edge_var, edge_chk, var_deg, m, rng, girth)


def _peel_mask(edge_var, edge_chk, m, erased, max_iters=500):
    mask = erased.copy()
    for _ in range(max_iters):
        er_edge = mask[edge_var]
        cnt = np.bincount(edge_chk, weights=er_edge, minlength=m)
        ready = cnt == 1.0
        if not ready.any():
            break
        hit = ready[edge_chk] & er_edge
        fixed = edge_var[hit]
        if fixed.size == 0:
            break
        mask[fixed] = False
    return mask


def _make_simple(edge_var, edge_chk, m, rng, max_sweeps=10_000):
    E = len(edge_var)
    for _ in range(max_sweeps):
        key = edge_var * np.int64(m) + edge_chk
        order = np.argsort(key, kind="stable")
        dup = np.nonzero(np.diff(key[order]) == 0)[0]
        if dup.size == 0:
            return
        bad = order[dup]
        partners = rng.integers(0, E, size=bad.size)
        edge_chk[bad], edge_chk[partners] = (
            edge_chk[partners].copy(), edge_chk[bad].copy())
    raise RuntimeError("could not remove parallel edges")


def _expurgate_deg2_cycles(edge_var, edge_chk, var_deg, m, rng, girth,
                           max_sweeps=400):
    """Swap endpoints until degree-2 variables form no cycle shorter than girth.

    Degree-2 variables act as edges between their two checks; a cycle of k
    of them is a stopping set of size k.  Each sweep scans every such edge,
    looks for an alternative path between its endpoints of at most
    girth - 2 steps (breadth-first, depth limited), and reassigns one stub
    of every offending edge.  Swaps preserve both degree sequences.
    """
    first_stub = np.searchsorted(edge_var, np.nonzero(var_deg == 2)[0])
    if first_stub.size == 0:
        return
    E = len(edge_var)
    depth_cap = girth - 2
    for _ in range(max_sweeps):
        c1 = edge_chk[first_stub]
        c2 = edge_chk[first_stub + 1]
        adj = {}
        for idx in range(len(first_stub)):
            a, b = int(c1[idx]), int(c2[idx])
            adj.setdefault(a, []).append((b, idx))
            adj.setdefault(b, []).append((a, idx))
        # flag at most one edge per offending cycle: flagged edges count as
        # removed for the rest of the sweep, otherwise every edge of a cycle
        # gets swapped and the batch recreates as much as it fixes
        bad = set()
        seen_pairs = {}
        for idx in range(len(first_stub)):
            a, b = int(c1[idx]), int(c2[idx])
            if a == b:
                bad.add(idx)
                continue
            pair = (a, b) if a < b else (b, a)
            if pair in seen_pairs and seen_pairs[pair] not in bad:
                bad.add(idx)
                continue
            seen_pairs[pair] = idx
            if _alt_path_within(adj, a, b, bad, idx, depth_cap):
                bad.add(idx)
        if not bad:
            return
        for idx in bad:
            stub = int(first_stub[idx]) + int(rng.integers(0, 2))
            partner = int(rng.integers(0, E))
            edge_chk[stub], edge_chk[partner] = (
                int(edge_chk[partner]), int(edge_chk[stub]))
        # keep the graph simple as we go so a clean sweep certifies both
        _make_simple(edge_var, edge_chk, m, rng)
    raise RuntimeError("girth conditioning did not converge")


def _alt_path_within(adj, a, b, removed, skip_idx, depth_cap):
    depth = {a: 0}
    q = deque([a])
    while q:
        u = q.popleft()
        du = depth[u]
        if du >= depth_cap:
            continue
        for v, eidx in adj.get(u, ()):
            if eidx == skip_idx or eidx in removed or v in depth:
                continue
            if v == b:
                return True
            depth[v] = du + 1
            q.append(v)
    return False


def peel_decode(g: TannerGraph, erased, max_iters: int = 200):
    """Run the peeling recovery on an erasure pattern.

    A pass resolves, simultaneously, every variable that some check sees as
    its only erased neighbor (a doubly-connected erased variable does not
    count as single).  Passes repeat until a fixed point or the pass cap.
    Returns (recovered mask, residual erasure count).
    """
    mask = np.zeros(g.n, dtype=bool)
    er = np.asarray(erased)
    if er.dtype == bool:
        mask |= er
    else:
        mask[er] = True
    initial = mask.copy()
    for _ in range(max_iters):
        erased_stub = mask[g.edge_var]
        cnt = np.bincount(g.edge_chk, weights=erased_stub, minlength=g.m)
        ready = cnt == 1.0
        if not ready.any():
            break
        hit = ready[g.edge_chk] & erased_stub
        fixed = g.edge_var[hit]
        if fixed.size == 0:
            break
        mask[fixed] = False
    recovered = initial & ~mask
    return recovered, int(mask.sum())


@dataclass(frozen=True)
class SimPoint:
    eps: float
    word_erasure_rate: float
    bit_erasure_rate: float
    trials: int
    word_erasure_events: int
    low_confidence: bool


@dataclass(frozen=True)
class SimCurve:
    points: tuple
    master_seed: int
    n: int
    fixed_graph: bool
    conditioning: str


def monte_carlo(
    e: Ensemble,
    n: int = 5000,
    eps_list=(),
    stop_target: int = 100,
    max_iters: int = 200,
    master_seed: int = 0,
    trial_cap: int = TRIAL_CAP,
    fixed_graph: bool = False,
    conditioning: str = "none",
) -> SimCurve:
    """Estimate word/bit erasure rates per channel parameter.

    Each point accumulates trials until stop_target word erasures or the
    trial cap (points stopped by the cap are flagged low confidence).  By
    default every trial draws a fresh graph; fixed_graph reuses a single
    graph, keyed off the master seed, across the whole curve.
    """
    shared = None
    if fixed_graph:
        shared = sample_graph(e, n, [master_seed, GRAPH_TAG],
                              conditioning=conditioning)
    pts = []
    for pi, eps in enumerate(eps_list):
        trials = 0
        events = 0
        resid_bits = 0
        while events < stop_target and trials < trial_cap:
            if shared is not None:
                g = shared
            else:
                g = sample_graph(e, n, [master_seed, pi, trials, GRAPH_TAG],
                                 conditioning=conditioning)
            noise = np.random.default_rng([master_seed, pi, trials, NOISE_TAG])
            er = noise.random(n) < eps
            _, residual = peel_decode(g, er, max_iters)
            trials += 1
            if residual > 0:
                events += 1
                resid_bits += residual
        pts.append(SimPoint(
            eps=float(eps),
            word_erasure_rate=events / trials,
            bit_erasure_rate=resid_bits / (trials * n),
            trials=trials,
            word_erasure_events=events,
            low_confidence=events < stop_target,
        ))
    return SimCurve(tuple(pts), master_seed, n, fixed_graph, conditioning)
