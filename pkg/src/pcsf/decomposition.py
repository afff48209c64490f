"""Distributions over forests: dominating convex decompositions by column
generation with exact integer pricing, the explicit replicated-tree
distribution on the layered graph, spanning-tree decompositions of the
base graph, witness-node / chain tracing, and the closed-form bound
curves for the limit arguments.
"""

from __future__ import annotations

import json
from collections import namedtuple
from dataclasses import dataclass, field
from fractions import Fraction

from . import simplex
from .cutlp import check_feasible
from .exact import DEFAULT_IP_EDGE_CAP, ENUM_EDGE_CAP, enumerate_forests, solve_ip
from .graph import (Graph, GraphError, UnionFind, component_labels,
                    enumerate_spanning_trees, is_forest, minimum_spanning_tree)
from .instance import FracSolution, InstanceError, PcsfInstance
from .layered import LayeredConstruction, canonical_point, layered_pairs
from .rational import INF, format_rational, parse_rational, rational_json


class DecompositionError(RuntimeError):
    pass


# --- distributions ------------------------------------------------------

@dataclass
class ForestDistribution:
    """Convex combination of forests: list of (edge-id frozenset, weight)."""

    entries: list

    def __post_init__(self):
        self.entries = _merge_entries(self.entries)

    def validate(self, graph: Graph):
        total = Fraction(0)
        for forest, weight in self.entries:
            if weight < 0:
                raise DecompositionError("negative weight in distribution")
            if not is_forest(graph, forest):
                raise DecompositionError("support set contains a cycle")
            total += weight
        if total != 1:
            raise DecompositionError(f"weights sum to {total}, not 1")

    def support(self):
        return [forest for forest, _ in self.entries]

    def edge_marginals(self):
        out = {}
        for forest, weight in self.entries:
            for e in forest:
                out[e] = out.get(e, Fraction(0)) + weight
        return out

    def pair_probs(self, graph: Graph, pairs):
        out = {i: Fraction(0) for i in range(len(pairs))}
        for forest, weight in self.entries:
            labels = component_labels(graph, forest)
            for i, (s, t) in enumerate(pairs):
                if labels[s] == labels[t]:
                    out[i] += weight
        return out


def _merge_entries(entries):
    merged = {}
    for forest, weight in entries:
        forest = frozenset(forest)
        weight = Fraction(weight)
        if weight == 0:
            continue
        merged[forest] = merged.get(forest, Fraction(0)) + weight
    return sorted(merged.items(), key=lambda fw: sorted(fw[0]))


def write_distribution(dist: ForestDistribution, path):
    with open(path, "w") as fh:
        for forest, weight in dist.entries:
            fh.write(f"forest {format_rational(weight)}\n")
            for e in sorted(forest):
                fh.write(f"e {e}\n")


def read_distribution(path) -> ForestDistribution:
    entries = []
    current = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "forest" and len(parts) == 2:
                if current is not None:
                    entries.append(current)
                current = (set(), parse_rational(parts[1]))
            elif parts[0] == "e" and len(parts) == 2 and current is not None:
                current[0].add(int(parts[1]))
            else:
                raise InstanceError(f"{path}:{lineno}: malformed line: {line!r}")
    if current is not None:
        entries.append(current)
    return ForestDistribution([(frozenset(f), w) for f, w in entries])


@dataclass
class DualWitness:
    """Optimal dual of the decomposition LP: prices (d, rho) and level gamma.

    Every integral solution of the priced instance costs at least
    ``gamma_dual``; ``value`` is the primal optimum it certifies.
    """

    d: dict
    rho: dict
    gamma_dual: Fraction
    value: Fraction
    inst: PcsfInstance
    point: FracSolution
    zero_edges: frozenset      # edges with x* = 0, excluded from pricing
    forced_pairs: frozenset    # pairs with target z = 0, priced as must-connect


@dataclass
class DistributionReport:
    mode: str
    scale: Fraction
    marginals: dict
    pair_probs: dict
    passes: bool
    edge_failures: list = field(default_factory=list)
    pair_failures: list = field(default_factory=list)
    worst_edge_ratio: Fraction = None
    worst_pair_slack: Fraction = None

    def to_json(self):
        return {
            "mode": self.mode,
            "scale": rational_json(self.scale),
            "passes": self.passes,
            "marginals": {str(e): rational_json(v) for e, v in sorted(self.marginals.items())},
            "pair_probs": {str(i): rational_json(v) for i, v in sorted(self.pair_probs.items())},
            "edge_failures": [[e, format_rational(have), format_rational(want)]
                              for e, have, want in self.edge_failures],
            "pair_failures": [[i, format_rational(have), format_rational(want)]
                              for i, have, want in self.pair_failures],
        }


def verify_distribution(subject, dist: ForestDistribution, params, mode: str,
                        point: FracSolution = None) -> DistributionReport:
    """Check a distribution against the dominance targets.

    gap mode (scale alpha): Pr[e in F] <= alpha*x_e and
    Pr[u ~ v] >= 1 - alpha*z_uv.  lmp mode (scale beta):
    Pr[e in F] <= beta*x_e and Pr[u ~ v] >= 1 - z_uv.
    """
    if isinstance(subject, LayeredConstruction):
        graph = subject.graph
        pairs = layered_pairs(subject)
        if point is None:
            point = canonical_point(subject, mode)
    else:
        graph = subject.graph
        pairs = subject.pairs
        if point is None:
            raise InstanceError("verify_distribution on an instance needs a point")
    if mode == "gap":
        scale = Fraction(params.alpha)
    elif mode == "lmp":
        scale = Fraction(params.beta)
    else:
        raise InstanceError(f"unknown mode {mode!r}")
    dist.validate(graph)

    marginals = dist.edge_marginals()
    pair_probs = dist.pair_probs(graph, pairs)

    edge_failures = []
    worst_edge_ratio = Fraction(0)
    for e in range(graph.num_edges):
        have = marginals.get(e, Fraction(0))
        want = scale * point.x.get(e, Fraction(0))
        if want > 0:
            ratio = have / want
            if ratio > worst_edge_ratio:
                worst_edge_ratio = ratio
        if have > want:
            edge_failures.append((e, have, want))

    pair_failures = []
    worst_pair_slack = None
    for i in range(len(pairs)):
        zi = point.z.get(i, Fraction(0))
        want = 1 - (scale * zi if mode == "gap" else zi)
        have = pair_probs[i]
        slack = have - want
        if worst_pair_slack is None or slack < worst_pair_slack:
            worst_pair_slack = slack
        if have < want:
            pair_failures.append((i, have, want))

    return DistributionReport(mode=mode, scale=scale, marginals=marginals,
                              pair_probs=pair_probs,
                              passes=not edge_failures and not pair_failures,
                              edge_failures=edge_failures, pair_failures=pair_failures,
                              worst_edge_ratio=worst_edge_ratio,
                              worst_pair_slack=worst_pair_slack)


# --- spanning-tree decomposition of the base graph ----------------------

def spanning_tree_decomposition(P: Graph) -> ForestDistribution:
    """Distribution over spanning trees with every marginal <= 2(n-1)/(d n).

    For a d-regular P the uniform target vector sums to n-1, so it lies in
    the spanning tree polytope; the uniform distribution is used when it
    already meets the target, otherwise the covering LP is solved by
    column generation with minimum-spanning-tree pricing.
    """
    n = P.num_nodes
    degree = P.degree(0)
    if any(P.degree(v) != degree for v in range(n)):
        raise GraphError("spanning_tree_decomposition needs a regular graph")
    target = Fraction(2 * (n - 1), degree * n)

    if P.num_edges <= 20:
        trees = enumerate_spanning_trees(P)
        count = {}
        for t in trees:
            for e in t:
                count[e] = count.get(e, 0) + 1
        if all(Fraction(count.get(e, 0), len(trees)) <= target
               for e in range(P.num_edges)):
            w = Fraction(1, len(trees))
            return ForestDistribution([(frozenset(t), w) for t in trees])

    # column generation on: max sum(lambda) s.t. marginal_e <= target
    columns = [frozenset(minimum_spanning_tree(P, {e: Fraction(1) for e in range(P.num_edges)}))]
    while True:
        rows = []
        for e in range(P.num_edges):
            rows.append({q: Fraction(1) for q, t in enumerate(columns) if e in t})
        senses = ["<="] * P.num_edges
        rhs = [target] * P.num_edges
        sol = simplex.solve_max(len(columns), [Fraction(1)] * len(columns),
                                rows, senses, rhs)
        prices = {e: sol.duals[e] for e in range(P.num_edges)}
        tree = frozenset(minimum_spanning_tree(P, prices))
        priced = sum(prices[e] for e in tree)
        if priced >= 1:
            if sol.objective != 1:
                raise GraphError("target marginals are not achievable")
            return ForestDistribution([(t, w) for t, w in zip(columns, sol.x) if w > 0])
        columns.append(tree)


# --- explicit distribution on the layered graph -------------------------

def explicit_gap_distribution(lc: LayeredConstruction, alpha) -> ForestDistribution:
    """Replicated subdivided base trees (weight (3-alpha)/T each) plus one
    fixed spanning tree of the whole graph (weight alpha-2).

    The "arbitrary" global spanning tree is pinned to the minimum spanning
    tree under unit weights with id tie-breaks, for reproducibility.
    """
    alpha = Fraction(alpha)
    if not 2 <= alpha <= 3:
        raise InstanceError("alpha must lie in [2, 3]")
    if lc.l != 3:
        raise InstanceError("explicit distribution requires a 3-regular base")
    trees = enumerate_spanning_trees(lc.base)
    entries = []
    tree_weight = (3 - alpha) / len(trees)
    for tree in trees:
        forest = set()
        for copy in lc.copies:
            for be in tree:
                forest.update(copy.groups[be].edges)
        entries.append((frozenset(forest), tree_weight))
    gtree = minimum_spanning_tree(lc.graph, {e: Fraction(1) for e in range(lc.graph.num_edges)})
    entries.append((frozenset(gtree), alpha - 2))
    return ForestDistribution(entries)


# --- column generation: dominating convex decompositions ----------------

Column = namedtuple("Column", "forest miss")  # global edge ids, missed pair ids


def _support_setup(inst: PcsfInstance, x_star):
    eplus = [e for e in range(inst.graph.num_edges) if x_star.get(e, Fraction(0)) > 0]
    sub = Graph(inst.graph.num_nodes, [inst.graph.edges[e] for e in eplus])
    return eplus, sub


def _miss_set(graph: Graph, forest, pairs):
    labels = component_labels(graph, forest)
    return frozenset(i for i, (s, t) in enumerate(pairs) if labels[s] != labels[t])


def _connect_all_column(inst: PcsfInstance, sub: Graph, eplus):
    uf = UnionFind(sub.num_nodes)
    chosen = set()
    for j in range(sub.num_edges):
        u, v = sub.edges[j]
        if uf.union(u, v):
            chosen.add(eplus[j])
    return Column(frozenset(chosen), _miss_set(inst.graph, chosen, inst.pairs))


def _greedy_price(inst: PcsfInstance, sub: Graph, eplus, d, rho, forced):
    """Cheap pricing heuristic: min-weight spanning forest of the support,
    then drop paid edges whenever the separated penalties are cheaper."""
    weights = {j: d.get(eplus[j], Fraction(0)) for j in range(sub.num_edges)}
    order = sorted(range(sub.num_edges), key=lambda j: (weights[j], j))
    uf = UnionFind(sub.num_nodes)
    chosen = set()
    for j in order:
        u, v = sub.edges[j]
        if uf.union(u, v):
            chosen.add(j)

    def crossing_pairs(kept, removed):
        labels = component_labels(sub, kept - {removed})
        return [i for i, (s, t) in enumerate(inst.pairs) if labels[s] != labels[t]]

    base_miss = set(crossing_pairs(chosen, None))
    while True:
        best_gain, best_j, best_miss = Fraction(0), None, None
        for j in sorted(chosen, key=lambda j: (-weights[j], j)):
            if weights[j] == 0:
                continue
            miss = crossing_pairs(chosen, j)
            if any(i in forced for i in miss):
                continue
            gain = weights[j] - sum(rho.get(i, Fraction(0))
                                    for i in miss if i not in base_miss)
            if gain > best_gain:
                best_gain, best_j, best_miss = gain, j, set(miss)
        if best_j is None:
            break
        chosen.discard(best_j)
        base_miss = best_miss
    value = (sum(weights[j] for j in chosen)
             + sum(rho.get(i, Fraction(0)) for i in base_miss))
    forest = frozenset(eplus[j] for j in chosen)
    return value, Column(forest, frozenset(base_miss))


def _price(inst: PcsfInstance, sub: Graph, eplus, d, rho, forced, pool, edge_cap,
           cutoff=None):
    # a heuristic column priced below the cutoff is enough to keep the
    # column generation moving; the exact solve only certifies termination
    if cutoff is not None:
        value, col = _greedy_price(inst, sub, eplus, d, rho, forced)
        if value < cutoff:
            return value, col
    costs = {j: d.get(eplus[j], Fraction(0)) for j in range(sub.num_edges)}
    pens = {i: (INF if i in forced else rho.get(i, Fraction(0)))
            for i in range(inst.num_pairs)}
    priced = PcsfInstance(sub, costs, inst.pairs, pens)
    # the cutoff makes pricing a decision: exact below it, else terminate
    sol = solve_ip(priced, edge_cap=edge_cap, pool=pool, cutoff=cutoff)
    forest = frozenset(eplus[j] for j in sol.forest)
    return sol.objective, Column(forest, frozenset(sol.disconnected))


def _master_min(columns, eplus, x_star, zrows, scale_z):
    """min scale s.t. the columns' mixture is dominated; returns duals too.

    scale_z=True: both edge and pair rows carry the scale variable (the
    alpha LP); scale_z=False: pair rows have fixed right-hand side z*
    (the beta LP).
    """
    ncols = len(columns)
    sv = ncols
    rows, senses, rhs = [], [], []
    for e in eplus:
        row = {q: Fraction(1) for q, col in enumerate(columns) if e in col.forest}
        row[sv] = -x_star[e]
        rows.append(row)
        senses.append("<=")
        rhs.append(Fraction(0))
    for i, zi in zrows:
        row = {q: Fraction(1) for q, col in enumerate(columns) if i in col.miss}
        if scale_z:
            row[sv] = -zi
            rows.append(row)
            rhs.append(Fraction(0))
        else:
            rows.append(row)
            rhs.append(zi)
        senses.append("<=")
    rows.append({q: Fraction(1) for q in range(ncols)})
    senses.append("=")
    rhs.append(Fraction(1))

    sol = simplex.solve_min(ncols + 1, {sv: Fraction(1)}, rows, senses, rhs)
    d = {e: -sol.duals[r] for r, e in enumerate(eplus)}
    rho = {i: -sol.duals[len(eplus) + r] for r, (i, _) in enumerate(zrows)}
    gamma = sol.duals[-1]
    return sol, d, rho, gamma


def _decompose_min(inst: PcsfInstance, point: FracSolution, scale_z: bool,
                   method: str, edge_cap: int):
    violated = check_feasible(inst, point)
    if violated is not None:
        raise InstanceError(f"point is infeasible: {violated}")
    x_star = {e: point.x.get(e, Fraction(0)) for e in range(inst.graph.num_edges)}
    z_star = {i: point.z.get(i, Fraction(0)) for i in range(inst.num_pairs)}
    eplus, sub = _support_setup(inst, x_star)
    forced = frozenset(i for i, z in z_star.items() if z == 0)
    zrows = [(i, z) for i, z in sorted(z_star.items()) if z > 0]

    start = _connect_all_column(inst, sub, eplus)
    if start.miss & forced:
        raise DecompositionError(
            f"pairs {sorted(start.miss & forced)} cannot be connected within the support of x")
    if not scale_z:
        bad = [i for i in start.miss if z_star[i] < 1]
        if bad:
            raise DecompositionError(
                f"z cannot dominate any mixture: pairs {bad} unconnectable but z* < 1")

    if method == "enumerate":
        columns = []
        for forest in enumerate_forests(sub, edge_cap=min(edge_cap, ENUM_EDGE_CAP)):
            chosen = frozenset(eplus[j] for j in forest)
            miss = _miss_set(inst.graph, chosen, inst.pairs)
            if miss & forced:
                continue
            columns.append(Column(chosen, miss))
        sol, d, rho, gamma = _master_min(columns, eplus, x_star, zrows, scale_z)
    elif method == "cg":
        columns = [start]
        pool = []
        while True:
            sol, d, rho, gamma = _master_min(columns, eplus, x_star, zrows, scale_z)
            priced, col = _price(inst, sub, eplus, d, rho, forced, pool, edge_cap,
                                 cutoff=gamma)
            if priced >= gamma:
                break
            columns.append(col)
    else:
        raise InstanceError(f"unknown method {method!r}")

    dist = ForestDistribution([(col.forest, w) for col, w in zip(columns, sol.x) if w > 0])
    witness = DualWitness(d=d, rho=rho, gamma_dual=gamma, value=sol.objective,
                          inst=inst, point=point,
                          zero_edges=frozenset(e for e in range(inst.graph.num_edges)
                                               if e not in set(eplus)),
                          forced_pairs=forced)
    return sol.objective, dist, witness


def min_alpha(inst: PcsfInstance, point: FracSolution, method: str = "cg",
              edge_cap: int = DEFAULT_IP_EDGE_CAP):
    """Smallest alpha with a convex combination of integral solutions
    dominated coordinatewise by alpha*(x, z)."""
    return _decompose_min(inst, point, scale_z=True, method=method, edge_cap=edge_cap)


def min_beta(inst: PcsfInstance, point: FracSolution, method: str = "cg",
             edge_cap: int = DEFAULT_IP_EDGE_CAP):
    """Smallest beta with a mixture dominated by (beta*x, z): only the edge
    side is scaled, the z side must fit under z* as-is."""
    return _decompose_min(inst, point, scale_z=False, method=method, edge_cap=edge_cap)


@dataclass
class FeasibilityResult:
    value: Fraction
    dist: ForestDistribution | None
    witness: DualWitness | None


def _feasibility(inst: PcsfInstance, x_target, z_target, point,
                 edge_cap: int = DEFAULT_IP_EDGE_CAP) -> FeasibilityResult:
    """Packing LP: max total weight of a sub-convex mixture dominated by
    (x_target, z_target); value 1 means a full distribution exists and the
    optimal dual is a certificate otherwise."""
    eplus, sub = _support_setup(inst, x_target)
    forced = frozenset(i for i in range(inst.num_pairs)
                       if z_target.get(i, Fraction(0)) == 0)
    zrows = [(i, z_target[i]) for i in sorted(z_target)
             if 0 < z_target[i] < 1]

    start = _connect_all_column(inst, sub, eplus)
    if start.miss & forced:
        raise DecompositionError(
            f"pairs {sorted(start.miss & forced)} cannot be connected within the support of x")
    columns = [start]
    pool = []
    while True:
        ncols = len(columns)
        rows, senses, rhs = [], [], []
        for e in eplus:
            rows.append({q: Fraction(1) for q, col in enumerate(columns) if e in col.forest})
            senses.append("<=")
            rhs.append(x_target[e])
        for i, zi in zrows:
            rows.append({q: Fraction(1) for q, col in enumerate(columns) if i in col.miss})
            senses.append("<=")
            rhs.append(zi)
        rows.append({q: Fraction(1) for q in range(ncols)})
        senses.append("<=")
        rhs.append(Fraction(1))
        sol = simplex.solve_max(ncols, [Fraction(1)] * ncols, rows, senses, rhs)
        d = {e: sol.duals[r] for r, e in enumerate(eplus)}
        rho = {i: sol.duals[len(eplus) + r] for r, (i, _) in enumerate(zrows)}
        gamma = sol.duals[-1]
        priced, col = _price(inst, sub, eplus, d, rho, forced, pool, edge_cap,
                             cutoff=1 - gamma)
        if priced >= 1 - gamma:
            break
        columns.append(col)

    witness = DualWitness(d=d, rho=rho, gamma_dual=gamma, value=sol.objective,
                          inst=inst, point=point,
                          zero_edges=frozenset(e for e in range(inst.graph.num_edges)
                                               if e not in set(eplus)),
                          forced_pairs=forced)
    if sol.objective == 1:
        dist = ForestDistribution([(col.forest, w) for col, w in zip(columns, sol.x) if w > 0])
        return FeasibilityResult(value=sol.objective, dist=dist, witness=witness)
    return FeasibilityResult(value=sol.objective, dist=None, witness=witness)


def feasibility_at_beta(inst: PcsfInstance, point: FracSolution, beta,
                        edge_cap: int = DEFAULT_IP_EDGE_CAP) -> FeasibilityResult:
    """Does a mixture dominated by (beta*x, z) exist?  Value 1 iff yes."""
    beta = Fraction(beta)
    if beta < 0:
        raise InstanceError("beta must be nonnegative")
    x_target = {e: beta * point.x.get(e, Fraction(0))
                for e in range(inst.graph.num_edges)}
    z_target = {i: point.z.get(i, Fraction(0)) for i in range(inst.num_pairs)}
    return _feasibility(inst, x_target, z_target, point, edge_cap=edge_cap)


def witness_costs_from_dual(w: DualWitness, mode: str = "gap", beta=None) -> PcsfInstance:
    """Instance realizing the certified bound: costs d, penalties rho
    (divided by beta in lmp mode).  Every integral solution then costs at
    least gamma_dual while the fractional point costs at most 1."""
    if all(v == 0 for v in w.d.values()) and all(v == 0 for v in w.rho.values()):
        raise InstanceError("degenerate all-zero dual; no witness instance")
    costs = {e: w.d.get(e, Fraction(0)) for e in range(w.inst.graph.num_edges)}
    floor = max(w.gamma_dual, Fraction(0))
    for e in w.zero_edges:
        # x* = 0 edges were excluded from pricing; price them at the dual
        # level so no integral solution can undercut gamma through them
        costs[e] = floor
    if mode == "gap":
        pens = {i: (INF if i in w.forced_pairs else w.rho.get(i, Fraction(0)))
                for i in range(w.inst.num_pairs)}
    elif mode == "lmp":
        if beta is None:
            raise InstanceError("lmp mode needs beta")
        beta = Fraction(beta)
        pens = {i: (INF if i in w.forced_pairs else w.rho.get(i, Fraction(0)) / beta)
                for i in range(w.inst.num_pairs)}
    else:
        raise InstanceError(f"unknown mode {mode!r}")
    meta = {"witness_mode": mode, "gamma": format_rational(w.gamma_dual)}
    return PcsfInstance(w.inst.graph, costs, w.inst.pairs, pens,
                        node_names=w.inst.node_names, meta=meta)


# --- support trimming and the witness-node / chain machinery ------------

def trim_support(lc: LayeredConstruction, dist: ForestDistribution) -> ForestDistribution:
    """Within each copy, delete forest edges lying in components that touch
    no branch node of that copy (they can never help connectivity)."""
    copy_edges = {copy.id: set(copy.edge_ids) for copy in lc.copies}
    entries = []
    for forest, weight in dist.entries:
        kept = set(forest)
        for copy in lc.copies:
            restricted = kept & copy_edges[copy.id]
            if not restricted:
                continue
            uf = UnionFind(lc.graph.num_nodes)
            for e in restricted:
                u, v = lc.graph.edges[e]
                uf.union(u, v)
            good = {uf.find(b) for b in copy.branch_nodes}
            for e in restricted:
                if uf.find(lc.graph.edges[e][0]) not in good:
                    kept.discard(e)
        entries.append((frozenset(kept), weight))
    return ForestDistribution(entries)


def _restricted_degree(graph: Graph, restricted, v):
    return sum(1 for eid, _ in graph.adj[v] if eid in restricted)


def find_witness_node(lc: LayeredConstruction, dist: ForestDistribution, copy,
                      event=None):
    """Degree-2 node of ``copy`` that is rarely a leaf and whose path group
    is often fully present, conditioned on ``event`` (predicate on the
    support forest).  Returns (node, stats)."""
    copy_edges = set(copy.edge_ids)
    cond = [(forest, weight) for forest, weight in dist.entries
            if event is None or event(forest)]
    wsum = sum((w for _, w in cond), Fraction(0))
    if wsum == 0:
        raise DecompositionError("conditioning event has probability 0")

    for forest, _ in cond:
        restricted = forest & copy_edges
        uf = UnionFind(lc.graph.num_nodes)
        for e in restricted:
            u, v = lc.graph.edges[e]
            uf.union(u, v)
        if len({uf.find(b) for b in copy.branch_nodes}) != 1:
            raise DecompositionError(
                f"a support forest does not induce a tree on copy {copy.id}; "
                "trim the support first")

    best_grp, best_contain = None, None
    for grp in copy.groups:
        ge = frozenset(grp.edges)
        contain = sum((w for forest, w in cond if ge <= forest), Fraction(0)) / wsum
        if best_contain is None or contain > best_contain:
            best_grp, best_contain = grp, contain

    best_node, best_leaf = None, None
    for v in best_grp.nodes:
        leaf = sum((w for forest, w in cond
                    if _restricted_degree(lc.graph, forest & copy_edges, v) == 1),
                   Fraction(0)) / wsum
        if best_leaf is None or leaf < best_leaf:
            best_node, best_leaf = v, leaf

    m = lc.m
    stats = {
        "group": best_grp.base_edge,
        "containment": best_contain,
        "containment_threshold": Fraction(2 * (m - 1), 3 * m),
        "leaf_prob": best_leaf,
        "leaf_threshold": Fraction(2, m),
        "ok": (best_contain >= Fraction(2 * (m - 1), 3 * m)
               and best_leaf <= Fraction(2, m)),
    }
    return best_node, stats


def chain_trace(lc: LayeredConstruction, dist: ForestDistribution, alpha):
    """Descend the recursion: witness node per level, conditioning each step
    on the previous node being disconnected from the root.

    Step 1 is checked against p_1 <= alpha/3 + 2/m; every later step
    against p_{j+1} <= alpha/3 + 2/m - 2/3 + (2/3) p_j + 2/(3m).  Failures
    are reported in the step records, not raised: a distribution violating
    the marginal premises is a counterexample, not an error.
    """
    alpha = Fraction(alpha)
    dist = trim_support(lc, dist)
    labels = {forest: component_labels(lc.graph, forest) for forest, _ in dist.entries}
    r0 = lc.r0

    def connect_prob(v):
        return sum((w for forest, w in dist.entries if labels[forest][v] == labels[forest][r0]),
                   Fraction(0))

    m = lc.m
    steps = []
    copy = lc.copies[0]
    event = None
    prev_p = None
    while True:
        node, stats = find_witness_node(lc, dist, copy, event)
        p = connect_prob(node)
        if prev_p is None:
            bound = alpha / 3 + Fraction(2, m)
        else:
            bound = (alpha / 3 + Fraction(2, m) - Fraction(2, 3)
                     + Fraction(2, 3) * prev_p + Fraction(2, 3 * m))
        steps.append({"node": node, "prob": p, "bound": bound,
                      "ok": p <= bound, "stats": stats})
        nxt = lc.copy_of_root(node)
        if nxt is None:
            break
        miss = sum((w for forest, w in dist.entries
                    if labels[forest][node] != labels[forest][r0]), Fraction(0))
        if miss == 0:
            break
        event = (lambda forest, v=node: labels[forest][v] != labels[forest][r0])
        copy, prev_p = nxt, p
    return steps


# --- closed-form bound curves -------------------------------------------

def bound_alpha(n: int, k: int) -> Fraction:
    """Exact solution of 1 - a/3 = ((a-2)/3 + 8/(3n))*s + t with
    s = sum_{i<=k} (2/3)^i and t = (2/3)^{k+1}: the finite-depth lower
    bound whose n,k limit is 9/4."""
    if n < 1 or k < 0:
        raise InstanceError("bound_alpha needs n >= 1, k >= 0")
    r = Fraction(2, 3)
    s = sum((r ** i for i in range(k + 1)), Fraction(0))
    t = r ** (k + 1)
    return (3 - 3 * t + 2 * s - Fraction(8) * s / n) / (s + 1)


def bound_beta(l: int, n: int = None, k: int = None) -> Fraction:
    """Finite-depth lower bound on the Lagrangean-multiplier-preserving
    scale, asymptotically 4 - 4/l.

    Derived from the same recursion as bound_alpha with ratio 2/3 replaced
    by 2/l and the per-step additive terms a/3 -> b/l, 2/m + 2/(3m) ->
    2(l+1)/(l n): solving 2/l = ((b-2)/l + 2(l+1)/(l n))*s + t with
    s = sum_{i<=k} (2/l)^i and t = (2/l)^{k+1} gives
    b = 2 + l*(2/l - t)/s - 2(l+1)/n.  As n,k grow this tends to
    2 + 2(l-2)/l = 4 - 4/l.
    """
    if l < 3:
        raise InstanceError("bound_beta needs l >= 3")
    if n is None or k is None:
        return 4 - Fraction(4, l)
    if n < 1 or k < 0:
        raise InstanceError("bound_beta needs n >= 1, k >= 0")
    r = Fraction(2, l)
    s = sum((r ** i for i in range(k + 1)), Fraction(0))
    t = r ** (k + 1)
    return 2 + l * (Fraction(2, l) - t) / s - Fraction(2 * (l + 1)) / n


# --- two-value LMP mixture ----------------------------------------------

def two_value_lmp_distribution(inst: PcsfInstance, point: FracSolution,
                               edge_cap: int = DEFAULT_IP_EDGE_CAP):
    """For z two-valued in {0, gamma}: mix, with weight gamma, a
    distribution dominated by 2x that connects the z = 0 pairs and, with
    weight 1-gamma, one dominated by 2x/(1-gamma) that connects all pairs.
    The mixture is dominated by ((2+2*gamma)*x, z); returns (dist, 2+2*gamma).
    """
    values = sorted({v for v in point.z.values() if v != 0})
    if len(values) != 1:
        raise InstanceError("point is not two-valued: z must take values {0, gamma}")
    gamma = values[0]
    if not 0 < gamma < 1:
        raise InstanceError("two-value mixture needs 0 < gamma < 1")

    x = {e: point.x.get(e, Fraction(0)) for e in range(inst.graph.num_edges)}
    z_zero = {i: (Fraction(0) if point.z.get(i, Fraction(0)) == 0 else Fraction(1))
              for i in range(inst.num_pairs)}
    pay = _feasibility(inst, {e: 2 * v for e, v in x.items()}, z_zero, point,
                       edge_cap=edge_cap)
    if pay.dist is None:
        raise DecompositionError(
            f"no distribution under 2x connects the z=0 pairs (value {pay.value})")
    connect = _feasibility(inst, {e: 2 * v / (1 - gamma) for e, v in x.items()},
                           {i: Fraction(0) for i in range(inst.num_pairs)}, point,
                           edge_cap=edge_cap)
    if connect.dist is None:
        raise DecompositionError(
            f"no distribution under 2x/(1-gamma) connects all pairs (value {connect.value})")

    entries = [(forest, gamma * w) for forest, w in pay.dist.entries]
    entries += [(forest, (1 - gamma) * w) for forest, w in connect.dist.entries]
    return ForestDistribution(entries), 2 + 2 * gamma
