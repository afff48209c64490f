"""Exact PCSF optimum at desk scale: branch and bound plus an enumeration
oracle.  Used directly for gap measurement and as the pricing engine of
the decomposition module."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cutlp import LpInfeasibleError, solve_cut_lp
from .graph import UnionFind, component_labels
from .instance import InstanceError, PcsfInstance
from .rounding import IntegralSolution, forest_solution

DEFAULT_IP_EDGE_CAP = 40
ENUM_EDGE_CAP = 20


class ScaleCapError(RuntimeError):
    pass


def _prune_forest(inst: PcsfInstance, edges) -> set:
    """Drop cycle edges greedily (never beneficial with nonnegative costs)."""
    uf = UnionFind(inst.graph.num_nodes)
    forest = set()
    for eid in sorted(edges):
        u, v = inst.graph.edges[eid]
        if uf.union(u, v):
            forest.add(eid)
    return forest


def solve_ip(inst: PcsfInstance, edge_cap: int = DEFAULT_IP_EDGE_CAP,
             pool=None, cutoff=None) -> IntegralSolution:
    """Exact optimum by branch and bound with cut-LP bounds.

    Each node's bound comes from the cut LP with forced-in edges free and
    forced-out edges deleted; branching is on the fractional edge closest
    to 1/2 (ties by smallest id).

    With ``cutoff``, subtrees whose bound reaches the cutoff are pruned:
    the result is still the exact optimum whenever its objective lies
    below the cutoff, which is all a pricing caller needs.
    """
    if inst.graph.num_edges > edge_cap:
        raise ScaleCapError(f"solve_ip cap exceeded: {inst.graph.num_edges} > {edge_cap}")
    reach = component_labels(inst.graph, set(range(inst.graph.num_edges)))
    for i, (s, t) in enumerate(inst.pairs):
        if inst.is_infinite(i) and reach[s] != reach[t]:
            raise LpInfeasibleError(f"infinite-penalty pair {i} is disconnected")

    if pool is None:
        pool = []
    best = None  # IntegralSolution
    best_key = None

    def consider(edges):
        nonlocal best, best_key
        sol = forest_solution(inst, _prune_forest(inst, edges))
        key = (sol.objective, tuple(sorted(sol.forest)))
        if best is None or key < best_key:
            best, best_key = sol, key

    # greedy start: connect everything connectable, and also try the empty forest
    consider(set(range(inst.graph.num_edges)))
    if not any(inst.is_infinite(i) for i in range(inst.num_pairs)):
        consider(set())

    # with nonnegative costs and penalties, some optimum contains any fixed
    # maximal forest of the zero-cost edges (extend it by edges of an optimum:
    # cost cannot grow, connectivity cannot shrink), so pin those edges up
    # front and drop the zero-cost edges that would close cycles with them
    uf = UnionFind(inst.graph.num_nodes)
    zero_in, zero_out = set(), set()
    for eid in range(inst.graph.num_edges):
        if inst.costs[eid] == 0:
            u, v = inst.graph.edges[eid]
            (zero_in if uf.union(u, v) else zero_out).add(eid)

    stack = [(frozenset(zero_in), frozenset(zero_out))]
    while stack:
        forced_in, forced_out = stack.pop()
        try:
            res = solve_cut_lp(inst, pool=pool, forced_in=forced_in, forced_out=forced_out)
        except LpInfeasibleError:
            continue
        fixed_cost = sum(inst.costs[e] for e in forced_in)
        bound = res.value + fixed_cost
        limit = best.objective if best is not None else None
        if cutoff is not None and (limit is None or cutoff < limit):
            limit = cutoff
        if limit is not None and bound >= limit:
            # an equal-value LP optimum may still be integral; harvest it
            if best is not None and bound == best.objective and \
                    _integral(res.solution.x, forced_in, forced_out):
                consider(forced_in | {e for e, v in res.solution.x.items() if v == 1})
            continue
        if _integral(res.solution.x, forced_in, forced_out):
            consider(forced_in | {e for e, v in res.solution.x.items() if v == 1})
            continue
        branch = _branch_edge(res.solution.x, forced_in, forced_out)
        # explore the "in" side first: tends to reach incumbents sooner
        stack.append((forced_in, forced_out | {branch}))
        stack.append((forced_in | {branch}, forced_out))
    return best


def _integral(x, forced_in, forced_out) -> bool:
    return all(v == 0 or v == 1 for e, v in x.items()
               if e not in forced_in and e not in forced_out)


def _branch_edge(x, forced_in, forced_out):
    best_e, best_gap = None, None
    for e, v in sorted(x.items()):
        if e in forced_in or e in forced_out or v == 0 or v == 1:
            continue
        gap = abs(v - Fraction(1, 2))
        if best_gap is None or gap < best_gap:
            best_e, best_gap = e, gap
    return best_e


def enumerate_forests(graph, edge_cap: int = ENUM_EDGE_CAP):
    """All acyclic edge subsets, by DFS with union-find pruning."""
    if graph.num_edges > edge_cap:
        raise ScaleCapError(f"enumerate cap exceeded: {graph.num_edges} > {edge_cap}")
    out = []

    def extend(next_eid, chosen):
        if next_eid == graph.num_edges:
            out.append(frozenset(chosen))
            return
        extend(next_eid + 1, chosen)
        u, v = graph.edges[next_eid]
        uf = UnionFind(graph.num_nodes)
        for e in chosen:
            a, b = graph.edges[e]
            uf.union(a, b)
        if not uf.connected(u, v):
            chosen.append(next_eid)
            extend(next_eid + 1, chosen)
            chosen.pop()

    extend(0, [])
    return out


def enumerate_ip(inst: PcsfInstance, edge_cap: int = ENUM_EDGE_CAP):
    """Exhaustive optimum: (optimal value, all optimal solutions)."""
    best_value = None
    best_solutions = []
    for forest in enumerate_forests(inst.graph, edge_cap=edge_cap):
        try:
            sol = forest_solution(inst, set(forest))
        except InstanceError:
            continue
        if sol.objective is None:
            continue
        if best_value is None or sol.objective < best_value:
            best_value = sol.objective
            best_solutions = [sol]
        elif sol.objective == best_value:
            best_solutions.append(sol)
    if best_value is None:
        raise LpInfeasibleError("no feasible forest (infinite-penalty pair disconnected)")
    best_solutions.sort(key=lambda s: tuple(sorted(s.forest)))
    return best_value, best_solutions


def gap(inst: PcsfInstance):
    """(lp, ip, ratio) with ratio = ip / lp, exactly; ratio 1 when both 0."""
    lp = solve_cut_lp(inst).value
    ip = solve_ip(inst).objective
    ratio = Fraction(1) if lp == 0 else ip / lp
    return lp, ip, ratio
