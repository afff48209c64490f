"""Cutting-plane solver for the cut LP, feasibility and vertex certificates.

The LP min c.x + pi.z subject to x(delta(S)) + z_i >= 1 for every cut S
separating pair i is solved by repeated exact LP solves with min-cut
separation.  Infinite-penalty pairs have their z fixed to 0.  Vertex
verification checks a family of tight constraints and certifies
uniqueness by an exact rank computation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import simplex
from .graph import Graph, component_labels, min_cut
from .instance import FracSolution, InstanceError, PcsfInstance

DEFAULT_EPS = Fraction(1, 10**9)


class LpInfeasibleError(RuntimeError):
    """An infinite-penalty pair cannot be connected at all."""


@dataclass(frozen=True)
class CutConstraint:
    """x(delta(side)) + z_pair >= 1, or a nonnegativity constraint.

    kind 'cut' requires side to contain exactly one endpoint of the pair;
    'nonneg_x' is x_edge >= 0 and 'nonneg_z' is z_pair >= 0.
    """

    pair: int | None
    side: frozenset | None
    kind: str = "cut"
    edge: int | None = None

    def validate(self, inst: PcsfInstance):
        if self.kind == "cut":
            s, t = inst.pairs[self.pair]
            if (s in self.side) == (t in self.side):
                raise InstanceError(f"cut side does not separate pair {self.pair}")
        elif self.kind == "nonneg_x":
            if not (0 <= self.edge < inst.graph.num_edges):
                raise InstanceError(f"unknown edge {self.edge}")
        elif self.kind == "nonneg_z":
            if not (0 <= self.pair < inst.num_pairs):
                raise InstanceError(f"unknown pair {self.pair}")
        else:
            raise InstanceError(f"unknown constraint kind {self.kind!r}")


@dataclass
class LpResult:
    solution: FracSolution
    value: Fraction
    active_cuts: list
    iterations: int


def _delta_value(g: Graph, x, side) -> Fraction:
    total = Fraction(0)
    for eid, (u, v) in enumerate(g.edges):
        if (u in side) != (v in side):
            total += x.get(eid, Fraction(0))
    return total


def separate(inst: PcsfInstance, point: FracSolution, mode: str = "exact",
             eps: Fraction = DEFAULT_EPS):
    """First violated cut in pair-index order, or None if feasible."""
    slack = Fraction(0) if mode == "exact" else Fraction(eps)
    for i, (s, t) in enumerate(inst.pairs):
        zi = point.z.get(i, Fraction(0))
        value, side = min_cut(inst.graph, point.x, s, t)
        if value + zi < 1 - slack:
            return CutConstraint(pair=i, side=frozenset(side))
    return None


def check_feasible(inst: PcsfInstance, point: FracSolution, mode: str = "exact"):
    """None when feasible, otherwise the violated constraint."""
    for eid in range(inst.graph.num_edges):
        if point.x.get(eid, Fraction(0)) < 0:
            return CutConstraint(pair=None, side=None, kind="nonneg_x", edge=eid)
    for i in range(inst.num_pairs):
        if point.z.get(i, Fraction(0)) < 0:
            return CutConstraint(pair=i, side=None, kind="nonneg_z")
    return separate(inst, point, mode=mode)


def solve_cut_lp(inst: PcsfInstance, mode: str = "exact", pool=None,
                 forced_in=frozenset(), forced_out=frozenset(),
                 eps: Fraction = DEFAULT_EPS):
    """Cutting-plane engine; also used with edge restrictions by branch
    and bound.  Forced-in edges count as permanently bought (capacity 1,
    cost already paid by the caller), forced-out edges as deleted.

    Returns an LpResult whose value covers only the free variables.
    """
    g = inst.graph
    forced_in = frozenset(forced_in)
    forced_out = frozenset(forced_out)
    slack = Fraction(0) if mode == "exact" else Fraction(eps)

    labels = component_labels(g, forced_in)
    free_edges = [e for e in range(g.num_edges)
                  if e not in forced_in and e not in forced_out]
    auto = [labels[s] == labels[t] for (s, t) in inst.pairs]
    z_pairs = [i for i in range(inst.num_pairs)
               if not auto[i] and not inst.is_infinite(i)]

    # an infinite-penalty pair that cannot be connected at all is a hard failure
    reach = component_labels(g, set(free_edges) | forced_in)
    for i, (s, t) in enumerate(inst.pairs):
        if inst.is_infinite(i) and reach[s] != reach[t]:
            raise LpInfeasibleError(f"infinite-penalty pair {i} is disconnected")

    xcol = {e: j for j, e in enumerate(free_edges)}
    zcol = {i: len(free_edges) + j for j, i in enumerate(z_pairs)}
    num_vars = len(free_edges) + len(z_pairs)
    cost = [inst.costs[e] for e in free_edges] + [inst.penalties[i] for i in z_pairs]

    cuts = []
    seen = set()

    def add_cut(i, side):
        key = (i, side)
        if key in seen:
            return False
        seen.add(key)
        cuts.append((i, side))
        return True

    if pool:
        for (i, side) in pool:
            add_cut(i, side)

    def row_of(i, side):
        row = {}
        rhs = Fraction(1)
        for eid, (u, v) in enumerate(g.edges):
            if (u in side) != (v in side):
                if eid in forced_in:
                    rhs -= 1
                elif eid in xcol:
                    row[xcol[eid]] = row.get(xcol[eid], Fraction(0)) + 1
        if i in zcol:
            row[zcol[i]] = Fraction(1)
        return row, rhs

    iterations = 0
    while True:
        rows, senses, rhs = [], [], []
        live = []
        for (i, side) in cuts:
            if auto[i]:
                continue
            row, b = row_of(i, side)
            if b <= 0:
                continue
            rows.append(row)
            senses.append(">=")
            rhs.append(b)
            live.append((i, side))
        sol = simplex.solve_min(num_vars, cost, rows, senses, rhs)
        iterations += 1
        x = {e: Fraction(0) for e in range(g.num_edges)}
        for e in forced_in:
            x[e] = Fraction(1)
        for e, j in xcol.items():
            x[e] = sol.x[j]
        z = {i: Fraction(0) for i in range(inst.num_pairs)}
        for i, j in zcol.items():
            z[i] = sol.x[j]

        violated = []
        for i, (s, t) in enumerate(inst.pairs):
            if auto[i]:
                continue
            value, side = min_cut(g, x, s, t)
            if value + z[i] < 1 - slack:
                violated.append((i, frozenset(side)))
        if violated:
            # drop cuts strictly slack at the optimum: the optimal duals live
            # on tight rows, so the relaxed LP keeps the same value and the
            # cutting-plane objective stays monotone; dropped cuts may return
            # through separation later
            kept = [(i, side) for (i, side) in live
                    if _delta_value(g, x, side) + z[i] == 1]
            cuts = kept
            seen = set(kept)
        if not violated:
            point = FracSolution(x=x, z=z)
            tight = [CutConstraint(pair=i, side=side) for (i, side) in live
                     if _delta_value(g, x, side) + z[i] == 1]
            if pool is not None:
                pool.clear()
                pool.extend((c.pair, c.side) for c in tight)
            return LpResult(solution=point, value=sol.objective,
                            active_cuts=tight, iterations=iterations)
        for (i, side) in violated:
            add_cut(i, side)


def solve_lp(inst: PcsfInstance, mode: str = "exact") -> LpResult:
    """Optimal value of the cut LP over the full exponential cut family."""
    return solve_cut_lp(inst, mode=mode)


def matrix_rank_exact(rows, ncols: int) -> int:
    """Rank over the rationals by Gaussian elimination on sparse dict rows."""
    work = [dict(r) for r in rows]
    rank = 0
    pivots = {}  # col -> reduced row
    for row in work:
        r = {c: Fraction(v) for c, v in row.items() if v}
        while True:
            # pivot rows are normalized with their leading (smallest) column,
            # so eliminating the smallest shared column only introduces
            # larger ones; repeat until no pivot column remains in the row
            shared = r.keys() & pivots.keys()
            if not shared:
                break
            col = min(shared)
            f = r[col]
            for c, v in pivots[col].items():
                nv = r.get(c, Fraction(0)) - f * v
                if nv:
                    r[c] = nv
                else:
                    r.pop(c, None)
        r = {c: v for c, v in r.items() if v}
        if not r:
            continue
        col = min(r)
        inv = Fraction(1) / r[col]
        r = {c: v * inv for c, v in r.items()}
        pivots[col] = r
        rank += 1
    return rank


@dataclass
class VertexReport:
    is_feasible: bool
    all_tight: bool
    unique: bool
    rank: int
    dimension: int
    failures: list = field(default_factory=list)


def verify_vertex(inst: PcsfInstance, point: FracSolution, family) -> VertexReport:
    """Certify that ``point`` is an extreme point of the cut LP.

    Checks feasibility by full separation, exact tightness of every family
    member, and that the tight rows span the whole (x, z) space: rank
    equal to |E| + |pairs| makes the point the unique solution of the
    tight system, hence a vertex.
    """
    for c in family:
        c.validate(inst)
    failures = []
    violated = check_feasible(inst, point)
    feasible = violated is None
    if not feasible:
        failures.append(("infeasible", violated))

    m = inst.graph.num_edges
    all_tight = True
    rows = []
    for c in family:
        if c.kind == "cut":
            value = _delta_value(inst.graph, point.x, c.side) + point.z.get(c.pair, Fraction(0))
            tight = value == 1
            row = {}
            for eid, (u, v) in enumerate(inst.graph.edges):
                if (u in c.side) != (v in c.side):
                    row[eid] = Fraction(1)
            row[m + c.pair] = Fraction(1)
        elif c.kind == "nonneg_x":
            tight = point.x.get(c.edge, Fraction(0)) == 0
            row = {c.edge: Fraction(1)}
        else:
            tight = point.z.get(c.pair, Fraction(0)) == 0
            row = {m + c.pair: Fraction(1)}
        if not tight:
            all_tight = False
            failures.append(("not_tight", c))
        rows.append(row)

    dimension = m + inst.num_pairs
    rank = matrix_rank_exact(rows, dimension)
    unique = all_tight and rank == dimension
    return VertexReport(is_feasible=feasible, all_tight=all_tight, unique=unique,
                        rank=rank, dimension=dimension, failures=failures)
