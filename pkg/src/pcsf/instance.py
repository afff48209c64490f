"""PCSF instance model, fractional points, and the text/JSON file formats."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .graph import Graph, GraphError
from .rational import INF, Infinite, format_rational, parse_penalty, parse_rational


class InstanceError(ValueError):
    pass


class PcsfInstance:
    """Graph + rational edge costs + terminal pairs + penalties.

    A penalty of INF means the pair must be connected (standard Steiner
    forest behaviour for that pair).
    """

    def __init__(self, graph: Graph, costs, pairs, penalties, node_names=None, meta=None):
        self.graph = graph
        self.costs = {eid: Fraction(c) for eid, c in costs.items()}
        self.pairs = [tuple(p) for p in pairs]
        self.penalties = {
            i: (p if isinstance(p, Infinite) else Fraction(p)) for i, p in penalties.items()
        }
        self.node_names = node_names or [str(i) for i in range(graph.num_nodes)]
        self.meta = meta or {}
        self._validate()

    def _validate(self):
        for eid in range(self.graph.num_edges):
            if eid not in self.costs:
                raise InstanceError(f"edge {eid} has no cost")
            if self.costs[eid] < 0:
                raise InstanceError(f"negative cost on edge {eid}")
        seen = set()
        for i, (s, t) in enumerate(self.pairs):
            if s == t:
                raise InstanceError(f"pair {i} has equal endpoints")
            if not (0 <= s < self.graph.num_nodes and 0 <= t < self.graph.num_nodes):
                raise InstanceError(f"pair {i} endpoint out of range")
            key = frozenset((s, t))
            if key in seen:
                raise InstanceError(f"duplicate pair {{{s},{t}}}")
            seen.add(key)
            pen = self.penalties.get(i)
            if pen is None:
                raise InstanceError(f"pair {i} has no penalty")
            if not isinstance(pen, Infinite) and pen < 0:
                raise InstanceError(f"negative penalty on pair {i}")

    @property
    def num_pairs(self) -> int:
        return len(self.pairs)

    def is_infinite(self, i: int) -> bool:
        return isinstance(self.penalties[i], Infinite)

    def finite_pairs(self):
        return [i for i in range(self.num_pairs) if not self.is_infinite(i)]

    def pair_index(self, u: int, v: int) -> int:
        key = frozenset((u, v))
        for i, (s, t) in enumerate(self.pairs):
            if frozenset((s, t)) == key:
                return i
        raise InstanceError(f"no pair {{{u},{v}}}")

    def objective(self, x, z) -> Fraction:
        total = sum((self.costs[e] * x.get(e, Fraction(0)) for e in range(self.graph.num_edges)),
                    Fraction(0))
        for i in range(self.num_pairs):
            zi = z.get(i, Fraction(0))
            if zi:
                if self.is_infinite(i):
                    raise InstanceError(f"nonzero z on infinite-penalty pair {i}")
                total += self.penalties[i] * zi
        return total

    def structurally_equal(self, other) -> bool:
        return (self.graph.num_nodes == other.graph.num_nodes
                and self.graph.edges == other.graph.edges
                and self.costs == other.costs
                and self.pairs == other.pairs
                and self.penalties == other.penalties)


@dataclass
class FracSolution:
    """Rational point (x, z) for (PCSF-LP); z is indexed by pair id."""

    x: dict = field(default_factory=dict)
    z: dict = field(default_factory=dict)

    def validate_for(self, inst: PcsfInstance):
        if set(self.x) != set(range(inst.graph.num_edges)):
            raise InstanceError("x domain does not match instance edges")
        if set(self.z) != set(range(inst.num_pairs)):
            raise InstanceError("z domain does not match instance pairs")
        for i, v in self.z.items():
            if not (0 <= v <= 1):
                raise InstanceError(f"z[{i}] outside [0,1]")
        for e, v in self.x.items():
            if v < 0:
                raise InstanceError(f"x[{e}] negative")


# --- file formats -------------------------------------------------------

def write_instance(inst: PcsfInstance, path):
    with open(path, "w") as fh:
        fh.write("pcsf 1\n")
        for eid, (u, v) in enumerate(inst.graph.edges):
            fh.write(f"edge {inst.node_names[u]} {inst.node_names[v]} "
                     f"{format_rational(inst.costs[eid])}\n")
        for i, (s, t) in enumerate(inst.pairs):
            fh.write(f"pair {inst.node_names[s]} {inst.node_names[t]} "
                     f"{format_rational(inst.penalties[i])}\n")


def read_instance(path) -> PcsfInstance:
    names = {}
    order = []
    raw_edges = []
    raw_pairs = []

    def node(tok):
        if tok not in names:
            names[tok] = len(order)
            order.append(tok)
        return names[tok]

    with open(path) as fh:
        header = None
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if header is None:
                if parts != ["pcsf", "1"]:
                    raise InstanceError(f"{path}:{lineno}: expected 'pcsf 1' header")
                header = parts
                continue
            if parts[0] == "edge" and len(parts) == 4:
                raw_edges.append((node(parts[1]), node(parts[2]), parse_rational(parts[3])))
            elif parts[0] == "pair" and len(parts) == 4:
                raw_pairs.append((node(parts[1]), node(parts[2]), parse_penalty(parts[3])))
            else:
                raise InstanceError(f"{path}:{lineno}: malformed line: {line!r}")
    if header is None:
        raise InstanceError(f"{path}: missing 'pcsf 1' header")
    g = Graph(len(order), [(u, v) for u, v, _ in raw_edges])
    costs = {eid: c for eid, (_, _, c) in enumerate(raw_edges)}
    pairs = [(s, t) for s, t, _ in raw_pairs]
    penalties = {i: p for i, (_, _, p) in enumerate(raw_pairs)}
    return PcsfInstance(g, costs, pairs, penalties, node_names=order)


def write_instance_json(inst: PcsfInstance, path):
    doc = {
        "version": 1,
        "edges": [
            {"u": inst.node_names[u], "v": inst.node_names[v],
             "cost": format_rational(inst.costs[eid])}
            for eid, (u, v) in enumerate(inst.graph.edges)
        ],
        "pairs": [
            {"s": inst.node_names[s], "t": inst.node_names[t],
             "penalty": format_rational(inst.penalties[i])}
            for i, (s, t) in enumerate(inst.pairs)
        ],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)


def read_instance_json(path) -> PcsfInstance:
    with open(path) as fh:
        doc = json.load(fh)
    names = {}
    order = []

    def node(tok):
        tok = str(tok)
        if tok not in names:
            names[tok] = len(order)
            order.append(tok)
        return names[tok]

    raw_edges = [(node(e["u"]), node(e["v"]), parse_rational(str(e["cost"])))
                 for e in doc["edges"]]
    raw_pairs = [(node(p["s"]), node(p["t"]), parse_penalty(str(p["penalty"])))
                 for p in doc["pairs"]]
    g = Graph(len(order), [(u, v) for u, v, _ in raw_edges])
    return PcsfInstance(
        g,
        {eid: c for eid, (_, _, c) in enumerate(raw_edges)},
        [(s, t) for s, t, _ in raw_pairs],
        {i: p for i, (_, _, p) in enumerate(raw_pairs)},
        node_names=order,
    )


def write_frac_solution(sol: FracSolution, path):
    with open(path, "w") as fh:
        for eid in sorted(sol.x):
            fh.write(f"x {eid} {format_rational(sol.x[eid])}\n")
        for i in sorted(sol.z):
            fh.write(f"z {i} {format_rational(sol.z[i])}\n")


def read_frac_solution(path) -> FracSolution:
    sol = FracSolution()
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3 or parts[0] not in ("x", "z"):
                raise InstanceError(f"{path}:{lineno}: malformed line: {line!r}")
            idx = int(parts[1])
            val = parse_rational(parts[2])
            if parts[0] == "x":
                sol.x[idx] = val
            else:
                sol.z[idx] = val
    return sol


# --- base graphs --------------------------------------------------------

def _complete_graph(q: int) -> Graph:
    return Graph(q, [(u, v) for u in range(q) for v in range(u + 1, q)])


def _prism_graph() -> Graph:
    # K3 x K2: two triangles joined by a perfect matching
    edges = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)]
    return Graph(6, edges)


def make_base(kind: str, path=None) -> Graph:
    """Build and validate a regular, maximally edge-connected base graph.

    ``kind`` is one of ``k4``, ``complete(q)``, ``prism``, ``from_file``.
    The result is checked to be l-regular and l-edge-connected where l is
    the common degree; a violation is reported with the offending node.
    """
    from .graph import edge_connectivity

    kind = kind.strip().lower()
    if kind == "k4":
        g = _complete_graph(4)
    elif kind.startswith("complete(") and kind.endswith(")"):
        q = int(kind[len("complete("):-1])
        if q < 4:
            raise InstanceError("complete(q) requires q >= 4")
        g = _complete_graph(q)
    elif kind == "prism":
        g = _prism_graph()
    elif kind == "from_file":
        if path is None:
            raise InstanceError("from_file base requires a path")
        inst = read_instance(path)
        g = inst.graph
    else:
        raise InstanceError(f"unknown base kind: {kind!r}")

    degree = g.degree(0)
    for node in range(g.num_nodes):
        if g.degree(node) != degree:
            raise InstanceError(f"base graph not regular: node {node} has degree "
                                f"{g.degree(node)}, expected {degree}")
    conn = edge_connectivity(g)
    if conn != degree:
        raise InstanceError(f"base graph not {degree}-edge-connected "
                            f"(edge connectivity {conn})")
    return g


def regular_degree(g: Graph) -> int:
    degree = g.degree(0)
    if any(g.degree(v) != degree for v in range(g.num_nodes)):
        raise GraphError("graph is not regular")
    return degree
