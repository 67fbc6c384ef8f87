"""Computational DAG data model, validation, metrics, and reference evaluator.

Nodes carry one arithmetic opcode each (add/mul/max/min) or are data
terminals (input/const). Edges carry an operand-slot index so operand order
is explicit. The sequential reference evaluator defined here is the
correctness oracle for the compiler and the simulator.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Mapping, Sequence


class Op(Enum):
    ADD = "ADD"
    MUL = "MUL"
    MAX = "MAX"
    MIN = "MIN"
    INPUT = "INPUT"
    CONST = "CONST"

    @property
    def is_compute(self) -> bool:
        return self not in (Op.INPUT, Op.CONST)


COMPUTE_OPS = (Op.ADD, Op.MUL, Op.MAX, Op.MIN)


class DagError(Exception):
    """Base class for DAG structure errors."""


class CycleDetected(DagError):
    def __init__(self, cycle: Sequence[int]):
        self.cycle = list(cycle)
        super().__init__(f"cycle detected: {' -> '.join(map(str, self.cycle))}")


class BadArity(DagError):
    def __init__(self, node: int, msg: str):
        self.node = node
        super().__init__(f"node {node}: {msg}")


class BadSlot(DagError):
    def __init__(self, node: int, msg: str):
        self.node = node
        super().__init__(f"node {node}: {msg}")


class MissingInput(DagError):
    def __init__(self, node: int):
        self.node = node
        super().__init__(f"no value supplied for input node {node}")


class NonAssociativeWideNode(DagError):
    def __init__(self, node: int):
        self.node = node
        super().__init__(f"node {node} has more than 2 operands and a non-decomposable op")


@dataclass(frozen=True)
class Node:
    id: int
    op: Op
    const_value: float | None = None


class Dag:
    """Immutable node/edge structure.

    ``edges`` are (src, dst, slot) triples; slot gives the operand position
    on the destination node. Construction only checks that node ids are
    dense and edge endpoints exist; structural rules are enforced by
    :func:`validate`.
    """

    __slots__ = ("nodes", "edges", "_operands", "_consumers", "_topo")

    def __init__(self, nodes: Iterable[Node], edges: Iterable[tuple[int, int, int]]):
        self.nodes: tuple[Node, ...] = tuple(nodes)
        self.edges: tuple[tuple[int, int, int], ...] = tuple(edges)
        for i, nd in enumerate(self.nodes):
            if nd.id != i:
                raise DagError(f"node ids must be dense: position {i} holds id {nd.id}")
        n = len(self.nodes)
        ops: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        cons: list[list[int]] = [[] for _ in range(n)]
        for src, dst, slot in self.edges:
            if not (0 <= src < n and 0 <= dst < n):
                raise DagError(f"edge ({src}, {dst}, {slot}) references unknown node")
            ops[dst].append((slot, src))
            cons[src].append(dst)
        self._operands: tuple[tuple[tuple[int, int], ...], ...] = tuple(
            tuple(sorted(sl)) for sl in ops
        )
        self._consumers: tuple[tuple[int, ...], ...] = tuple(tuple(c) for c in cons)
        self._topo: tuple[int, ...] | None = None

    def __len__(self) -> int:
        return len(self.nodes)

    def operands(self, node: int) -> tuple[int, ...]:
        """Operand node ids of ``node`` in slot order."""
        return tuple(src for _, src in self._operands[node])

    def consumers(self, node: int) -> tuple[int, ...]:
        return self._consumers[node]

    def in_degree(self, node: int) -> int:
        return len(self._operands[node])

    def compute_nodes(self) -> list[int]:
        return [nd.id for nd in self.nodes if nd.op.is_compute]

    @property
    def topo_order(self) -> tuple[int, ...]:
        """Topological order of all nodes; raises CycleDetected if cyclic."""
        if self._topo is None:
            self._topo = tuple(_kahn_order(self))
        return self._topo


class DagBuilder:
    """Incremental construction helper; emits dense ids in creation order."""

    def __init__(self):
        self._nodes: list[Node] = []
        self._edges: list[tuple[int, int, int]] = []

    def input(self) -> int:
        nid = len(self._nodes)
        self._nodes.append(Node(nid, Op.INPUT))
        return nid

    def const(self, value: float) -> int:
        nid = len(self._nodes)
        self._nodes.append(Node(nid, Op.CONST, float(value)))
        return nid

    def node(self, op: Op, *srcs: int) -> int:
        nid = len(self._nodes)
        self._nodes.append(Node(nid, op))
        for slot, src in enumerate(srcs):
            self._edges.append((src, nid, slot))
        return nid

    def build(self) -> Dag:
        return Dag(self._nodes, self._edges)


def _kahn_order(dag: Dag) -> list[int]:
    n = len(dag)
    indeg = [dag.in_degree(i) for i in range(n)]
    ready = [i for i in range(n) if indeg[i] == 0]
    ready.sort()
    order: list[int] = []
    head = 0
    while head < len(ready):
        u = ready[head]
        head += 1
        order.append(u)
        for v in dag.consumers(u):
            indeg[v] -= 1
            if indeg[v] == 0:
                ready.append(v)
    if len(order) < n:
        raise CycleDetected(_find_cycle(dag, {i for i in range(n) if indeg[i] > 0}))
    return order


def _find_cycle(dag: Dag, candidates: set[int]) -> list[int]:
    # Walk predecessors inside the unresolved set until a node repeats; the
    # reversed walk is a cycle in forward edge orientation.
    start = min(candidates)
    seen: dict[int, int] = {}
    path = [start]
    cur = start
    while cur not in seen:
        seen[cur] = len(path) - 1
        cur = next(s for s in dag.operands(cur) if s in candidates)
        path.append(cur)
    return list(reversed(path[seen[cur]:]))


def validate(dag: Dag) -> None:
    """Check acyclicity, slot density, and arity rules; raise on the first violation."""
    for nd in dag.nodes:
        slots = [s for s, _ in dag._operands[nd.id]]
        if len(set(slots)) != len(slots):
            raise BadSlot(nd.id, "duplicate operand slot")
        if slots != list(range(len(slots))):
            raise BadSlot(nd.id, f"slots not dense from 0: {slots}")
        if nd.op.is_compute:
            if len(slots) == 0:
                raise BadArity(nd.id, f"{nd.op.value} node has no operands")
        else:
            if len(slots) != 0:
                raise BadArity(nd.id, f"{nd.op.value} node must have in-degree 0")
            if nd.op is Op.CONST and nd.const_value is None:
                raise BadArity(nd.id, "CONST node lacks a value")
    dag.topo_order  # raises CycleDetected on cyclic graphs


def is_binary(dag: Dag) -> bool:
    return all(dag.in_degree(i) <= 2 for i in range(len(dag)))


def normalize_arity(dag: Dag) -> Dag:
    """Lower nodes with more than two operands to balanced binary trees.

    The wide node keeps its id and becomes the tree root, so consumers are
    unaffected; helper nodes are appended with fresh ids. Evaluation results
    are unchanged under exact arithmetic because only associative ops
    (add/mul/max/min) may be wide.
    """
    nodes = list(dag.nodes)
    edges: list[tuple[int, int, int]] = []
    for nd in dag.nodes:
        srcs = dag.operands(nd.id)
        if len(srcs) <= 2:
            for slot, src in enumerate(srcs):
                edges.append((src, nd.id, slot))
            continue
        if nd.op not in COMPUTE_OPS:
            raise NonAssociativeWideNode(nd.id)
        # Pairwise-combine adjacent operands until two remain for the root.
        level = list(srcs)
        while len(level) > 2:
            nxt: list[int] = []
            for i in range(0, len(level) - 1, 2):
                hid = len(nodes)
                nodes.append(Node(hid, nd.op))
                edges.append((level[i], hid, 0))
                edges.append((level[i + 1], hid, 1))
                nxt.append(hid)
            if len(level) % 2:
                nxt.append(level[-1])
            level = nxt
        edges.append((level[0], nd.id, 0))
        edges.append((level[1], nd.id, 1))
    return Dag(nodes, edges)


@dataclass(frozen=True)
class DagMetrics:
    node_count: int
    critical_path_len: int
    parallelism: int


def parallelism_from_counts(node_count: int, critical_path_len: int) -> int:
    """Parallelism bound: node count over longest path length, floor division."""
    return node_count // critical_path_len


def metrics(dag: Dag) -> DagMetrics:
    """Node count, critical path length (in nodes), and floor(n/l)."""
    if len(dag) == 0:
        raise ValueError("metrics undefined for an empty DAG")
    depth = [0] * len(dag)
    for u in dag.topo_order:
        ops = dag.operands(u)
        depth[u] = 1 + (max(depth[s] for s in ops) if ops else 0)
    longest = max(depth)
    return DagMetrics(len(dag), longest, parallelism_from_counts(len(dag), longest))


def asap_levels(dag: Dag) -> list[int]:
    """ASAP level per node: inputs/consts at 0, compute at 1 + max pred level."""
    level = [0] * len(dag)
    for u in dag.topo_order:
        ops = dag.operands(u)
        if dag.nodes[u].op.is_compute:
            level[u] = 1 + max((level[s] for s in ops), default=0)
    return level


def _op_fn(model, op: Op) -> Callable:
    if op is Op.ADD:
        return model.add
    if op is Op.MUL:
        return model.mul
    if op is Op.MAX:
        return model.max_
    return model.min_


def evaluate_reference(dag: Dag, inputs: Mapping[int, float], model) -> dict[int, object]:
    """Evaluate every node in topological order under the given arithmetic model.

    ``inputs`` maps INPUT node ids to real values; the returned map holds the
    model's word for every node. Deterministic: identical inputs give
    bit-identical outputs.
    """
    values: dict[int, object] = {}
    for u in dag.topo_order:
        nd = dag.nodes[u]
        if nd.op is Op.INPUT:
            if u not in inputs:
                raise MissingInput(u)
            values[u] = model.from_real(inputs[u])
        elif nd.op is Op.CONST:
            values[u] = model.from_real(nd.const_value)
        else:
            srcs = dag.operands(u)
            if len(srcs) == 1:
                # Unary degenerate case (pre-normalization single-operand node):
                # the op over one operand is the operand itself.
                values[u] = values[srcs[0]]
            else:
                fn = _op_fn(model, nd.op)
                acc = values[srcs[0]]
                for s in srcs[1:]:
                    acc = fn(acc, values[s])
                values[u] = acc
    return values
